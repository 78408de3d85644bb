#pragma once

// Closed-form zero-temperature results for a weak probe with all population in
// |1> (rho_11 = 1, rho_22 = 0, rho_23 ~ 0). They are oracles for that regime
// only and do not check it themselves.
//
// Sign convention: these expressions count the probe detuning with the
// opposite sign to build_hamiltonian, so analytic_rho31 at delta_p equals the
// simulator's rho_13 at -delta_p (identical on resonance).

#include "deltasim/propagation.hpp"
#include "deltasim/qsys.hpp"

namespace deltasim {

struct AnalyticWidths {
  Complex gamma12_eff;  // gamma_12/2 + 2 gamma_c - i Delta_mw
  Complex gamma13_eff;  // gamma_c/2 + gamma_13 - i delta_p
};

AnalyticWidths analytic_widths(const SystemParams& params);

/// (i G12 Omega_p - Omega_c Omega_mw e^{i(dk z + phi_mw)}) / (G12 G13 + |Omega_c|^2).
/// Throws SingularParameter when the denominator modulus is below 1e-12.
Complex analytic_rho31(const SystemParams& params, double z, double delta_k);

/// Probe amplitude at the cell exit from the closed-form slowly-varying
/// envelope solution driven by analytic_rho31 (no alpha*L << 1 shortcut).
Complex analytic_transmission(const SystemParams& params, const CellGeometry& cell);

/// Threshold dephasing rate Omega_mw Omega_c / (Omega_p0 pi), obtained from the
/// transmission with alpha*L << 1 and dk*L = pi.
double analytic_threshold(double omega_mw, double omega_c, double omega_p0);

}  // namespace deltasim
