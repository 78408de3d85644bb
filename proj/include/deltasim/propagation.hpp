#pragma once

#include <vector>

#include "deltasim/qsys.hpp"
#include "deltasim/thermal.hpp"

namespace deltasim {

/// Vapour cell along z. The default entry point z0 = -L/2 centres the cell on
/// the loop-phase reference plane, so the mid-cell loop phase equals phi_mw.
struct CellGeometry {
  double length = 0.05;    // m
  double z0 = -0.025;      // m
  int n_slices = 200;
  double delta_k = 63.624;  // 1/m

  void validate() const;
};

struct PropagationTrace {
  std::vector<double> z_grid;             // n_slices + 1 slice boundaries
  std::vector<Complex> omega_p_profile;   // probe amplitude at each boundary
  double input_intensity = 0.0;
  double output_intensity = 0.0;
  double delta_i = 0.0;                   // output - input
  bool extinguished = false;              // |Omega_p| fell below 1e-12 of the input
};

/// Relative phase of the three fields at z, reduced to [0, 2*pi).
double loop_phase(double z, double delta_k, double phi_mw);

/// Marches the probe through the cell slice by slice:
///   Omega_p <- Omega_p + i * eta * rho13_bar(z_mid) * dz,
/// with the Doppler-averaged coherence evaluated at each slice midpoint using
/// the current probe amplitude. Coupling and microwave fields are undepleted.
/// With the microwave off this attenuates the probe.
PropagationTrace propagate(const SystemParams& params, const ThermalEnv& env,
                           const AtomicConstants& consts, const CellGeometry& cell,
                           const DopplerQuadrature& quad = {});

/// propagate() with the microwave drive switched off (plain Lambda baseline).
PropagationTrace microwave_off_transmission(const SystemParams& params, const ThermalEnv& env,
                                            const AtomicConstants& consts,
                                            const CellGeometry& cell,
                                            const DopplerQuadrature& quad = {});

}  // namespace deltasim
