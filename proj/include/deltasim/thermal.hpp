#pragma once

#include "deltasim/qsys.hpp"

namespace deltasim {

namespace phys {
inline constexpr double kBoltzmann = 1.380649e-23;     // J/K
inline constexpr double kPlanck = 6.62607015e-34;      // J s
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
}  // namespace phys

struct AtomicConstants {
  double mass = 0.0;              // kg
  double hyperfine_freq = 0.0;    // Hz
  double probe_wavelength = 0.0;  // m
  double kp = 0.0;                // 1/m
  double kc = 0.0;                // 1/m
  double delta_k = 0.0;           // kp - kc, 1/m

  /// 85Rb on the D2 line. kc is derived as kp - delta_k.
  static AtomicConstants rubidium85(double delta_k = 63.624);

  /// 2*pi*f_hf/c, the wavenumber difference implied by the hyperfine splitting.
  double splitting_delta_k() const;

  /// Throws InvalidParameter unless delta_k > 0, kp > kc > 0 and delta_k is
  /// within 1% of splitting_delta_k().
  void validate() const;
};

/// Bose-Einstein occupation 1/(exp(hf/kT) - 1); 0 at T = 0.
double thermal_nbar(double temperature, double freq_hz);

/// sqrt(2 k T / m).
double most_probable_speed(double temperature, double mass);

struct ThermalEnv {
  double temperature = 0.0;  // K
  double nbar = 0.0;
  double v_mp = 0.0;  // m/s

  static ThermalEnv at(double temperature, const AtomicConstants& consts);
};

/// How the Maxwell-Boltzmann average over the axial velocity is evaluated.
///
/// Residue (default): rho(v) is a rational function of v. Its partial-fraction
/// poles that sit within 2 v_mp of the real axis are integrated in closed form
/// with the Faddeeva function; the smooth remainder is integrated with an
/// n-node Gauss-Hermite rule.
///
/// GaussHermite: plain n-node rule on rho(v). Cheap but it cannot resolve the
/// ~1 m/s wide optical resonances of a warm vapour with tens of nodes.
///
/// Trapezoid: n equally spaced points on [-span v_mp, span v_mp].
struct DopplerQuadrature {
  enum class Method { Residue, GaussHermite, Trapezoid };

  Method method = Method::Residue;
  int nodes = 64;
  double span = 6.0;

  void validate() const;
};

/// Gaussian-weighted velocity average of the single-atom steady state at
/// position z. The bath occupation is taken from env (params.nbar is ignored).
/// At T = 0, or v_mp below 1e-6 m/s, this is the v = 0 steady state.
DensityMatrix doppler_average(const SystemParams& params, const ThermalEnv& env,
                              const AtomicConstants& consts, double z,
                              const DopplerQuadrature& quad = {});

}  // namespace deltasim
