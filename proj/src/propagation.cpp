#include "deltasim/propagation.hpp"

#include <cmath>
#include <numbers>

#include "deltasim/error.hpp"

namespace deltasim {

void CellGeometry::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidParameter("cell length must be > 0");
  if (!std::isfinite(z0)) throw InvalidParameter("cell entry position must be finite");
  if (n_slices < 1) throw InvalidParameter("cell needs at least one slice");
  if (!(delta_k > 0.0)) throw InvalidParameter("delta_k must be > 0");
}

double loop_phase(double z, double delta_k, double phi_mw) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double phase = std::fmod(delta_k * z + phi_mw, two_pi);
  if (phase < 0.0) phase += two_pi;
  if (phase >= two_pi) phase = 0.0;
  return phase;
}

PropagationTrace propagate(const SystemParams& params, const ThermalEnv& env,
                           const AtomicConstants& consts, const CellGeometry& cell,
                           const DopplerQuadrature& quad) {
  params.validate();
  cell.validate();
  if (std::abs(cell.delta_k - consts.delta_k) > 1e-9 * consts.delta_k)
    throw InvalidParameter("cell delta_k differs from the atomic constants");
  if (!(std::abs(params.omega_p) > 0.0)) throw InvalidParameter("input probe amplitude must be > 0");

  const double dz = cell.length / cell.n_slices;
  const double floor = 1e-12 * std::abs(params.omega_p);
  const Complex i_eta(0.0, params.eta);

  PropagationTrace trace;
  trace.z_grid.reserve(cell.n_slices + 1);
  trace.omega_p_profile.reserve(cell.n_slices + 1);
  trace.z_grid.push_back(cell.z0);
  trace.omega_p_profile.push_back(params.omega_p);

  SystemParams slice = params;
  for (int s = 0; s < cell.n_slices; ++s) {
    const double z_mid = cell.z0 + (s + 0.5) * dz;
    const DensityMatrix rho = doppler_average(slice, env, consts, z_mid, quad);
    slice.omega_p += i_eta * rho.rho13() * dz;
    trace.z_grid.push_back(cell.z0 + (s + 1) * dz);
    trace.omega_p_profile.push_back(slice.omega_p);
    if (std::abs(slice.omega_p) < floor) trace.extinguished = true;
  }

  trace.input_intensity = std::norm(params.omega_p);
  trace.output_intensity = std::norm(trace.omega_p_profile.back());
  trace.delta_i = trace.output_intensity - trace.input_intensity;
  return trace;
}

PropagationTrace microwave_off_transmission(const SystemParams& params, const ThermalEnv& env,
                                            const AtomicConstants& consts,
                                            const CellGeometry& cell,
                                            const DopplerQuadrature& quad) {
  SystemParams off = params;
  off.omega_mw = 0.0;
  return propagate(off, env, consts, cell, quad);
}

}  // namespace deltasim
