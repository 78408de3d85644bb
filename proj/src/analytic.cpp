#include "deltasim/analytic.hpp"

#include <cmath>
#include <numbers>

#include "deltasim/error.hpp"

namespace deltasim {

namespace {

Complex denominator(const AnalyticWidths& w, const SystemParams& params) {
  const Complex d = w.gamma12_eff * w.gamma13_eff + std::norm(params.omega_c);
  if (std::abs(d) < 1e-12) throw SingularParameter("vanishing analytic denominator");
  return d;
}

}  // namespace

AnalyticWidths analytic_widths(const SystemParams& params) {
  return {Complex(0.5 * params.gamma_12 + 2.0 * params.gamma_c, -params.delta_mw),
          Complex(0.5 * params.gamma_c + params.gamma_13, -params.delta_p)};
}

Complex analytic_rho31(const SystemParams& params, double z, double delta_k) {
  const auto w = analytic_widths(params);
  const Complex d = denominator(w, params);
  const Complex i_unit(0.0, 1.0);
  const Complex drive = std::polar(params.omega_mw, delta_k * z + params.phi_mw);
  return (i_unit * w.gamma12_eff * params.omega_p - params.omega_c * drive) / d;
}

Complex analytic_transmission(const SystemParams& params, const CellGeometry& cell) {
  const auto w = analytic_widths(params);
  const Complex d = denominator(w, params);
  const Complex i_unit(0.0, 1.0);
  const Complex alpha = params.eta * w.gamma12_eff / d;
  const Complex rate = alpha + i_unit * cell.delta_k;
  if (std::abs(rate) == 0.0) throw SingularParameter("alpha + i dk vanishes");

  const double length = cell.length;
  const Complex drive = std::polar(params.omega_mw, cell.delta_k * cell.z0 + params.phi_mw);
  // alpha / G12 written as eta / D so that G12 = 0 stays finite.
  const Complex source = i_unit * (params.eta / d) * params.omega_c * drive *
                         (std::exp(rate * length) - 1.0) / rate;
  return std::exp(-alpha * length) * (params.omega_p - source);
}

double analytic_threshold(double omega_mw, double omega_c, double omega_p0) {
  if (omega_p0 == 0.0) throw SingularParameter("threshold undefined without a probe");
  if (!(omega_p0 > 0.0)) throw InvalidParameter("probe amplitude must be > 0");
  return omega_mw * omega_c / (omega_p0 * std::numbers::pi);
}

}  // namespace deltasim
