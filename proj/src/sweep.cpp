#include "deltasim/sweep.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "deltasim/error.hpp"
#include "deltasim/parallel.hpp"

namespace deltasim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Fn>
double bisect(Fn&& g, Bracket bracket, const RootOptions& options, double scale,
              NoRootInRange::Kind kind, const char* what) {
  if (!(bracket.lo < bracket.hi))
    throw InvalidParameter(std::string(what) + ": bracket must satisfy lo < hi");
  double lo = bracket.lo, hi = bracket.hi;
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo == 0.0 && g_hi == 0.0)
    throw NoRootInRange(kind, std::string(what) + ": function vanishes identically on the bracket");
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if (!(g_lo * g_hi < 0.0))
    throw NoRootInRange(kind, std::string(what) + ": no sign change in [" + std::to_string(lo) +
                                  ", " + std::to_string(hi) + "]");

  const double residual = options.residual * scale;
  for (int iter = 0;; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    const bool narrow = (hi - lo) < options.tolerance;
    if (g_mid == 0.0 || (narrow && std::abs(g_mid) <= residual) ||
        iter >= options.max_iterations || (hi - lo) < 1e-12 * std::max(1.0, std::abs(mid)))
      return mid;
    if ((g_mid < 0.0) == (g_lo < 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
}

bool crosses(double a, double b) {
  return std::isfinite(a) && std::isfinite(b) && (a * b < 0.0 || (a != 0.0 && b == 0.0));
}

}  // namespace

LinearGrid LinearGrid::from_step(double min, double max, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidParameter("grid step must be > 0");
  if (!(max >= min)) throw InvalidParameter("grid max must be >= min");
  const double intervals = (max - min) / step;
  const double rounded = std::round(intervals);
  if (std::abs(intervals - rounded) > 1e-6)
    throw InvalidParameter("grid step does not divide the range");
  return {min, max, static_cast<int>(rounded) + 1};
}

LinearGrid LinearGrid::parse(const std::string& text) {
  std::istringstream in(text);
  std::string parts[3];
  for (auto& part : parts)
    if (!std::getline(in, part, ':')) throw InvalidParameter("range must be MIN:MAX:STEP: " + text);
  std::string extra;
  if (std::getline(in, extra)) throw InvalidParameter("range must be MIN:MAX:STEP: " + text);
  double v[3];
  for (int i = 0; i < 3; ++i) {
    std::size_t used = 0;
    try {
      v[i] = std::stod(parts[i], &used);
    } catch (const std::exception&) {
      throw InvalidParameter("bad number in range: " + text);
    }
    if (used != parts[i].size()) throw InvalidParameter("bad number in range: " + text);
  }
  return from_step(v[0], v[1], v[2]);
}

std::vector<double> LinearGrid::values() const {
  validate();
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = min;
    return out;
  }
  const double step = (max - min) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = min + i * step;
  out.back() = max;
  return out;
}

void LinearGrid::validate() const {
  if (count < 1) throw InvalidParameter("grid needs at least one point");
  if (!std::isfinite(min) || !std::isfinite(max)) throw InvalidParameter("grid bounds must be finite");
  if (count > 1 && !(max > min)) throw InvalidParameter("grid must be strictly increasing");
}

SpectrumResult spectrum(const SystemParams& params, const ThermalEnv& env,
                        const AtomicConstants& consts, double z, const LinearGrid& grid,
                        const DopplerQuadrature& quad, const SpectrumOptions& options) {
  params.validate();
  SpectrumResult out;
  out.detuning_grid = grid.values();
  const std::size_t n = out.detuning_grid.size();
  out.rho31_values.resize(n);
  out.absorption_values.resize(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    SystemParams p = params;
    p.delta_p = out.detuning_grid[i];
    if (options.lock_mw_detuning) p.delta_mw = p.delta_p;
    const Complex rho31 = doppler_average(p, env, consts, z, quad).rho31();
    out.rho31_values[i] = rho31;
    out.absorption_values[i] = -rho31.imag();
  });
  return out;
}

Region classify_region(double delta_i, double delta_i_off) {
  if (delta_i > 0.0) return Region::A;
  if (delta_i > delta_i_off) return Region::B;
  return Region::C;
}

double find_threshold(const SystemParams& params, const ThermalEnv& env,
                      const AtomicConstants& consts, const CellGeometry& cell,
                      const DopplerQuadrature& quad, Bracket bracket, const RootOptions& options) {
  auto g = [&](double gamma_c) {
    SystemParams p = params;
    p.gamma_c = gamma_c;
    return propagate(p, env, consts, cell, quad).delta_i;
  };
  return bisect(g, bracket, options, std::norm(params.omega_p), NoRootInRange::Kind::Threshold,
                "find_threshold");
}

double find_reference(const SystemParams& params, const ThermalEnv& env,
                      const AtomicConstants& consts, const CellGeometry& cell,
                      const DopplerQuadrature& quad, Bracket bracket, const RootOptions& options) {
  if (params.omega_mw == 0.0)
    throw NoRootInRange(NoRootInRange::Kind::Reference,
                        "find_reference: drive-on and drive-off coincide without a microwave");
  auto h = [&](double gamma_c) {
    SystemParams p = params;
    p.gamma_c = gamma_c;
    return propagate(p, env, consts, cell, quad).delta_i -
           microwave_off_transmission(p, env, consts, cell, quad).delta_i;
  };
  return bisect(h, bracket, options, std::norm(params.omega_p), NoRootInRange::Kind::Reference,
                "find_reference");
}

ContourResult contour(const SystemParams& params, const AtomicConstants& consts,
                      const CellGeometry& cell, const std::vector<double>& t_grid,
                      const std::vector<double>& gamma_c_grid, const DopplerQuadrature& quad,
                      const ContourOptions& options) {
  params.validate();
  cell.validate();
  quad.validate();
  if (t_grid.empty() || gamma_c_grid.empty()) throw InvalidParameter("contour grids must be nonempty");
  for (double g : gamma_c_grid)
    if (!(g > 0.0)) throw InvalidParameter("contour gamma_c values must be > 0");
  for (double t : t_grid)
    if (!(t >= 0.0)) throw InvalidParameter("contour temperatures must be >= 0");

  ContourResult out;
  out.t_grid = t_grid;
  out.gamma_c_grid = gamma_c_grid;
  const std::size_t n_t = t_grid.size(), n_g = gamma_c_grid.size();
  out.delta_i_grid.assign(n_t * n_g, kNaN);
  out.delta_i_off_grid.assign(n_t * n_g, kNaN);
  out.region_grid.assign(n_t * n_g, std::nullopt);

  parallel_for(n_t * n_g, options.threads, [&](std::size_t k) {
    const std::size_t it = k / n_g, ig = k % n_g;
    try {
      const ThermalEnv env = ThermalEnv::at(t_grid[it], consts);
      SystemParams p = params;
      p.gamma_c = gamma_c_grid[ig];
      const double on = propagate(p, env, consts, cell, quad).delta_i;
      const double off = p.omega_mw == 0.0
                             ? on
                             : microwave_off_transmission(p, env, consts, cell, quad).delta_i;
      out.delta_i_grid[k] = on;
      out.delta_i_off_grid[k] = off;
      out.region_grid[k] = classify_region(on, off);
    } catch (const Error&) {
      // left as NaN; collected below
    }
  });

  for (std::size_t k = 0; k < n_t * n_g; ++k)
    if (!out.region_grid[k]) out.missing.push_back({t_grid[k / n_g], gamma_c_grid[k % n_g]});

  std::vector<std::optional<double>> thresholds(n_t), references(n_t);
  parallel_for(n_t, options.threads, [&](std::size_t it) {
    const ThermalEnv env = ThermalEnv::at(t_grid[it], consts);
    for (std::size_t ig = 0; ig + 1 < n_g; ++ig) {
      const double a = out.delta_i_grid[out.index(it, ig)];
      const double b = out.delta_i_grid[out.index(it, ig + 1)];
      if (!crosses(a, b)) continue;
      try {
        thresholds[it] = find_threshold(params, env, consts, cell, quad,
                                        {gamma_c_grid[ig], gamma_c_grid[ig + 1]}, options.roots);
      } catch (const Error&) {
      }
      break;
    }
    if (params.omega_mw == 0.0) return;
    for (std::size_t ig = 0; ig + 1 < n_g; ++ig) {
      const std::size_t ka = out.index(it, ig), kb = out.index(it, ig + 1);
      const double a = out.delta_i_grid[ka] - out.delta_i_off_grid[ka];
      const double b = out.delta_i_grid[kb] - out.delta_i_off_grid[kb];
      if (!crosses(a, b)) continue;
      try {
        references[it] = find_reference(params, env, consts, cell, quad,
                                        {gamma_c_grid[ig], gamma_c_grid[ig + 1]}, options.roots);
      } catch (const Error&) {
      }
      break;
    }
  });

  for (std::size_t it = 0; it < n_t; ++it) {
    if (thresholds[it]) out.threshold_curve.push_back({t_grid[it], *thresholds[it]});
    if (references[it]) out.reference_curve.push_back({t_grid[it], *references[it]});
  }
  return out;
}

}  // namespace deltasim
