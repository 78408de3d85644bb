#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deltasim/propagation.hpp"
#include "deltasim/thermal.hpp"

namespace deltasim {

/// `count` equally spaced values from min to max inclusive.
struct LinearGrid {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  /// min:max:step form; the step must divide the span to within 1e-6 steps.
  static LinearGrid from_step(double min, double max, double step);
  /// Parses "MIN:MAX:STEP".
  static LinearGrid parse(const std::string& text);

  std::vector<double> values() const;
  void validate() const;  // count >= 1; max > min when count > 1
};

struct SpectrumResult {
  std::vector<double> detuning_grid;
  std::vector<Complex> rho31_values;
  std::vector<double> absorption_values;  // Im rho_13 = -Im rho_31, positive = loss
};

struct SpectrumOptions {
  bool lock_mw_detuning = true;  // set delta_mw = delta_p at every point
  int threads = 1;
};

SpectrumResult spectrum(const SystemParams& params, const ThermalEnv& env,
                        const AtomicConstants& consts, double z, const LinearGrid& grid,
                        const DopplerQuadrature& quad = {}, const SpectrumOptions& options = {});

enum class Region : char { A = 'A', B = 'B', C = 'C' };

/// A: net gain; B: loss, but less than without the drive; C: at least the
/// drive-off loss.
Region classify_region(double delta_i, double delta_i_off);

struct Bracket {
  double lo = 0.001;
  double hi = 3.0;
};

struct RootOptions {
  double tolerance = 1e-3;      // final bracket width, angular MHz
  double residual = 1e-6;       // |g(root)| target relative to the input intensity
  int max_iterations = 200;
};

/// Dephasing rate where the probe intensity change crosses zero, by bisection
/// on delta_i(gamma_c). Throws NoRootInRange without a sign change.
double find_threshold(const SystemParams& params, const ThermalEnv& env,
                      const AtomicConstants& consts, const CellGeometry& cell,
                      const DopplerQuadrature& quad, Bracket bracket,
                      const RootOptions& options = {});

/// Dephasing rate where the drive-on and drive-off transmissions coincide.
double find_reference(const SystemParams& params, const ThermalEnv& env,
                      const AtomicConstants& consts, const CellGeometry& cell,
                      const DopplerQuadrature& quad, Bracket bracket,
                      const RootOptions& options = {});

struct CurvePoint {
  double temperature = 0.0;
  double gamma_c = 0.0;
};

struct ContourResult {
  std::vector<double> t_grid;
  std::vector<double> gamma_c_grid;
  // Row-major in (T, gamma_c): index = it * gamma_c_grid.size() + ig.
  // Missing points hold NaN and no region.
  std::vector<double> delta_i_grid;
  std::vector<double> delta_i_off_grid;
  std::vector<std::optional<Region>> region_grid;
  std::vector<CurvePoint> threshold_curve;
  std::vector<CurvePoint> reference_curve;
  std::vector<CurvePoint> missing;

  std::size_t index(std::size_t it, std::size_t ig) const { return it * gamma_c_grid.size() + ig; }
};

struct ContourOptions {
  int threads = 1;
  RootOptions roots{};
};

/// Fills the drive-on/drive-off grids, labels regions, and refines the first
/// zero crossing (threshold) and equality crossing (reference) in each
/// temperature column by bisection. Failed grid points are recorded as missing.
ContourResult contour(const SystemParams& params, const AtomicConstants& consts,
                      const CellGeometry& cell, const std::vector<double>& t_grid,
                      const std::vector<double>& gamma_c_grid, const DopplerQuadrature& quad = {},
                      const ContourOptions& options = {});

}  // namespace deltasim
