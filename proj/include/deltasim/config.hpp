#pragma once

#include <filesystem>
#include <numbers>
#include <string>

#include <json.hpp>

#include "deltasim/propagation.hpp"
#include "deltasim/sweep.hpp"
#include "deltasim/thermal.hpp"

namespace deltasim {

inline constexpr int kFormatVersion = 1;

/// Field magnitudes and phases as written in a config file. Kept in polar
/// form so that re-serialization reproduces the input exactly.
struct SystemConfig {
  double omega_p = 1.0;
  double phi_p = 0.0;
  double omega_c = 6.4;
  double phi_c = 0.0;
  double omega_mw = 0.8;
  double phi_mw = std::numbers::pi / 2;
  double delta_p = 0.0;
  double delta_c = 0.0;
  double delta_mw = 0.0;
  double gamma_12 = 0.001;
  double gamma_13 = 5.0;
  double gamma_23 = 5.0;
  double gamma_c = 0.0;
  double eta = 1.0;

  SystemParams params() const;
};

struct SpectrumConfig {
  double z = 0.0;
  LinearGrid delta_p{-20.0, 20.0, 401};
  bool lock_mw_detuning = true;
};

struct ContourConfig {
  LinearGrid temperature{0.0, 400.0, 41};
  LinearGrid gamma_c{0.001, 3.0, 60};
  bool plot_script = false;
};

struct ThresholdConfig {
  Bracket bracket{};
  RootOptions roots{};
};

/// Everything a run needs. n-bar is not configurable: it follows from the
/// temperature and the hyperfine frequency.
struct RunConfig {
  SystemConfig system{};
  double temperature = 0.0;  // K
  double mass_u = 84.9118;
  double hyperfine_freq = 3.035e9;
  double probe_wavelength = 780.24e-9;
  double delta_k = 63.624;
  double cell_length = 0.05;
  double cell_z0 = -0.025;
  int n_slices = 200;
  DopplerQuadrature quadrature{};
  SpectrumConfig spectrum{};
  ContourConfig contour{};
  ThresholdConfig threshold{};
  std::string output;  // empty: the command picks a default file name
  int threads = 0;     // 0: DELTASIM_THREADS, then machine parallelism

  AtomicConstants atom() const;
  CellGeometry cell() const;
  ThermalEnv thermal() const;

  /// Runs every module precondition; throws ConfigError naming the field.
  void validate() const;
};

/// Missing keys take the defaults above; a null or missing cell.z0 means -L/2.
/// Unknown keys, wrong types and invalid values throw ConfigError.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& config);

RunConfig load_config(const std::filesystem::path& path);

std::string method_name(DopplerQuadrature::Method method);
DopplerQuadrature::Method parse_method(const std::string& name);

/// threads if positive, else DELTASIM_THREADS if set and positive, else 0.
int effective_threads(int threads);

}  // namespace deltasim
