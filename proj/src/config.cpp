#include "deltasim/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>

#include "deltasim/error.hpp"

namespace deltasim {

using nlohmann::json;

namespace {

// Reads keys from one JSON object and rejects any key it was not asked about.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  void number(const char* key, double& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "expected a number");
    out = v.get<double>();
  }

  void integer(const char* key, int& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(key, "expected an integer");
    const auto x = v.get<long long>();
    if (x < -2147483647LL || x > 2147483647LL) fail(key, "integer out of range");
    out = static_cast<int>(x);
  }

  void boolean(const char* key, bool& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    out = v.get<bool>();
  }

  void string(const char* key, std::string& out) {
    if (!has(key)) return;
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "expected a string");
    out = v.get<std::string>();
  }

  std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }

  [[noreturn]] void fail(const char* key, const std::string& msg) const {
    throw ConfigError(path(key) + ": " + msg);
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw ConfigError("unknown key " + path(item.key().c_str()));
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

void read_grid(Section& parent, const char* key, LinearGrid& grid) {
  if (!parent.has(key)) return;
  Section s(parent.raw(key), parent.path(key));
  s.number("min", grid.min);
  s.number("max", grid.max);
  if (s.has("count") && s.has("step")) s.fail("step", "give either count or step, not both");
  if (s.has("step")) {
    double step = 0.0;
    s.number("step", step);
    try {
      grid = LinearGrid::from_step(grid.min, grid.max, step);
    } catch (const InvalidParameter& e) {
      s.fail("step", e.what());
    }
  }
  s.integer("count", grid.count);
  s.finish();
}

json grid_json(const LinearGrid& g) { return {{"min", g.min}, {"max", g.max}, {"count", g.count}}; }

template <typename Fn>
void check(const char* where, Fn&& fn) {
  try {
    fn();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string(where) + ": " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

SystemParams SystemConfig::params() const {
  SystemParams p;
  p.omega_p = std::polar(omega_p, phi_p);
  p.omega_c = std::polar(omega_c, phi_c);
  p.omega_mw = omega_mw;
  p.phi_mw = phi_mw;
  p.delta_p = delta_p;
  p.delta_c = delta_c;
  p.delta_mw = delta_mw;
  p.gamma_12 = gamma_12;
  p.gamma_13 = gamma_13;
  p.gamma_23 = gamma_23;
  p.gamma_c = gamma_c;
  p.eta = eta;
  return p;
}

AtomicConstants RunConfig::atom() const {
  AtomicConstants c;
  c.mass = mass_u * phys::kAtomicMassUnit;
  c.hyperfine_freq = hyperfine_freq;
  c.probe_wavelength = probe_wavelength;
  c.kp = 2.0 * std::numbers::pi / probe_wavelength;
  c.delta_k = delta_k;
  c.kc = c.kp - delta_k;
  return c;
}

CellGeometry RunConfig::cell() const {
  CellGeometry g;
  g.length = cell_length;
  g.z0 = cell_z0;
  g.n_slices = n_slices;
  g.delta_k = delta_k;
  return g;
}

ThermalEnv RunConfig::thermal() const { return ThermalEnv::at(temperature, atom()); }

void RunConfig::validate() const {
  require(system.omega_p >= 0.0, "system.omega_p must be >= 0");
  require(system.omega_c >= 0.0, "system.omega_c must be >= 0");
  require(std::isfinite(system.phi_p) && std::isfinite(system.phi_c),
          "system field phases must be finite");
  check("system", [&] { system.params().validate(); });
  require(std::isfinite(temperature) && temperature >= 0.0, "thermal.temperature must be >= 0");
  require(mass_u > 0.0 && std::isfinite(mass_u), "atom.mass_u must be > 0");
  require(probe_wavelength > 0.0 && std::isfinite(probe_wavelength),
          "atom.probe_wavelength must be > 0");
  check("atom", [&] { atom().validate(); });
  check("cell", [&] { cell().validate(); });
  check("quadrature", [&] { quadrature.validate(); });
  require(std::isfinite(spectrum.z), "spectrum.z must be finite");
  check("spectrum.delta_p", [&] { spectrum.delta_p.validate(); });
  check("contour.temperature", [&] { contour.temperature.validate(); });
  check("contour.gamma_c", [&] { contour.gamma_c.validate(); });
  require(contour.temperature.min >= 0.0, "contour.temperature must be >= 0");
  require(contour.gamma_c.min > 0.0, "contour.gamma_c must be > 0");
  require(threshold.bracket.lo > 0.0 && threshold.bracket.hi > threshold.bracket.lo &&
              std::isfinite(threshold.bracket.hi),
          "threshold bracket must satisfy 0 < lo < hi");
  require(threshold.roots.tolerance > 0.0, "threshold.tolerance must be > 0");
  require(threshold.roots.residual >= 0.0, "threshold.residual must be >= 0");
  require(threshold.roots.max_iterations >= 1, "threshold.max_iterations must be >= 1");
  require(threads >= 0, "threads must be >= 0");
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Section root(j, "");

  if (root.has("format_version")) {
    int version = 0;
    root.integer("format_version", version);
    if (version != kFormatVersion)
      root.fail("format_version", "unsupported version " + std::to_string(version));
  }

  if (root.has("system")) {
    Section s(root.raw("system"), "system");
    auto& y = c.system;
    s.number("omega_p", y.omega_p);
    s.number("phi_p", y.phi_p);
    s.number("omega_c", y.omega_c);
    s.number("phi_c", y.phi_c);
    s.number("omega_mw", y.omega_mw);
    s.number("phi_mw", y.phi_mw);
    s.number("delta_p", y.delta_p);
    s.number("delta_c", y.delta_c);
    s.number("delta_mw", y.delta_mw);
    s.number("gamma_12", y.gamma_12);
    s.number("gamma_13", y.gamma_13);
    s.number("gamma_23", y.gamma_23);
    s.number("gamma_c", y.gamma_c);
    s.number("eta", y.eta);
    s.finish();
  }

  if (root.has("thermal")) {
    Section s(root.raw("thermal"), "thermal");
    s.number("temperature", c.temperature);
    s.finish();
  }

  if (root.has("atom")) {
    Section s(root.raw("atom"), "atom");
    s.number("mass_u", c.mass_u);
    s.number("hyperfine_freq", c.hyperfine_freq);
    s.number("probe_wavelength", c.probe_wavelength);
    s.number("delta_k", c.delta_k);
    s.finish();
  }

  bool z0_given = false;
  if (root.has("cell")) {
    Section s(root.raw("cell"), "cell");
    s.number("length", c.cell_length);
    if (s.has("z0") && !s.raw("z0").is_null()) {
      s.number("z0", c.cell_z0);
      z0_given = true;
    }
    s.integer("n_slices", c.n_slices);
    s.finish();
  }
  if (!z0_given) c.cell_z0 = -0.5 * c.cell_length;

  if (root.has("quadrature")) {
    Section s(root.raw("quadrature"), "quadrature");
    if (s.has("method")) {
      std::string name;
      s.string("method", name);
      try {
        c.quadrature.method = parse_method(name);
      } catch (const ConfigError& e) {
        s.fail("method", e.what());
      }
    }
    s.integer("nodes", c.quadrature.nodes);
    s.number("span", c.quadrature.span);
    s.finish();
  }

  if (root.has("spectrum")) {
    Section s(root.raw("spectrum"), "spectrum");
    s.number("z", c.spectrum.z);
    read_grid(s, "delta_p", c.spectrum.delta_p);
    s.boolean("lock_mw_detuning", c.spectrum.lock_mw_detuning);
    s.finish();
  }

  if (root.has("contour")) {
    Section s(root.raw("contour"), "contour");
    read_grid(s, "temperature", c.contour.temperature);
    read_grid(s, "gamma_c", c.contour.gamma_c);
    s.boolean("plot_script", c.contour.plot_script);
    s.finish();
  }

  if (root.has("threshold")) {
    Section s(root.raw("threshold"), "threshold");
    s.number("lo", c.threshold.bracket.lo);
    s.number("hi", c.threshold.bracket.hi);
    s.number("tolerance", c.threshold.roots.tolerance);
    s.number("residual", c.threshold.roots.residual);
    s.integer("max_iterations", c.threshold.roots.max_iterations);
    s.finish();
  }

  root.string("output", c.output);
  root.integer("threads", c.threads);
  root.finish();

  c.validate();
  return c;
}

json config_to_json(const RunConfig& c) {
  const auto& y = c.system;
  return {
      {"format_version", kFormatVersion},
      {"system",
       {{"omega_p", y.omega_p},
        {"phi_p", y.phi_p},
        {"omega_c", y.omega_c},
        {"phi_c", y.phi_c},
        {"omega_mw", y.omega_mw},
        {"phi_mw", y.phi_mw},
        {"delta_p", y.delta_p},
        {"delta_c", y.delta_c},
        {"delta_mw", y.delta_mw},
        {"gamma_12", y.gamma_12},
        {"gamma_13", y.gamma_13},
        {"gamma_23", y.gamma_23},
        {"gamma_c", y.gamma_c},
        {"eta", y.eta}}},
      {"thermal", {{"temperature", c.temperature}}},
      {"atom",
       {{"mass_u", c.mass_u},
        {"hyperfine_freq", c.hyperfine_freq},
        {"probe_wavelength", c.probe_wavelength},
        {"delta_k", c.delta_k}}},
      {"cell", {{"length", c.cell_length}, {"z0", c.cell_z0}, {"n_slices", c.n_slices}}},
      {"quadrature",
       {{"method", method_name(c.quadrature.method)},
        {"nodes", c.quadrature.nodes},
        {"span", c.quadrature.span}}},
      {"spectrum",
       {{"z", c.spectrum.z},
        {"delta_p", grid_json(c.spectrum.delta_p)},
        {"lock_mw_detuning", c.spectrum.lock_mw_detuning}}},
      {"contour",
       {{"temperature", grid_json(c.contour.temperature)},
        {"gamma_c", grid_json(c.contour.gamma_c)},
        {"plot_script", c.contour.plot_script}}},
      {"threshold",
       {{"lo", c.threshold.bracket.lo},
        {"hi", c.threshold.bracket.hi},
        {"tolerance", c.threshold.roots.tolerance},
        {"residual", c.threshold.roots.residual},
        {"max_iterations", c.threshold.roots.max_iterations}}},
      {"output", c.output},
      {"threads", c.threads},
  };
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string method_name(DopplerQuadrature::Method method) {
  switch (method) {
    case DopplerQuadrature::Method::Residue:
      return "residue";
    case DopplerQuadrature::Method::GaussHermite:
      return "gauss-hermite";
    case DopplerQuadrature::Method::Trapezoid:
      return "trapezoid";
  }
  return "residue";
}

DopplerQuadrature::Method parse_method(const std::string& name) {
  if (name == "residue") return DopplerQuadrature::Method::Residue;
  if (name == "gauss-hermite") return DopplerQuadrature::Method::GaussHermite;
  if (name == "trapezoid") return DopplerQuadrature::Method::Trapezoid;
  throw ConfigError("unknown quadrature method '" + name +
                    "' (expected residue, gauss-hermite or trapezoid)");
}

int effective_threads(int threads) {
  if (threads > 0) return threads;
  if (const char* env = std::getenv("DELTASIM_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0 && n < 4096) return static_cast<int>(n);
  }
  return 0;
}

}  // namespace deltasim
