// deltasim: spectra, propagation, contour maps and thresholds for the
// microwave-closed Delta system.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "deltasim/analytic.hpp"
#include "deltasim/config.hpp"
#include "deltasim/error.hpp"
#include "deltasim/output.hpp"
#include "deltasim/sweep.hpp"

namespace {

using namespace deltasim;
using nlohmann::json;

enum Exit { kOk = 0, kConfig = 1, kIo = 2, kNumeric = 3 };

struct Overrides {
  std::optional<std::string> config, out, quad_method, delta_p_range, gamma_c_range, t_range;
  std::optional<int> threads, quad_nodes, slices;
  std::optional<double> temperature, gamma_c, phi_mw, omega_mw, omega_p, omega_c, eta, delta_p, z,
      z0, length;
  bool no_lock = false;
  bool plot = false;
};

LinearGrid parse_range(const std::string& flag, const std::string& text) {
  try {
    return LinearGrid::parse(text);
  } catch (const InvalidParameter& e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

RunConfig resolve(const Overrides& o) {
  RunConfig c = o.config ? load_config(*o.config) : config_from_json(json::object());
  if (o.out) c.output = *o.out;
  if (o.threads) c.threads = *o.threads;
  if (o.quad_nodes) c.quadrature.nodes = *o.quad_nodes;
  if (o.quad_method) c.quadrature.method = parse_method(*o.quad_method);
  if (o.slices) c.n_slices = *o.slices;
  if (o.temperature) c.temperature = *o.temperature;
  if (o.gamma_c) c.system.gamma_c = *o.gamma_c;
  if (o.phi_mw) c.system.phi_mw = *o.phi_mw;
  if (o.omega_mw) c.system.omega_mw = *o.omega_mw;
  if (o.omega_p) c.system.omega_p = *o.omega_p;
  if (o.omega_c) c.system.omega_c = *o.omega_c;
  if (o.eta) c.system.eta = *o.eta;
  if (o.delta_p) c.system.delta_p = *o.delta_p;
  if (o.z) c.spectrum.z = *o.z;
  if (o.length) {
    c.cell_length = *o.length;
    if (!o.z0) c.cell_z0 = -0.5 * c.cell_length;
  }
  if (o.z0) c.cell_z0 = *o.z0;
  if (o.no_lock) c.spectrum.lock_mw_detuning = false;
  if (o.plot) c.contour.plot_script = true;
  if (o.delta_p_range) c.spectrum.delta_p = parse_range("--delta-p-range", *o.delta_p_range);
  if (o.gamma_c_range) c.contour.gamma_c = parse_range("--gamma-c-range", *o.gamma_c_range);
  if (o.t_range) c.contour.temperature = parse_range("--T-range", *o.t_range);
  c.validate();
  return c;
}

std::string output_path(const RunConfig& c, const char* fallback) {
  return c.output.empty() ? std::string(fallback) : c.output;
}

json sidecar(const RunConfig& c, const char* command) {
  return {{"format_version", kFormatVersion}, {"command", command}, {"config", config_to_json(c)}};
}

void run_spectrum(const RunConfig& c) {
  SpectrumOptions opts;
  opts.lock_mw_detuning = c.spectrum.lock_mw_detuning;
  opts.threads = effective_threads(c.threads);
  const auto result = spectrum(c.system.params(), c.thermal(), c.atom(), c.spectrum.z,
                               c.spectrum.delta_p, c.quadrature, opts);
  const std::string path = output_path(c, "spectrum.csv");
  write_spectrum_csv(path, result);
  json meta = sidecar(c, "spectrum");
  meta["rows"] = result.detuning_grid.size();
  write_json(sidecar_path(path), meta);
}

void run_propagate(const RunConfig& c) {
  const auto params = c.system.params();
  const auto env = c.thermal();
  const auto atom = c.atom();
  const auto cell = c.cell();
  const auto on = propagate(params, env, atom, cell, c.quadrature);
  const auto off = microwave_off_transmission(params, env, atom, cell, c.quadrature);
  const Region region = classify_region(on.delta_i, off.delta_i);

  const std::string path = output_path(c, "propagate.csv");
  write_propagation_csv(path, on);
  json meta = sidecar(c, "propagate");
  meta["summary"] = {{"input_intensity", on.input_intensity},
                     {"output_intensity", on.output_intensity},
                     {"delta_i", on.delta_i},
                     {"delta_i_off", off.delta_i},
                     {"region", std::string(1, static_cast<char>(region))},
                     {"extinguished", on.extinguished}};
  write_json(sidecar_path(path), meta);

  std::printf("input=%s output=%s delta_i=%s region=%c\n", format_double(on.input_intensity).c_str(),
              format_double(on.output_intensity).c_str(), format_double(on.delta_i).c_str(),
              static_cast<char>(region));
}

void run_contour(const RunConfig& c) {
  ContourOptions opts;
  opts.threads = effective_threads(c.threads);
  opts.roots = c.threshold.roots;
  const auto result = contour(c.system.params(), c.atom(), c.cell(), c.contour.temperature.values(),
                              c.contour.gamma_c.values(), c.quadrature, opts);
  const std::string path = output_path(c, "contour.csv");
  write_contour_csv(path, result);
  json meta = sidecar(c, "contour");
  meta.update(contour_summary(result));
  write_json(sidecar_path(path), meta);
  if (c.contour.plot_script) {
    std::filesystem::path script = path;
    script.replace_extension();
    script += "_plot.py";
    write_contour_plot_script(script, path);
  }
}

void run_threshold(const RunConfig& c) {
  const auto params = c.system.params();
  const auto env = c.thermal();
  const auto atom = c.atom();
  const auto cell = c.cell();

  json out = {{"format_version", kFormatVersion},
              {"T", c.temperature},
              {"bracket", {c.threshold.bracket.lo, c.threshold.bracket.hi}}};
  try {
    out["gamma_th"] = find_threshold(params, env, atom, cell, c.quadrature, c.threshold.bracket,
                                     c.threshold.roots);
  } catch (const NoRootInRange&) {
    out["gamma_th"] = nullptr;
  }
  try {
    out["gamma_ref"] = find_reference(params, env, atom, cell, c.quadrature, c.threshold.bracket,
                                      c.threshold.roots);
  } catch (const NoRootInRange&) {
    out["gamma_ref"] = nullptr;
  }
  out["threshold_found"] = !out["gamma_th"].is_null();
  out["reference_found"] = !out["gamma_ref"].is_null();
  out["analytic_threshold"] =
      analytic_threshold(c.system.omega_mw, c.system.omega_c, c.system.omega_p);
  out["analytic_valid"] = c.temperature == 0.0;
  out["note"] = c.temperature == 0.0
                    ? "closed form assumes a weak probe at T = 0"
                    : "closed form assumes T = 0 and does not apply at this temperature";

  const std::string text = out.dump(2);
  std::cout << text << '\n';
  if (!c.output.empty()) write_json(c.output, out);
}

void add_common(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config, "JSON configuration file");
  app.add_option("--out", o.out, "output file (CSV; JSON sidecar alongside)");
  app.add_option("--threads", o.threads, "worker threads (0: DELTASIM_THREADS or all cores)");
  app.add_option("--quad-nodes", o.quad_nodes, "Doppler quadrature nodes");
  app.add_option("--quad-method", o.quad_method, "residue | gauss-hermite | trapezoid");
  app.add_option("--T", o.temperature, "temperature (K)");
  app.add_option("--gamma-c", o.gamma_c, "ground-state dephasing (angular MHz)");
  app.add_option("--phi-mw", o.phi_mw, "microwave phase (rad)");
  app.add_option("--omega-mw", o.omega_mw, "microwave Rabi frequency");
  app.add_option("--omega-p", o.omega_p, "probe Rabi frequency at the cell entry");
  app.add_option("--omega-c", o.omega_c, "coupling Rabi frequency");
  app.add_option("--eta", o.eta, "propagation coupling");
  app.add_option("--delta-p", o.delta_p, "probe detuning");
  app.add_option("--z", o.z, "position for spectra (m)");
  app.add_option("--z0", o.z0, "cell entry position (m)");
  app.add_option("--length", o.length, "cell length (m); moves z0 to -L/2 unless --z0 is given");
  app.add_option("--slices", o.slices, "propagation slices");
  app.add_option("--delta-p-range", o.delta_p_range, "spectrum grid MIN:MAX:STEP");
  app.add_option("--gamma-c-range", o.gamma_c_range, "contour gamma_c grid MIN:MAX:STEP");
  app.add_option("--T-range", o.t_range, "contour temperature grid MIN:MAX:STEP");
  app.add_flag("--no-lock", o.no_lock, "do not tie the microwave detuning to the probe detuning");
  app.add_flag("--plot", o.plot, "write a matplotlib script next to the contour CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probe spectra, propagation and gain maps for a microwave-closed Delta system"};
  app.fallthrough();
  app.require_subcommand(1);
  Overrides o;
  add_common(app, o);
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Doppler-averaged rho_31 versus probe detuning");
  auto* propagate_cmd = app.add_subcommand("propagate", "probe amplitude through the cell");
  auto* contour_cmd = app.add_subcommand("contour", "delta_i over a (T, gamma_c) grid");
  auto* threshold_cmd = app.add_subcommand("threshold", "gain threshold and reference dephasing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const RunConfig c = resolve(o);
    if (spectrum_cmd->parsed()) run_spectrum(c);
    if (propagate_cmd->parsed()) run_propagate(c);
    if (contour_cmd->parsed()) run_contour(c);
    if (threshold_cmd->parsed()) run_threshold(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kOk;
}
