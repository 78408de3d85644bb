#include "deltasim/output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "deltasim/error.hpp"

namespace deltasim {

namespace {

class TextFile {
 public:
  explicit TextFile(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  }

  std::ofstream& stream() { return out_; }

  void close() {
    out_.close();
    if (!out_) throw IoError("failed writing " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& result) {
  TextFile file(path);
  auto& out = file.stream();
  out << "delta_p,re_rho31,im_rho31,absorption\n";
  for (std::size_t i = 0; i < result.detuning_grid.size(); ++i)
    out << format_double(result.detuning_grid[i]) << ',' << format_double(result.rho31_values[i].real())
        << ',' << format_double(result.rho31_values[i].imag()) << ','
        << format_double(result.absorption_values[i]) << '\n';
  file.close();
}

void write_propagation_csv(const std::filesystem::path& path, const PropagationTrace& trace) {
  TextFile file(path);
  auto& out = file.stream();
  out << "z,re_omega_p,im_omega_p,intensity\n";
  for (std::size_t i = 0; i < trace.z_grid.size(); ++i) {
    const Complex w = trace.omega_p_profile[i];
    out << format_double(trace.z_grid[i]) << ',' << format_double(w.real()) << ','
        << format_double(w.imag()) << ',' << format_double(std::norm(w)) << '\n';
  }
  file.close();
}

void write_contour_csv(const std::filesystem::path& path, const ContourResult& result) {
  TextFile file(path);
  auto& out = file.stream();
  out << "T,gamma_c,delta_i,delta_i_off,region\n";
  for (std::size_t it = 0; it < result.t_grid.size(); ++it)
    for (std::size_t ig = 0; ig < result.gamma_c_grid.size(); ++ig) {
      const std::size_t k = result.index(it, ig);
      out << format_double(result.t_grid[it]) << ',' << format_double(result.gamma_c_grid[ig]) << ','
          << format_double(result.delta_i_grid[k]) << ','
          << format_double(result.delta_i_off_grid[k]) << ',';
      if (result.region_grid[k]) out << static_cast<char>(*result.region_grid[k]);
      out << '\n';
    }
  file.close();
}

nlohmann::json contour_summary(const ContourResult& result) {
  auto points = [](const std::vector<CurvePoint>& curve) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : curve) arr.push_back({{"T", p.temperature}, {"gamma_c", p.gamma_c}});
    return arr;
  };
  return {
      {"threshold_curve", points(result.threshold_curve)},
      {"reference_curve", points(result.reference_curve)},
      {"missing", points(result.missing)},
      {"complete", result.missing.empty()},
  };
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  if (p == csv) p += ".json";
  return p;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  TextFile file(path);
  file.stream() << j.dump(2) << '\n';
  file.close();
}

void write_contour_plot_script(const std::filesystem::path& path,
                               const std::filesystem::path& csv) {
  TextFile file(path);
  file.stream() << R"py(#!/usr/bin/env python3
import sys

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

csv = sys.argv[1] if len(sys.argv) > 1 else ")py"
                << csv.filename().string() << R"py("
df = pd.read_csv(csv)
T = np.sort(df["T"].unique())
g = np.sort(df["gamma_c"].unique())
grid = df.pivot(index="gamma_c", columns="T", values="delta_i").loc[g, T].to_numpy()
off = df.pivot(index="gamma_c", columns="T", values="delta_i_off").loc[g, T].to_numpy()

fig, ax = plt.subplots(figsize=(6, 4.5))
mesh = ax.pcolormesh(T, g, grid, shading="auto", cmap="RdBu_r")
fig.colorbar(mesh, ax=ax, label="delta_i")
ax.contour(T, g, grid, levels=[0.0], colors="k")
ax.contour(T, g, grid - off, levels=[0.0], colors="k", linestyles="--")
ax.set_xlabel("T (K)")
ax.set_ylabel("gamma_c (MHz)")
fig.tight_layout()
fig.savefig(csv.rsplit(".", 1)[0] + ".png", dpi=150)
)py";
  file.close();
}

}  // namespace deltasim
