#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "deltasim/propagation.hpp"
#include "deltasim/sweep.hpp"

namespace deltasim {

/// 17 significant digits, C locale. NaN prints as "nan".
std::string format_double(double x);

/// CSV writers: header row, comma separated, '\n' line endings. Throw IoError.
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& result);
void write_propagation_csv(const std::filesystem::path& path, const PropagationTrace& trace);
void write_contour_csv(const std::filesystem::path& path, const ContourResult& result);

/// Threshold/reference curves and missing points of a contour run.
nlohmann::json contour_summary(const ContourResult& result);

/// foo.csv -> foo.json
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// Pretty-printed with a trailing newline. Throws IoError.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Matplotlib script that reads a contour CSV and draws delta_i with the
/// region boundaries. Throws IoError.
void write_contour_plot_script(const std::filesystem::path& path,
                               const std::filesystem::path& csv);

}  // namespace deltasim
