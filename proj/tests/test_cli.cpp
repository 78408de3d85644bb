#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "deltasim/analytic.hpp"
#include "deltasim/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DELTASIM_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("deltasim_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("spectrum command") {
  TempDir dir;
  const std::string out = dir / "s.csv";
  const Run r = run("spectrum --T 0 --gamma-c 0 --phi-mw 1.5707963267948966 "
                    "--delta-p-range=-20:20:0.1 --out " + out);
  REQUIRE(r.code == 0);
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 402);
  CHECK(rows[0] == std::vector<std::string>{"delta_p", "re_rho31", "im_rho31", "absorption"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 4);
    CHECK(std::stod(rows[i][3]) == -std::stod(rows[i][2]));
  }
  CHECK(slurp(out).find('\r') == std::string::npos);

  const json meta = json::parse(slurp(dir / "s.json"));
  CHECK(meta["format_version"] == 1);
  CHECK(meta["command"] == "spectrum");
  CHECK(meta["config"]["spectrum"]["delta_p"]["count"] == 401);

  const std::string first = slurp(out);
  REQUIRE(run("spectrum --delta-p-range=-20:20:0.1 --out " + out).code == 0);
  CHECK(slurp(out) == first);
}

TEST_CASE("propagate command") {
  TempDir dir;
  SUBCASE("decoupled medium") {
    const std::string out = dir / "p.csv";
    REQUIRE(run("propagate --eta 0 --out " + out).code == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 202);
    CHECK(rows[0] == std::vector<std::string>{"z", "re_omega_p", "im_omega_p", "intensity"});
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][3] == rows[1][3]);
  }
  SUBCASE("warm vapour amplification") {
    const std::string out = dir / "p.csv";
    const Run r = run("propagate --T 333 --gamma-c 0.1 --phi-mw 1.5707963267948966 --out " + out);
    REQUIRE(r.code == 0);
    double input = 0, output = 0, delta = 0;
    char region = 0;
    REQUIRE(std::sscanf(r.out.c_str(), "input=%lf output=%lf delta_i=%lf region=%c", &input,
                        &output, &delta, &region) == 4);
    CHECK(delta > 0.0);
    CHECK(region == 'A');
    const auto rows = read_csv(out);
    CHECK(std::stod(rows.back()[3]) == output);
    const json meta = json::parse(slurp(dir / "p.json"));
    CHECK(meta["summary"]["region"] == "A");
  }
}

TEST_CASE("contour command") {
  TempDir dir;
  SUBCASE("default grid size") {
    const std::string out = dir / "c.csv";
    REQUIRE(run("contour --slices 4 --quad-nodes 8 --out " + out).code == 0);
    const auto rows = read_csv(out);
    REQUIRE(rows.size() == 2461);
    CHECK(rows[0] == std::vector<std::string>{"T", "gamma_c", "delta_i", "delta_i_off", "region"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
      REQUIRE(rows[i].size() == 5);
      const auto expected = deltasim::classify_region(std::stod(rows[i][2]), std::stod(rows[i][3]));
      CHECK(rows[i][4] == std::string(1, static_cast<char>(expected)));
    }
    const json meta = json::parse(slurp(dir / "c.json"));
    CHECK(meta["threshold_curve"].is_array());
    CHECK(meta["reference_curve"].is_array());
    CHECK(meta["missing"].empty());
  }
  SUBCASE("zero-temperature threshold and plot script") {
    const std::string out = dir / "c0.csv";
    REQUIRE(run("contour --T-range 0:0:1 --gamma-c-range 0.1:3.0:0.1 --plot --out " + out).code == 0);
    const json meta = json::parse(slurp(dir / "c0.json"));
    REQUIRE(meta["threshold_curve"].size() == 1);
    CHECK(meta["threshold_curve"][0]["T"] == 0.0);
    CHECK(meta["threshold_curve"][0]["gamma_c"].get<double>() == doctest::Approx(1.62).epsilon(0.10));
    CHECK(fs::exists(dir / "c0_plot.py"));
  }
}

TEST_CASE("threshold command") {
  SUBCASE("zero temperature") {
    const Run r = run("threshold --T 0");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    for (const char* key : {"format_version", "T", "bracket", "gamma_th", "gamma_ref",
                            "threshold_found", "reference_found", "analytic_threshold",
                            "analytic_valid", "note"})
      CHECK(j.contains(key));
    CHECK(j["threshold_found"] == true);
    CHECK(j["gamma_th"].get<double>() ==
          doctest::Approx(j["analytic_threshold"].get<double>()).epsilon(0.10));
    CHECK(j["analytic_valid"] == true);
  }
  SUBCASE("no drive") {
    const Run r = run("threshold --T 0 --omega-mw 0");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["threshold_found"] == false);
    CHECK(j["gamma_th"].is_null());
    CHECK(j["gamma_ref"].is_null());
  }
  SUBCASE("finite temperature note") {
    const json j = json::parse(run("threshold --T 300").out);
    CHECK(j["analytic_valid"] == false);
  }
}

TEST_CASE("configuration precedence and exit codes") {
  TempDir dir;
  const std::string cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"thermal": {"temperature": 100}, "spectrum": {"delta_p": {"min": -1, "max": 1, "count": 3}}})";
  REQUIRE(run("spectrum --config " + cfg + " --out " + (dir / "a.csv")).code == 0);
  CHECK(json::parse(slurp(dir / "a.json"))["config"]["thermal"]["temperature"] == 100.0);
  REQUIRE(run("spectrum --config " + cfg + " --T 50 --out " + (dir / "b.csv")).code == 0);
  CHECK(json::parse(slurp(dir / "b.json"))["config"]["thermal"]["temperature"] == 50.0);

  CHECK(run("spectrum --gamma-c -1").code == 1);
  CHECK(run("spectrum --quad-method simpson").code == 1);
  CHECK(run("spectrum --delta-p-range 0:1:0.3").code == 1);
  CHECK(run("spectrum --no-such-flag").code == 1);
  CHECK(run("").code == 1);
  std::ofstream(dir / "bad.json") << R"({"sytem": {}})";
  CHECK(run("spectrum --config " + (dir / "bad.json")).code == 1);

  CHECK(run("spectrum --out /nonexistent-dir/s.csv").code == 2);
  CHECK(run("spectrum --config " + (dir / "missing.json")).code == 2);

  std::ofstream(dir / "dead.json")
      << R"({"system": {"omega_p": 0, "omega_c": 0, "omega_mw": 0, "gamma_12": 0, "gamma_13": 0, "gamma_23": 0}})";
  CHECK(run("spectrum --config " + (dir / "dead.json") + " --out " + (dir / "d.csv")).code == 3);

  CHECK(run("--help").code == 0);
}
