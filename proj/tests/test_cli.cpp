#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using circirf::cli::run;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("circirf_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
};

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_rows(const std::string& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) row.push_back(std::stod(f));
    rows.push_back(row);
  }
  return rows;
}

const char* kThreePoints = "angle,value\n0.5,1.0\n2.0,-0.5\n4.0,2.0\n";

}  // namespace

TEST_CASE("predict at the data angles without nugget reproduces the data") {
  Sandbox s;
  const auto in = s.write("d.csv", kThreePoints);
  const auto r = invoke({"predict", "--input", in, "--kappa", "1", "--kernel", "spline-m1", "--nugget", "0", "--out",
                         s.path("p.csv")});
  REQUIRE(r.code == 0);
  CHECK(slurp(s.path("p.csv")).rfind("angle,prediction,kriging_variance\n", 0) == 0);
  const auto rows = read_rows(s.path("p.csv"));
  const double y[] = {1.0, -0.5, 2.0};
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rows[i][1] == doctest::Approx(y[i]).epsilon(1e-10));
    CHECK(std::abs(rows[i][2]) <= 1e-10);
  }
}

TEST_CASE("a huge nugget predicts the sample mean everywhere") {
  Sandbox s;
  const auto in = s.write("d.csv", kThreePoints);
  const auto r = invoke({"predict", "--input", in, "--nugget", "1e6", "--at", "0,1.1,2.7,5.9", "--out", s.path("p.csv")});
  REQUIRE(r.code == 0);
  const double mean = (1.0 - 0.5 + 2.0) / 3.0;
  for (const auto& row : read_rows(s.path("p.csv"))) CHECK(std::abs(row[1] - mean) <= 1e-4);
}

TEST_CASE("malformed rows are reported with their line number") {
  Sandbox s;
  const auto missing = s.write("m.csv", "angle,value\n0.5,1.0\n2.0\n4.0,2.0\n");
  auto r = invoke({"predict", "--input", missing, "--out", s.path("p.csv")});
  CHECK(r.code != 0);
  CHECK(r.err.find("m.csv:3") != std::string::npos);

  const auto garbled = s.write("g.csv", "angle,value\n0.5,1.0\n\n2.0,abc\n");
  r = invoke({"predict", "--input", garbled, "--out", s.path("p.csv")});
  CHECK(r.code != 0);
  CHECK(r.err.find("g.csv:4") != std::string::npos);

  const auto header = s.write("h.csv", "theta,y\n0.5,1.0\n");
  r = invoke({"fit", "--input", header, "--out", s.path("f.json")});
  CHECK(r.code != 0);
  CHECK(r.err.find("header") != std::string::npos);
}

TEST_CASE("too few observations for the order is an insufficient-data diagnostic") {
  Sandbox s;
  const auto in = s.write("d.csv", kThreePoints);
  const auto r = invoke({"predict", "--input", in, "--kappa", "3", "--kernel", "list:1,0.5,0.25", "--out", s.path("p.csv")});
  CHECK(r.code == circirf::cli::kExitInput);
  CHECK(r.err.find("insufficient data") != std::string::npos);
}

TEST_CASE("degree input is echoed in degrees") {
  Sandbox s;
  const auto in = s.write("d.csv", "angle,value\n0,1\n90,2\n180,0\n270,-1\n");
  const auto r = invoke({"predict", "--input", in, "--degrees", "--at", "45,90", "--out", s.path("p.csv")});
  REQUIRE(r.code == 0);
  const auto rows = read_rows(s.path("p.csv"));
  CHECK(rows[0][0] == 45.0);
  CHECK(rows[1][0] == 90.0);
  CHECK(rows[1][1] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("fit writes coefficients that reproduce the data") {
  Sandbox s;
  const auto in = s.write("d.csv", kThreePoints);
  const auto r = invoke({"fit", "--input", in, "--out", s.path("f.json")});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(s.path("f.json")));
  CHECK(j.at("dual_weights").size() == 3);
  CHECK(j.at("trend_coeffs").size() == 1);
  const auto fitted = j.at("fitted").get<std::vector<double>>();
  CHECK(fitted[2] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("simulation is deterministic under a fixed seed") {
  Sandbox s;
  for (const char* kernel : {"spline-m1", "brownian-bridge"}) {
    REQUIRE(invoke({"simulate", "--kernel", kernel, "--seed", "7", "--realizations", "5", "--out", s.path("a.csv")}).code == 0);
    REQUIRE(invoke({"simulate", "--kernel", kernel, "--seed", "7", "--realizations", "5", "--out", s.path("b.csv")}).code == 0);
    CHECK(slurp(s.path("a.csv")) == slurp(s.path("b.csv")));
    REQUIRE(invoke({"simulate", "--kernel", kernel, "--seed", "8", "--realizations", "5", "--out", s.path("c.csv")}).code == 0);
    CHECK(slurp(s.path("a.csv")) != slurp(s.path("c.csv")));
  }
}

TEST_CASE("brownian bridge file has one row per grid point and realization, pinned at zero") {
  Sandbox s;
  REQUIRE(invoke({"simulate", "--kernel", "brownian-bridge", "--grid-size", "512", "--realizations", "100", "--out",
                  s.path("b.csv")})
              .code == 0);
  const auto text = slurp(s.path("b.csv"));
  CHECK(text.rfind("angle,value,realization_index\n", 0) == 0);
  const auto rows = read_rows(s.path("b.csv"));
  CHECK(rows.size() == 512u * 100u);
  int pinned = 0;
  for (const auto& row : rows)
    if (row[0] == 0.0 && row[1] == 0.0) ++pinned;
  CHECK(pinned == 100);
}

TEST_CASE("simulated output feeds back into fit via realization_index") {
  Sandbox s;
  REQUIRE(invoke({"simulate", "--grid-size", "64", "--realizations", "2", "--out", s.path("sim.csv")}).code == 0);
  const auto r = invoke({"predict", "--input", s.path("sim.csv"), "--realization", "1", "--nugget", "0.01", "--at", "1",
                         "--out", s.path("p.csv")});
  CHECK(r.code == 0);
}

TEST_CASE("invalid spectra and aliasing are rejected") {
  Sandbox s;
  auto r = invoke({"simulate", "--kernel", "power:1,1", "--out", s.path("x.csv")});
  CHECK(r.code != 0);
  CHECK(r.err.find("non-summable") != std::string::npos);

  r = invoke({"simulate", "--kernel", "power:1,1.5,400", "--grid-size", "512", "--out", s.path("x.csv")});
  CHECK(r.code != 0);
  CHECK(r.err.find("aliasing") != std::string::npos);

  r = invoke({"simulate", "--kernel", "spline-m2", "--kappa", "2", "--out", s.path("x.csv")});
  CHECK(r.code != 0);

  r = invoke({"simulate", "--kernel", "list:1,-0.5", "--out", s.path("x.csv")});
  CHECK(r.code != 0);

  r = invoke({"simulate", "--nugget", "-1", "--out", s.path("x.csv")});
  CHECK(r.code != 0);
}

TEST_CASE("unknown config keys and bad flags are usage errors") {
  Sandbox s;
  const auto cfg = s.write("c.json", R"({"model": {"kappa": 1, "kernal": "spline-m1"}})");
  auto r = invoke({"simulate", "--config", cfg, "--out", s.path("x.csv")});
  CHECK(r.code == circirf::cli::kExitUsage);
  CHECK(r.err.find("kernal") != std::string::npos);

  r = invoke({"simulate", "--no-such-flag"});
  CHECK(r.code == circirf::cli::kExitUsage);
  r = invoke({});
  CHECK(r.code == circirf::cli::kExitUsage);
}

TEST_CASE("the resolved config reproduces every command byte for byte") {
  Sandbox s;
  const auto in = s.write("d.csv", kThreePoints);
  const std::vector<std::vector<std::string>> runs = {
      {"predict", "--input", in, "--kernel", "spline-m2", "--nugget", "0.3", "--at", "0.1,3", "--out", s.path("o1")},
      {"fit", "--input", in, "--kernel", "power:1.5,3", "--tau", "1.0", "--out", s.path("o2")},
      {"simulate", "--kernel", "list:0,1,0.5", "--seed", "11", "--realizations", "3", "--grid-size", "32", "--out", s.path("o3")},
      {"verify", "--suites", "allowability,psd", "--seed", "3", "--out", s.path("o4")},
  };
  for (const auto& args : runs) {
    const std::string out = args.back();
    REQUIRE(invoke(args).code == 0);
    const auto config = slurp(out + ".config.json");
    const auto again = invoke({args.front(), "--config", out + ".config.json", "--out", out + ".again"});
    REQUIRE(again.code == 0);
    CHECK(slurp(out) == slurp(out + ".again"));
    auto echoed = nlohmann::json::parse(slurp(out + ".again.config.json"));
    echoed["io"]["output"] = out;
    CHECK(echoed == nlohmann::json::parse(config));
  }
}

TEST_CASE("default verify passes every suite") {
  Sandbox s;
  const auto r = invoke({"verify", "--out", s.path("v.json")});
  CHECK(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(s.path("v.json")));
  CHECK(report.at("passed").get<bool>());
  std::set<std::string> suites;
  for (const auto& rec : report.at("checks")) {
    for (const char* key : {"check_name", "statistic", "threshold", "pass"}) CHECK(rec.contains(key));
    const auto name = rec.at("check_name").get<std::string>();
    suites.insert(name.substr(0, name.find('.')));
  }
  CHECK(suites == std::set<std::string>{"allowability", "psd", "primal_dual", "ordinary_universal", "bridge_moments",
                                        "stationarity"});
}

TEST_CASE("verify fails the PSD suite when a negative coefficient is injected") {
  Sandbox s;
  const auto r = invoke({"verify", "--inject-negative-gamma", "--out", s.path("v.json")});
  CHECK(r.code == circirf::cli::kExitVerifyFailed);
  CHECK(r.out.find("psd.min_eigenvalue_ratio") != std::string::npos);
  const auto report = nlohmann::json::parse(slurp(s.path("v.json")));
  for (const auto& rec : report.at("checks"))
    if (rec.at("check_name") == "psd.min_eigenvalue_ratio") CHECK_FALSE(rec.at("pass").get<bool>());
}

TEST_CASE("verify with ten realizations reports insufficient samples") {
  Sandbox s;
  const auto r = invoke({"verify", "--realizations", "10", "--out", s.path("v.json")});
  CHECK(r.code != 0);
  const auto report = nlohmann::json::parse(slurp(s.path("v.json")));
  int short_runs = 0;
  for (const auto& rec : report.at("checks"))
    if (rec.value("status", "") == "insufficient samples") ++short_runs;
  CHECK(short_runs > 0);
}
