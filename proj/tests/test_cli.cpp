#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "common.hpp"
#include "ivtree/cli.hpp"
#include "ivtree/error.hpp"
#include "ivtree/fields.hpp"

using namespace ivtree;
using Json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kEven{"--J", "-5.8", "--Jp", "3.25", "--T", "14.358", "--k", "10"};
const std::vector<std::string> kOdd{"--J", "-7.3", "--Jp", "5.1", "--T", "28", "--k", "3"};

std::vector<std::string> cmd(const std::string& name, std::vector<std::string> params,
                             const std::vector<std::string>& extra = {}) {
  params.insert(params.begin(), name);
  params.insert(params.end(), extra.begin(), extra.end());
  return params;
}

Json run_json(const std::vector<std::string>& args) {
  const auto r = cli::run(args);
  REQUIRE_MESSAGE(r.exit_code == 0, r.err);
  return Json::parse(r.out);
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string num(const Json& v) { return v.dump(); }

// Rebuild a command line from an output document's params echo.
std::vector<std::string> argv_from_echo(const Json& doc) {
  std::vector<std::string> a{doc["command"].get<std::string>()};
  const auto& p = doc["params"];
  for (const char* key : {"J", "Jp", "T", "k"}) {
    if (p.contains(key)) {
      a.push_back(std::string("--") + key);
      a.push_back(num(p[key]));
    }
  }
  if (p.contains("grid")) {
    a.push_back("--grid");
    a.push_back(num(p["grid"]["x_min"]) + "," + num(p["grid"]["x_max"]) + "," + num(p["grid"]["count"]));
  }
  if (p.contains("t_range")) {
    a.push_back("--t-range");
    a.push_back(num(p["t_range"][0]) + "," + num(p["t_range"][1]));
    a.push_back("--tol");
    a.push_back(num(p["tol"]));
  }
  if (p.contains("axes")) {
    for (const auto& ax : p["axes"]) {
      a.push_back("--axis");
      a.push_back(ax.get<std::string>());
    }
  }
  if (p.contains("x")) {
    a.push_back("--x");
    a.push_back(num(p["x"]));
  }
  a.push_back("--grid-points");
  a.push_back(num(p["solver"]["grid_points"]));
  a.push_back("--margin");
  a.push_back(num(p["solver"]["margin"]));
  a.push_back("--threads");
  a.push_back(num(p["threads"]));
  return a;
}

int crossings(const Json& rows) {
  int n = 0;
  double prev = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double d = rows[i][1].get<double>() - rows[i][2].get<double>();
    if (i > 0 && (d > 0) != (prev > 0)) ++n;
    prev = d;
  }
  return n;
}

void check_usage_error(const std::vector<std::string>& args, const std::string& flag) {
  const auto r = cli::run(args);
  CHECK(r.exit_code == 2);
  CHECK(r.out.empty());
  CHECK_MESSAGE(r.err.find(flag) != std::string::npos, r.err);
  CHECK(r.err.find('\n') == r.err.size() - 1);
}

}  // namespace

TEST_CASE("portrait of the even example") {
  const auto doc = run_json(cmd("portrait", kEven));
  CHECK(doc["schema_version"] == cli::kSchemaVersion);
  CHECK(doc["command"] == "portrait");
  const auto& pay = doc["payload"];
  CHECK(pay["count"] == 3);
  CHECK(pay["transition"] == true);
  const double want[] = {0.106457, 2.13383, 8.30085};
  for (int i = 0; i < 3; ++i) CHECK(pay["fixed_points"][i]["x"].get<double>() == doctest::Approx(want[i]).epsilon(1e-4));
  CHECK(pay["fixed_points"][1]["stability"] == "unstable");
}

TEST_CASE("portrait of the trivial model") {
  const auto doc = run_json({"portrait", "--J", "0", "--Jp", "0", "--T", "1", "--k", "2"});
  CHECK(doc["payload"]["count"] == 1);
  CHECK(doc["payload"]["fixed_points"][0]["x"].get<double>() == 1.0);
  CHECK(doc["payload"]["transition"] == false);
  CHECK(doc["payload"]["inflection_point"].is_null());
}

TEST_CASE("verify at a solver root") {
  const auto portrait = run_json(cmd("portrait", kOdd));
  for (const auto& fp : portrait["payload"]["fixed_points"]) {
    const auto doc = run_json(cmd("verify", kOdd, {"--x", num(fp["x"])}));
    const auto& pay = doc["payload"];
    CHECK(pay["boundary_convention"] == "semi_ball");
    CHECK(pay["kolmogorov"]["deviation"].get<double>() < 1e-12);
    CHECK(pay["compatibility"]["max_residual"].get<double>() < 1e-8);
    CHECK(pay["fixed_point"].is_object());
    CHECK(pay["checksums"]["depth2"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  }
  const auto off = run_json(cmd("verify", kOdd, {"--x", "3.0"}));
  CHECK(off["payload"]["fixed_point"].is_null());
  CHECK(off["payload"]["kolmogorov"]["deviation"].get<double>() > 1e-4);
}

TEST_CASE("verify from a field file") {
  const auto params = make_params(-7.3, 5.1, 28, 3);
  const std::string path = "ivtree_test_fields.json";
  {
    std::ofstream f(path);
    f << fields_to_json(embed_invariant(2.0, params));
  }
  const auto from_file = run_json(cmd("verify", kOdd, {"--h-file", path}));
  const auto from_x = run_json(cmd("verify", kOdd, {"--x", "2"}));
  CHECK(from_file["payload"]["kolmogorov"] == from_x["payload"]["kolmogorov"]);
  CHECK(from_file["payload"]["compatibility"] == from_x["payload"]["compatibility"]);
  check_usage_error(cmd("verify", kEven, {"--h-file", path}), "--h-file");
  check_usage_error(cmd("verify", kOdd, {"--h-file", "no/such/file.json"}), "--h-file");
  std::remove(path.c_str());
}

TEST_CASE("plot data crossings") {
  const auto even = run_json(cmd("plot-data", kEven, {"--grid", "0.01,12,1000"}));
  CHECK(even["payload"]["rows"].size() == 1000);
  CHECK(crossings(even["payload"]["rows"]) == 3);
  const auto odd = run_json({"plot-data", "--J", "-7.3", "--Jp", "5.1", "--T", "28", "--k", "7", "--grid", "0.01,15,1000"});
  CHECK(crossings(odd["payload"]["rows"]) == 1);
  const auto flat = run_json({"plot-data", "--J", "-2", "--Jp", "0", "--T", "1", "--k", "4", "--grid", "0.5,3,20"});
  for (const auto& r : flat["payload"]["rows"]) CHECK(r[1].get<double>() == 1.0);
  const auto& rows = even["payload"]["rows"];
  CHECK(rows[0][0].get<double>() == 0.01);
  CHECK(rows[999][0].get<double>() == 12.0);
}

TEST_CASE("emit_plot_data preconditions") {
  const auto p = make_params(1, 1, 1, 2);
  CHECK_THROWS_AS(cli::emit_plot_data(p, 0.0, 1.0, 10), Error);
  CHECK_THROWS_AS(cli::emit_plot_data(p, -1.0, 1.0, 10), Error);
  CHECK_THROWS_AS(cli::emit_plot_data(p, 2.0, 1.0, 10), Error);
  CHECK_THROWS_AS(cli::emit_plot_data(p, 1.0, 2.0, 1), Error);
  CHECK(cli::emit_plot_data(p, 1.0, 2.0, 2).size() == 2);
}

TEST_CASE("usage errors exit 2 and name the flag") {
  check_usage_error({"portrait", "--J", "abc", "--Jp", "1", "--T", "1", "--k", "2"}, "--J");
  check_usage_error({"portrait", "--J", "1", "--Jp", "1", "--T", "-2", "--k", "2"}, "--T");
  check_usage_error({"portrait", "--J", "1", "--Jp", "1", "--T", "2", "--k", "1"}, "--k");
  check_usage_error({"portrait", "--J", "1", "--T", "2", "--k", "2"}, "--Jp");
  check_usage_error({"portrait", "--J", "1", "--Jp", "1", "--T", "1", "--k", "2", "--bogus", "3"}, "--bogus");
  check_usage_error(cmd("portrait", kEven, {"--grid", "1,2,3"}), "--grid");
  check_usage_error(cmd("portrait", kEven, {"--format", "xml"}), "--format");
  check_usage_error(cmd("portrait", kEven, {"--grid-points", "1"}), "--grid-points");
  check_usage_error(cmd("portrait", kEven, {"--margin", "0.5"}), "--margin");
  check_usage_error({"portrait", "--J", "inf", "--Jp", "1", "--T", "1", "--k", "2"}, "--J");
  check_usage_error(cmd("plot-data", kEven, {"--grid", "0,12,100"}), "--grid");
  check_usage_error(cmd("plot-data", kEven, {"--grid", "1,12"}), "--grid");
  check_usage_error(cmd("plot-data", kEven, {"--grid", "1,12,10.5"}), "--grid");
  check_usage_error(cmd("plot-data", kEven), "--grid");
  check_usage_error(cmd("verify", kEven), "--x");
  check_usage_error(cmd("verify", kOdd, {"--x", "-1"}), "--x");
  check_usage_error({"verify", "--J", "1", "--Jp", "1", "--T", "1", "--k", "13", "--x", "1"}, "--k");
  check_usage_error({"tc", "--J", "1", "--Jp", "1", "--k", "4", "--t-range", "5,1"}, "--t-range");
  check_usage_error({"tc", "--J", "1", "--Jp", "1", "--k", "4", "--t-range", "1,5", "--tol", "-1"}, "--tol");
  check_usage_error({"tc", "--J", "1", "--Jp", "1", "--k", "4"}, "--t-range");
  check_usage_error({"tc", "--J", "1", "--Jp", "1", "--T", "3", "--k", "4", "--t-range", "1,5"}, "--T");
  check_usage_error(cmd("scan", kEven), "--axis");
  check_usage_error(cmd("scan", kEven, {"--axis", "beta=1,2"}), "--axis");
  check_usage_error(cmd("scan", kEven, {"--axis", "k=2.5"}), "--axis");
  check_usage_error(cmd("scan", kEven, {"--axis", "T=1,x"}), "--axis");
  check_usage_error(cmd("scan", kEven, {"--axis", "T=1", "--axis", "J=1", "--axis", "Jp=1"}), "--axis");
  check_usage_error(cmd("scan", kEven, {"--threads", "0", "--axis", "T=1"}), "--threads");
  check_usage_error({"frobnicate"}, "frobnicate");
  check_usage_error({}, "subcommand");
}

TEST_CASE("numeric failures exit 1 with a JSON diagnostic") {
  const auto r = cli::run({"tc", "--J", "-5.8", "--Jp", "3.25", "--k", "10", "--t-range", "30,40"});
  CHECK(r.exit_code == 1);
  CHECK(r.out.empty());
  const auto d = Json::parse(r.err);
  CHECK(d["error"]["code"] == "same_indicator");
  CHECK(d["detail"]["count_lo"] == 1);

  const auto big = cli::run({"plot-data", "--J", "500", "--Jp", "500", "--T", "1", "--k", "4", "--grid", "1,2,3"});
  CHECK(big.exit_code == 1);
  CHECK(Json::parse(big.err)["error"]["code"] == "map_overflow");
}

TEST_CASE("help") {
  const auto r = cli::run({"--help"});
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("portrait") != std::string::npos);
}

TEST_CASE("tc output") {
  const auto doc = run_json({"tc", "--J", "-5.8", "--Jp", "3.25", "--k", "10", "--t-range", "14.358,100", "--tol", "1e-6"});
  CHECK(doc["payload"]["tc"].get<double>() == doctest::Approx(19.6418827638).epsilon(1e-9));
  CHECK(doc["payload"]["validated"] == true);
}

TEST_CASE("CSV and JSON carry identical values") {
  {
    const auto j = run_json(cmd("portrait", kEven));
    const auto c = parse_csv(cli::run(cmd("portrait", kEven, {"--format", "csv"})).out);
    REQUIRE(c.size() == 4);
    CHECK(c[0] == std::vector<std::string>{"x", "derivative", "stability"});
    for (int i = 0; i < 3; ++i) {
      const auto& fp = j["payload"]["fixed_points"][i];
      CHECK(std::stod(c[i + 1][0]) == fp["x"].get<double>());
      CHECK(std::stod(c[i + 1][1]) == fp["derivative"].get<double>());
      CHECK(c[i + 1][2] == fp["stability"].get<std::string>());
    }
  }
  {
    const auto args = cmd("plot-data", kEven, {"--grid", "0.01,12,257"});
    const auto j = run_json(args);
    auto csv_args = args;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    const auto c = parse_csv(cli::run(csv_args).out);
    REQUIRE(c.size() == 258);
    CHECK(c[0] == std::vector<std::string>{"x", "map", "diagonal"});
    for (std::size_t i = 0; i < 257; ++i) {
      for (int col = 0; col < 3; ++col) CHECK(std::stod(c[i + 1][col]) == j["payload"]["rows"][i][col].get<double>());
    }
  }
  {
    const auto args = cmd("scan", kEven, {"--axis", "T=12,16,20", "--axis", "k=8,10"});
    const auto j = run_json(args);
    auto csv_args = args;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    const auto c = parse_csv(cli::run(csv_args).out);
    REQUIRE(c.size() == 7);
    CHECK(c[0] == std::vector<std::string>{"T", "k", "count", "x_min", "x_max", "transition"});
    for (std::size_t i = 0; i < 6; ++i) {
      const auto& row = j["payload"]["rows"][i];
      CHECK(std::stod(c[i + 1][0]) == row["T"].get<double>());
      CHECK(std::stoi(c[i + 1][2]) == row["count"].get<int>());
      CHECK(std::stod(c[i + 1][3]) == row["x_min"].get<double>());
      CHECK(std::stod(c[i + 1][4]) == row["x_max"].get<double>());
    }
  }
}

TEST_CASE("CSV layout") {
  const auto out = cli::run(cmd("verify", kOdd, {"--x", "2", "--format", "csv"})).out;
  CHECK(out.find('\r') == std::string::npos);
  CHECK(out.back() == '\n');
  CHECK(out.rfind("quantity,value\n", 0) == 0);
  CHECK(out.find("kolmogorov.deviation,") != std::string::npos);
  CHECK(out.find("boundary_convention,semi_ball\n") != std::string::npos);
}

TEST_CASE("documents regenerate bit-identically from their params echo") {
  const std::vector<std::vector<std::string>> commands{
      cmd("portrait", kEven),
      cmd("portrait", kOdd, {"--grid-points", "512", "--margin", "4"}),
      cmd("plot-data", kOdd, {"--grid", "0.1,3.5,33"}),
      {"tc", "--J", "-7.3", "--Jp", "5.1", "--k", "9", "--t-range", "10,60", "--tol", "1e-5"},
      cmd("scan", kEven, {"--axis", "T=10,20", "--axis", "Jp=3,3.5", "--threads", "2"}),
      cmd("verify", kOdd, {"--x", "0.3"}),
  };
  for (const auto& args : commands) {
    const auto first = cli::run(args);
    REQUIRE_MESSAGE(first.exit_code == 0, first.err);
    const auto doc = Json::parse(first.out);
    const auto again = cli::run(argv_from_echo(doc));
    CHECK(again.exit_code == 0);
    CHECK(again.out == first.out);
  }
}

TEST_CASE("config file values yield to flags") {
  const std::string path = "ivtree_test_config.ini";
  {
    std::ofstream f(path);
    f << "J=-5.8\nJp=3.25\nT=14.358\nk=6\n";
  }
  const auto from_file = run_json({"portrait", "--config", path});
  CHECK(from_file["params"]["k"] == 6);
  CHECK(from_file["payload"]["count"] == 1);
  const auto overridden = run_json({"portrait", "--config", path, "--k", "10"});
  CHECK(overridden["params"]["k"] == 10);
  CHECK(overridden["payload"] == run_json(cmd("portrait", kEven))["payload"]);
  check_usage_error({"portrait", "--config", "missing.ini"}, "missing.ini");
  std::remove(path.c_str());
}

TEST_CASE("scan output does not depend on the thread count") {
  const auto base = cmd("scan", kEven, {"--axis", "T=8,10,12,14,16,18,20", "--axis", "k=4,6,8,10,12"});
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  CHECK(run_json(one)["payload"] == run_json(four)["payload"]);
  CHECK(cli::run(one).out.size() == cli::run(four).out.size());
}
