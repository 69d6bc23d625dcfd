#include "ivtree/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <type_traits>

#include "CLI11.hpp"
#include "json.hpp"

#include "ivtree/error.hpp"
#include "ivtree/fields.hpp"
#include "ivtree/kernels.hpp"
#include "ivtree/oracle.hpp"
#include "ivtree/phase.hpp"
#include "ivtree/recurrence.hpp"
#include "ivtree/solver.hpp"

namespace ivtree::cli {

std::vector<PlotRow> emit_plot_data(const ModelParams& params, double x_min, double x_max, int count) {
  if (!(x_min > 0.0) || !(x_max > x_min) || !std::isfinite(x_max))
    throw Error(ErrorCode::NonPositiveArgument, "grid bounds must satisfy 0 < x_min < x_max");
  if (count < 2) throw Error(ErrorCode::NonPositiveArgument, "grid needs at least 2 points");
  std::vector<PlotRow> rows(count);
  const double width = x_max - x_min;
  for (int i = 0; i < count; ++i) {
    const double x = i == count - 1 ? x_max : x_min + width * i / (count - 1);
    rows[i] = {x, reduced_map(x, params), x};
  }
  return rows;
}

namespace {

using Json = nlohmann::ordered_json;

struct UsageError {
  std::string flag;
  std::string message;
};

struct NumericFailure {
  std::string code;
  std::string message;
  Json detail;
};

struct Inputs {
  std::string command;
  std::optional<double> J, Jp, T, x, tol;
  std::optional<int> k;
  std::string format = "json";
  std::vector<double> grid, t_range;
  std::vector<std::string> axes;
  int grid_points = 4096;
  double margin = 10.0;
  int threads = 1;
  std::string h_file;
  std::set<std::string> given;
};

const std::set<std::string> kCommon = {"--format", "--config", "--grid-points", "--margin", "--threads"};

std::set<std::string> allowed_flags(const std::string& command) {
  if (command == "portrait") return {"--J", "--Jp", "--T", "--k"};
  if (command == "plot-data") return {"--J", "--Jp", "--T", "--k", "--grid"};
  if (command == "verify") return {"--J", "--Jp", "--T", "--k", "--x", "--h-file"};
  if (command == "tc") return {"--J", "--Jp", "--k", "--t-range", "--tol"};
  return {"--J", "--Jp", "--T", "--k", "--axis"};
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

bool all_finite(const Json& j) {
  if (j.is_number_float()) return std::isfinite(j.get<double>());
  if (j.is_structured()) {
    for (const auto& el : j) {
      if (!all_finite(el)) return false;
    }
  }
  return true;
}

std::string fnv1a64(const std::vector<double>& values) {
  std::uint64_t h = 1469598103934665603ull;
  for (double v : values) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof v);
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ull;
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

double parse_real(const std::string& text, const std::string& flag) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size()) throw UsageError{flag, "cannot parse '" + text + "' as a number"};
  if (!std::isfinite(v)) throw UsageError{flag, "value must be finite"};
  return v;
}

void require_finite(const std::optional<double>& v, const char* flag) {
  if (v && !std::isfinite(*v)) throw UsageError{flag, "value must be finite"};
}

template <class T>
T require(const std::optional<T>& v, const char* flag, const std::string& command) {
  if (!v) throw UsageError{flag, "required by " + command};
  return *v;
}

std::string flag_for(ErrorCode code, const std::string& command) {
  switch (code) {
    case ErrorCode::NonPositiveTemperature: return command == "tc" ? "--t-range" : "--T";
    case ErrorCode::TreeOrderTooSmall:
    case ErrorCode::ParityMismatch:
    case ErrorCode::EnumerationTooLarge: return "--k";
    case ErrorCode::InvalidAxis: return "--axis";
    case ErrorCode::InvalidFieldVector: return "--h-file";
    case ErrorCode::NotAFixedPoint: return "--x";
    default: break;
  }
  if (command == "plot-data") return "--grid";
  if (command == "tc") return "--t-range";
  if (command == "scan") return "--axis";
  if (command == "verify") return "--x";
  return "--J";
}

bool is_precondition(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveTemperature:
    case ErrorCode::TreeOrderTooSmall:
    case ErrorCode::NonFiniteInput:
    case ErrorCode::NonPositiveArgument:
    case ErrorCode::ParityMismatch:
    case ErrorCode::NotAFixedPoint:
    case ErrorCode::EnumerationTooLarge:
    case ErrorCode::InvalidAxis:
    case ErrorCode::InvalidFieldVector: return true;
    default: return false;
  }
}

SolverOptions solver_options(const Inputs& in) {
  if (in.grid_points < 2) throw UsageError{"--grid-points", "needs at least 2 points"};
  if (!(in.margin > 1.0) || !std::isfinite(in.margin)) throw UsageError{"--margin", "must be a finite value above 1"};
  SolverOptions opts;
  opts.grid_points = in.grid_points;
  opts.margin = in.margin;
  return opts;
}

ModelParams model_params(const Inputs& in) {
  const double J = require(in.J, "--J", in.command);
  const double Jp = require(in.Jp, "--Jp", in.command);
  const double T = require(in.T, "--T", in.command);
  const int k = require(in.k, "--k", in.command);
  if (!(T > 0.0)) throw UsageError{"--T", "temperature must be positive"};
  if (k < 2) throw UsageError{"--k", "tree order must be at least 2"};
  return make_params(J, Jp, T, k);
}

Json echo(const Inputs& in) {
  Json p;
  if (in.J) p["J"] = *in.J;
  if (in.Jp) p["Jp"] = *in.Jp;
  if (in.T) p["T"] = *in.T;
  if (in.k) p["k"] = *in.k;
  if (in.command == "plot-data" && in.grid.size() == 3)
    p["grid"] = {{"x_min", in.grid[0]}, {"x_max", in.grid[1]}, {"count", static_cast<int>(in.grid[2])}};
  if (in.command == "tc") {
    p["t_range"] = in.t_range;
    p["tol"] = in.tol.value_or(1e-6);
  }
  if (in.command == "scan") p["axes"] = in.axes;
  if (in.command == "verify") {
    if (in.x) p["x"] = *in.x;
    if (!in.h_file.empty()) p["h_file"] = in.h_file;
  }
  p["solver"] = {{"grid_points", in.grid_points}, {"margin", in.margin}};
  p["threads"] = in.threads;
  p["backend"] = std::string(kernels::to_string(kernels::active_backend()));
  return p;
}

// --- portrait ---------------------------------------------------------------

Json portrait_payload(const PhasePortrait& p) {
  Json pts = Json::array();
  for (const auto& f : p.fixed_points) {
    pts.push_back({{"x", f.x}, {"derivative", f.derivative}, {"stability", std::string(to_string(f.stability))}});
  }
  const auto& c = p.critical;
  Json out;
  out["map"] = p.params.even() ? "f" : "g";
  out["count"] = p.count;
  out["transition"] = p.transition;
  out["fixed_points"] = pts;
  out["predicted_count"] = p.predicted;
  out["grid_flagged"] = p.grid_flagged;
  out["critical"] = {{"threshold_d", c.threshold_d},
                     {"x_lo", optional_json(c.x_lo)},
                     {"x_hi", optional_json(c.x_hi)},
                     {"eta_lo", optional_json(c.eta_lo)},
                     {"eta_hi", optional_json(c.eta_hi)}};
  out["inflection_point"] = p.params.even() ? optional_json(inflection_point_even(p.params)) : Json(nullptr);
  out["tangency_gap"] = optional_json(tangency_gap(p.params));
  return out;
}

std::string portrait_csv(const Json& payload) {
  std::string s = "x,derivative,stability\n";
  for (const auto& f : payload["fixed_points"]) {
    s += num(f["x"].get<double>()) + "," + num(f["derivative"].get<double>()) + "," +
         f["stability"].get<std::string>() + "\n";
  }
  return s;
}

// --- plot-data --------------------------------------------------------------

Json plot_payload(const Inputs& in, const ModelParams& params) {
  if (in.grid.size() != 3) throw UsageError{"--grid", "expects x_min,x_max,count"};
  const double count = in.grid[2];
  if (count != std::floor(count) || count < 2 || count > 1e7)
    throw UsageError{"--grid", "count must be an integer between 2 and 1e7"};
  if (!(in.grid[0] > 0.0) || !(in.grid[1] > in.grid[0]))
    throw UsageError{"--grid", "bounds must satisfy 0 < x_min < x_max"};
  const auto rows = emit_plot_data(params, in.grid[0], in.grid[1], static_cast<int>(count));
  Json table = Json::array();
  for (const auto& r : rows) table.push_back({r.x, r.map, r.diagonal});
  Json out;
  out["map"] = params.even() ? "f" : "g";
  out["columns"] = {"x", "map", "diagonal"};
  out["rows"] = std::move(table);
  return out;
}

std::string plot_csv(const Json& payload) {
  std::string s = "x,map,diagonal\n";
  for (const auto& r : payload["rows"]) {
    s += num(r[0].get<double>()) + "," + num(r[1].get<double>()) + "," + num(r[2].get<double>()) + "\n";
  }
  return s;
}

// --- tc ---------------------------------------------------------------------

Json tc_payload(const Inputs& in, const SolverOptions& opts) {
  const double J = require(in.J, "--J", in.command);
  const double Jp = require(in.Jp, "--Jp", in.command);
  const int k = require(in.k, "--k", in.command);
  if (k < 2) throw UsageError{"--k", "tree order must be at least 2"};
  if (in.t_range.size() != 2) throw UsageError{"--t-range", "expects T_lo,T_hi"};
  const double lo = in.t_range[0];
  const double hi = in.t_range[1];
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi))
    throw UsageError{"--t-range", "bounds must satisfy 0 < T_lo < T_hi"};
  const double tol = in.tol.value_or(1e-6);
  if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError{"--tol", "tolerance must be positive"};
  make_params(J, Jp, lo, k);

  try {
    const auto r = critical_temperature(J, Jp, k, {lo, hi}, tol, opts);
    Json out;
    out["tc"] = r.tc;
    out["bracket_lo"] = r.bracket_lo;
    out["bracket_hi"] = r.bracket_hi;
    out["degenerate"] = r.degenerate;
    out["validated"] = r.validated;
    out["count_below"] = r.count_below;
    out["count_above"] = r.count_above;
    return out;
  } catch (const SameIndicatorError& e) {
    Json detail = {{"T_lo", lo},
                   {"count_lo", e.lower().count},
                   {"T_hi", hi},
                   {"count_hi", e.upper().count}};
    throw NumericFailure{std::string(to_string(e.code())), e.what(), detail};
  }
}

// --- scan -------------------------------------------------------------------

AxisSpec parse_axis_spec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError{"--axis", "expects name=v1,v2,..."};
  AxisSpec spec;
  try {
    spec.axis = parse_axis(text.substr(0, eq));
  } catch (const Error& e) {
    throw UsageError{"--axis", e.what()};
  }
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) spec.values.push_back(parse_real(item, "--axis"));
  if (spec.values.empty()) throw UsageError{"--axis", "axis " + text.substr(0, eq) + " has no values"};
  if (spec.axis == Axis::k) {
    for (double v : spec.values) {
      if (v != std::floor(v) || v < 2 || v > 1e6) throw UsageError{"--axis", "k values must be integers >= 2"};
    }
  }
  if (spec.axis == Axis::T) {
    for (double v : spec.values) {
      if (!(v > 0.0)) throw UsageError{"--axis", "T values must be positive"};
    }
  }
  return spec;
}

Json scan_payload(Inputs& in, const SolverOptions& opts) {
  if (in.axes.empty()) throw UsageError{"--axis", "scan needs at least one axis"};
  if (in.axes.size() > 2) throw UsageError{"--axis", "at most two axes"};
  std::vector<AxisSpec> specs;
  for (const auto& a : in.axes) specs.push_back(parse_axis_spec(a));
  if (specs.size() == 2 && specs[0].axis == specs[1].axis) throw UsageError{"--axis", "axes must differ"};

  // Unset base values are covered by an axis; borrow its first value.
  auto base_or_axis = [&](auto& slot, Axis axis) {
    if (slot) return;
    for (const auto& s : specs) {
      if (s.axis == axis) slot = static_cast<std::remove_reference_t<decltype(*slot)>>(s.values.front());
    }
  };
  Inputs base = in;
  base_or_axis(base.J, Axis::J);
  base_or_axis(base.Jp, Axis::Jp);
  base_or_axis(base.T, Axis::T);
  base_or_axis(base.k, Axis::k);
  const ModelParams params = model_params(base);
  if (in.threads < 1) throw UsageError{"--threads", "must be at least 1"};

  std::optional<AxisSpec> second;
  if (specs.size() == 2) second = specs[1];
  const auto rows = scan(params, specs[0], second, opts, in.threads);

  Json names = Json::array();
  for (const auto& s : specs) names.push_back(std::string(to_string(s.axis)));
  Json table = Json::array();
  for (const auto& r : rows) {
    Json row;
    for (std::size_t i = 0; i < specs.size(); ++i) row[std::string(to_string(specs[i].axis))] = r.axis_values[i];
    row["count"] = r.count;
    row["x_min"] = r.x_min;
    row["x_max"] = r.x_max;
    row["transition"] = r.transition;
    table.push_back(std::move(row));
  }
  Json out;
  out["axes"] = names;
  out["rows"] = std::move(table);
  return out;
}

std::string scan_csv(const Json& payload) {
  std::string s;
  for (const auto& name : payload["axes"]) s += name.get<std::string>() + ",";
  s += "count,x_min,x_max,transition\n";
  for (const auto& r : payload["rows"]) {
    for (const auto& name : payload["axes"]) s += num(r[name.get<std::string>()].get<double>()) + ",";
    s += std::to_string(r["count"].get<int>()) + "," + num(r["x_min"].get<double>()) + "," +
         num(r["x_max"].get<double>()) + "," + (r["transition"].get<bool>() ? "true" : "false") + "\n";
  }
  return s;
}

// --- verify -----------------------------------------------------------------

Json verify_payload(const Inputs& in, const ModelParams& params) {
  if (in.x.has_value() == !in.h_file.empty()) throw UsageError{"--x", "verify needs exactly one of --x or --h-file"};
  if (params.k > kMaxEnumeratedBranch)
    throw UsageError{"--k", "verify enumerates branches and needs k <= " + std::to_string(kMaxEnumeratedBranch)};

  BoundaryFieldVector h;
  Json out;
  out["boundary_convention"] = "semi_ball";
  if (in.x) {
    if (!(*in.x > 0.0)) throw UsageError{"--x", "must be positive"};
    h = embed_invariant(*in.x, params);
    const double residual = reduced_log_residual(std::log(*in.x), params);
    out["x"] = *in.x;
    out["map_log_residual"] = residual;
    try {
      const auto fp = classify_stability(*in.x, params);
      out["fixed_point"] = {{"derivative", fp.derivative}, {"stability", std::string(to_string(fp.stability))}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotAFixedPoint) throw;
      out["fixed_point"] = nullptr;
    }
  } else {
    std::ifstream file(in.h_file);
    if (!file) throw UsageError{"--h-file", "cannot read " + in.h_file};
    std::stringstream ss;
    ss << file.rdbuf();
    try {
      h = fields_from_json(ss.str());
    } catch (const Error& e) {
      throw UsageError{"--h-file", e.what()};
    }
    if (h.k != params.k) throw UsageError{"--h-file", "field vector order does not match --k"};
    out["x"] = nullptr;
    out["map_log_residual"] = nullptr;
    out["fixed_point"] = nullptr;
  }
  out["h"] = h.h;

  const auto paths = theorem1_paths(params, h);
  out["compatibility"] = {{"closed_form", paths.closed_form},
                     {"enumerated", paths.enumerated},
                     {"max_residual", paths.max_residual},
                     {"path_gap", paths.path_gap}};

  if (params.k <= 3) {
    const auto rep = kolmogorov_check(params, h, in.threads);
    out["kolmogorov"] = {{"deviation", rep.deviation}, {"log_z1", rep.log_z1}, {"log_z2", rep.log_z2},
                         {"l2", rep.l2},               {"mass1", rep.mass1},   {"mass2", rep.mass2},
                         {"min_prob", rep.min_prob}};
    const auto alt = kolmogorov_check(params, h, in.threads, BoundaryConvention::SemiBallTimesK);
    out["alternative_convention"] = {{"boundary_convention", "semi_ball_times_k"}, {"deviation", alt.deviation}};
    const auto t1 = exact_measure(params, h, 1, in.threads);
    const auto t2 = exact_measure(params, h, 2, in.threads);
    out["checksums"] = {{"depth1", fnv1a64(t1.probs)}, {"depth2", fnv1a64(t2.probs)}};
  } else {
    out["kolmogorov"] = nullptr;
    out["alternative_convention"] = nullptr;
    out["checksums"] = nullptr;
  }
  return out;
}

void flatten(const Json& j, const std::string& prefix, std::string& s) {
  if (j.is_object()) {
    for (const auto& [key, val] : j.items()) flatten(val, prefix.empty() ? key : prefix + "." + key, s);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), s);
  } else if (j.is_number_float()) {
    s += prefix + "," + num(j.get<double>()) + "\n";
  } else if (j.is_string()) {
    s += prefix + "," + j.get<std::string>() + "\n";
  } else if (j.is_null()) {
    s += prefix + ",\n";
  } else {
    s += prefix + "," + j.dump() + "\n";
  }
}

std::string key_value_csv(const Json& payload) {
  std::string s = "quantity,value\n";
  flatten(payload, "", s);
  return s;
}

// --- driver -----------------------------------------------------------------

struct Outcome {
  Json payload;
  std::string csv;
};

Outcome dispatch(Inputs& in) {
  const std::set<std::string> allowed = allowed_flags(in.command);
  for (const auto& flag : in.given) {
    if (!allowed.count(flag) && !kCommon.count(flag)) throw UsageError{flag, "not used by " + in.command};
  }
  if (in.threads < 1) throw UsageError{"--threads", "must be at least 1"};
  require_finite(in.J, "--J");
  require_finite(in.Jp, "--Jp");
  require_finite(in.T, "--T");
  require_finite(in.x, "--x");
  require_finite(in.tol, "--tol");
  const SolverOptions opts = solver_options(in);

  Outcome o;
  if (in.command == "portrait") {
    o.payload = portrait_payload(portrait(model_params(in), opts));
    o.csv = portrait_csv(o.payload);
  } else if (in.command == "plot-data") {
    o.payload = plot_payload(in, model_params(in));
    o.csv = plot_csv(o.payload);
  } else if (in.command == "tc") {
    o.payload = tc_payload(in, opts);
    o.csv = key_value_csv(o.payload);
  } else if (in.command == "scan") {
    o.payload = scan_payload(in, opts);
    o.csv = scan_csv(o.payload);
  } else {
    o.payload = verify_payload(in, model_params(in));
    o.csv = key_value_csv(o.payload);
  }
  if (!all_finite(o.payload)) throw NumericFailure{"non_finite_output", "result contains values that are not finite", {}};
  return o;
}

std::string diagnostic(const std::string& command, const std::string& code, const std::string& message,
                       const Json& detail) {
  Json d;
  d["schema_version"] = kSchemaVersion;
  d["command"] = command;
  d["error"] = {{"code", code}, {"message", message}};
  if (!detail.is_null()) d["detail"] = detail;
  return d.dump() + "\n";
}

}  // namespace

RunResult run(const std::vector<std::string>& args) {
  Inputs in;
  CLI::App app{"Gibbs measures with memory of length 2 for the Ising-Vannimenus model on Cayley trees", "ivtree"};
  app.set_config("--config", "", "key=value file; command-line flags override its values");
  app.require_subcommand(1, 1);

  std::vector<CLI::Option*> options;
  options.push_back(app.add_option("--J", in.J, "nearest-neighbour coupling"));
  options.push_back(app.add_option("--Jp", in.Jp, "prolonged next-nearest-neighbour coupling"));
  options.push_back(app.add_option("--T", in.T, "temperature"));
  options.push_back(app.add_option("--k", in.k, "tree order"));
  options.push_back(app.add_option("--format", in.format, "json or csv")
                        ->check(CLI::IsMember({"json", "csv"})));
  options.push_back(app.add_option("--grid", in.grid, "plot-data grid x_min,x_max,count")->delimiter(','));
  options.push_back(app.add_option("--grid-points", in.grid_points, "root-search grid size"));
  options.push_back(app.add_option("--margin", in.margin, "root-search bracket margin factor"));
  options.push_back(app.add_option("--tol", in.tol, "tc bisection tolerance on T"));
  options.push_back(app.add_option("--t-range", in.t_range, "tc temperature range T_lo,T_hi")->delimiter(','));
  options.push_back(app.add_option("--axis", in.axes, "scan axis name=v1,v2,... (at most two)"));
  options.push_back(app.add_option("--threads", in.threads, "worker threads"));
  options.push_back(app.add_option("--x", in.x, "verify at the invariant-set point x"));
  options.push_back(app.add_option("--h-file", in.h_file, "verify a field vector stored as JSON"));

  for (const char* name : {"portrait", "scan", "tc", "verify", "plot-data"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("portrait")->description("fixed points, stability and critical data");
  app.get_subcommand("scan")->description("fixed-point counts over one or two parameter axes");
  app.get_subcommand("tc")->description("critical temperature by bisection on the transition indicator");
  app.get_subcommand("verify")->description("compatibility residuals and exact finite-volume check");
  app.get_subcommand("plot-data")->description("rows (x, map(x), x) for plotting");

  RunResult result;
  if (!args.empty() && !args[0].empty() && args[0][0] != '-' && app.get_subcommand_no_throw(args[0]) == nullptr) {
    result.exit_code = 2;
    result.err = "ivtree: error: unknown command '" + args[0] + "' (expected portrait, scan, tc, verify or plot-data)\n";
    return result;
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.out = app.help();
    return result;
  } catch (const CLI::CallForAllHelp&) {
    result.out = app.help("", CLI::AppFormatMode::All);
    return result;
  } catch (const CLI::ParseError& e) {
    result.exit_code = 2;
    result.err = "ivtree: error: " + one_line(e.what()) + "\n";
    return result;
  }

  for (auto* sub : app.get_subcommands()) in.command = sub->get_name();
  for (auto* opt : options) {
    if (opt->count() > 0) in.given.insert(opt->get_name());
  }

  try {
    Inputs parsed = in;
    Outcome o = dispatch(parsed);
    if (in.format == "csv") {
      result.out = o.csv;
    } else {
      Json doc;
      doc["schema_version"] = kSchemaVersion;
      doc["command"] = in.command;
      doc["params"] = echo(in);
      doc["payload"] = std::move(o.payload);
      result.out = doc.dump(2) + "\n";
    }
  } catch (const UsageError& e) {
    result.exit_code = 2;
    result.err = "ivtree: error: " + e.flag + ": " + one_line(e.message) + "\n";
  } catch (const NumericFailure& e) {
    result.exit_code = 1;
    result.err = diagnostic(in.command, e.code, e.message, e.detail);
  } catch (const Error& e) {
    if (is_precondition(e.code())) {
      result.exit_code = 2;
      result.err = "ivtree: error: " + flag_for(e.code(), in.command) + ": " + one_line(e.what()) + "\n";
    } else {
      result.exit_code = 1;
      result.err = diagnostic(in.command, std::string(to_string(e.code())), e.what(), nullptr);
    }
  }
  return result;
}

}  // namespace ivtree::cli
