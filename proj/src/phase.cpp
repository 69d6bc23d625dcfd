#include "ivtree/phase.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace ivtree {

PhasePortrait portrait(const ModelParams& params, const SolverOptions& opts) {
  PhasePortrait out;
  out.params = params;
  auto roots = find_fixed_points(params, opts);
  out.fixed_points = std::move(roots.points);
  out.count = static_cast<int>(out.fixed_points.size());
  out.transition = out.count >= 3;
  out.critical = eta_thresholds(params);
  out.predicted = roots.predicted;
  out.grid_flagged = roots.grid_flagged;
  return out;
}

CriticalTemperature critical_temperature(double J, double Jp, int k, std::pair<double, double> t_range,
                                         double tol, const SolverOptions& opts) {
  auto [lo, hi] = t_range;
  if (!(tol > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "tolerance must be positive");
  if (!(lo < hi)) throw Error(ErrorCode::NonPositiveArgument, "temperature range must be increasing");

  auto at = [&](double T) { return portrait(make_params(J, Jp, T, k), opts); };
  const PhasePortrait p_lo = at(lo);
  const PhasePortrait p_hi = at(hi);

  CriticalTemperature out;
  if (tol >= hi - lo) {
    out.tc = 0.5 * (lo + hi);
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.degenerate = true;
    out.count_below = p_lo.count;
    out.count_above = p_hi.count;
    return out;
  }
  if (p_lo.transition == p_hi.transition) {
    std::ostringstream os;
    os << "transition indicator is " << (p_lo.transition ? "true" : "false") << " at both T = " << lo
       << " and T = " << hi;
    throw SameIndicatorError(os.str(), p_lo, p_hi);
  }

  const bool ind_lo = p_lo.transition;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (at(mid).transition == ind_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.tc = 0.5 * (lo + hi);
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  const PhasePortrait below = at(out.tc - 2.0 * tol);
  const PhasePortrait above = at(out.tc + 2.0 * tol);
  out.count_below = below.count;
  out.count_above = above.count;
  out.validated = below.transition == ind_lo && above.transition != ind_lo;
  return out;
}

std::string_view to_string(Axis axis) {
  switch (axis) {
    case Axis::J: return "J";
    case Axis::Jp: return "Jp";
    case Axis::T: return "T";
    case Axis::k: return "k";
  }
  return "T";
}

Axis parse_axis(std::string_view name) {
  if (name == "J") return Axis::J;
  if (name == "Jp") return Axis::Jp;
  if (name == "T") return Axis::T;
  if (name == "k") return Axis::k;
  throw Error(ErrorCode::InvalidAxis, "unknown axis '" + std::string(name) + "' (expected J, Jp, T or k)");
}

namespace {

void validate_axis(const AxisSpec& spec) {
  for (double v : spec.values) {
    std::ostringstream os;
    os << "axis " << to_string(spec.axis) << ": ";
    if (!std::isfinite(v)) {
      os << "value is not finite";
      throw Error(ErrorCode::InvalidAxis, os.str());
    }
    if (spec.axis == Axis::k && (v != std::floor(v) || v < 2.0)) {
      os << "tree order " << v << " is not an integer >= 2";
      throw Error(ErrorCode::InvalidAxis, os.str());
    }
    if (spec.axis == Axis::T && !(v > 0.0)) {
      os << "temperature " << v << " is not positive";
      throw Error(ErrorCode::InvalidAxis, os.str());
    }
  }
}

ModelParams with_value(ModelParams p, Axis axis, double v) {
  switch (axis) {
    case Axis::J: p.J = v; break;
    case Axis::Jp: p.Jp = v; break;
    case Axis::T: p.T = v; break;
    case Axis::k: p.k = static_cast<int>(v); break;
  }
  return make_params(p.J, p.Jp, p.T, p.k);
}

}  // namespace

std::vector<ScanRow> scan(const ModelParams& base, const AxisSpec& first,
                          const std::optional<AxisSpec>& second, const SolverOptions& opts, int threads) {
  validate_axis(first);
  if (second) validate_axis(*second);
  if (second && second->axis == first.axis) {
    throw Error(ErrorCode::InvalidAxis, "axis " + std::string(to_string(first.axis)) + " is scanned twice");
  }

  const std::size_t n1 = first.values.size();
  const std::size_t n2 = second ? second->values.size() : 1;
  const std::size_t cells = second ? n1 * n2 : n1;
  std::vector<ScanRow> rows(cells);
  if (cells == 0) return rows;

  auto run_cell = [&](std::size_t idx) {
    const std::size_t i = idx / n2;
    const std::size_t j = idx % n2;
    ScanRow row;
    row.axis_values.push_back(first.values[i]);
    ModelParams p = with_value(base, first.axis, first.values[i]);
    if (second) {
      row.axis_values.push_back(second->values[j]);
      p = with_value(p, second->axis, second->values[j]);
    }
    const auto roots = find_fixed_points(p, opts);
    row.count = static_cast<int>(roots.points.size());
    row.x_min = roots.points.front().x;
    row.x_max = roots.points.back().x;
    row.transition = row.count >= 3;
    rows[idx] = std::move(row);
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(cells)));
  if (workers == 1) {
    for (std::size_t idx = 0; idx < cells; ++idx) run_cell(idx);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t idx = next++; idx < cells; idx = next++) run_cell(idx);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace ivtree
