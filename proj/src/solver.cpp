#include "ivtree/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ivtree/error.hpp"
#include "ivtree/kernels.hpp"
#include "ivtree/recurrence.hpp"

namespace ivtree {

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Neutral: return "neutral";
  }
  return "neutral";
}

namespace {

Stability stability_of(double derivative, double band) {
  const double mag = std::abs(derivative);
  if (mag < 1.0 - band) return Stability::Stable;
  if (mag > 1.0 + band) return Stability::Unstable;
  return Stability::Neutral;
}

// Roots w_lo <= w_hi of w^2 - s w + 1 = 0, where w = c x^2 (even) or c x (odd).
// Both critical-abscissa quadratics reduce to this form after scaling.
std::optional<std::pair<double, double>> critical_w(const ModelParams& params) {
  const double ld = params.log_d();
  if (ld <= 0.0) return std::nullopt;
  const double d = std::exp(ld);
  const double k = params.k;
  const double s = d * (k - 1.0) - (k + 1.0) / d;
  if (!(s > 2.0)) return std::nullopt;
  const double w_hi = 0.5 * (s + std::sqrt((s - 2.0) * (s + 2.0)));
  return std::make_pair(1.0 / w_hi, w_hi);
}

double log_x_from_w(double w, const ModelParams& params) {
  const double lw = std::log(w);
  return params.even() ? 0.5 * (lw - params.log_c()) : lw - params.log_c();
}

struct Bracket {
  double lo;
  double hi;
  double phi_lo;
};

double refine(const Bracket& cell, const ModelParams& params, const SolverOptions& opts) {
  double lo = cell.lo;
  double hi = cell.hi;
  double phi_lo = cell.phi_lo;
  while (hi - lo > opts.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double phi_mid = reduced_log_residual(mid, params);
    if (phi_mid == 0.0) return mid;
    if ((phi_mid > 0.0) == (phi_lo > 0.0)) {
      lo = mid;
      phi_lo = phi_mid;
    } else {
      hi = mid;
    }
  }
  double best = 0.5 * (lo + hi);
  if (!opts.polish) return best;
  const double phi = reduced_log_residual(best, params);
  const double slope = elasticity(best, params) - 1.0;
  if (slope == 0.0 || !std::isfinite(slope)) return best;
  const double step = best - phi / slope;
  if (step < cell.lo || step > cell.hi) return best;
  return std::abs(reduced_log_residual(step, params)) <= std::abs(phi) ? step : best;
}

}  // namespace

std::pair<double, double> fixed_point_bracket(const ModelParams& params, double margin) {
  const auto co = reduced_map_coeffs(params);
  const double span = co.exponent * std::abs(co.log_d) + std::log(margin);
  return {-span, span};
}

RootScan find_fixed_points(const ModelParams& params, const SolverOptions& opts) {
  if (opts.grid_points < 2) throw Error(ErrorCode::NonPositiveArgument, "grid needs at least 2 points");
  if (!(opts.margin > 1.0)) throw Error(ErrorCode::NonPositiveArgument, "bracket margin must exceed 1");

  const auto [lo, hi] = fixed_point_bracket(params, opts.margin);
  std::vector<double> grid(opts.grid_points);
  const double step = (hi - lo) / (opts.grid_points - 1);
  for (int i = 0; i < opts.grid_points; ++i) grid[i] = lo + step * i;
  grid.back() = hi;

  const auto crit = critical_points(params);
  for (const auto& xc : {crit.x_lo, crit.x_hi}) {
    if (!xc) continue;
    const double l = std::log(*xc);
    if (l > lo && l < hi) grid.push_back(l);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> phi(grid.size());
  kernels::reduced_log_residual(reduced_map_coeffs(params), grid, phi);

  std::vector<double> roots;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (phi[i] == 0.0) {
      roots.push_back(grid[i]);
      continue;
    }
    if (i + 1 < grid.size() && phi[i + 1] != 0.0 && (phi[i] > 0.0) != (phi[i + 1] > 0.0)) {
      roots.push_back(refine({grid[i], grid[i + 1], phi[i]}, params, opts));
    }
  }

  RootScan scan;
  for (double l : roots) {
    const double x = std::exp(l);
    if (!scan.points.empty() &&
        std::abs(x - scan.points.back().x) <= opts.merge_tol * std::max(x, scan.points.back().x)) {
      continue;
    }
    FixedPoint fp;
    fp.x = x;
    fp.derivative = elasticity(l, params) * std::exp(reduced_log_residual(l, params));
    fp.stability = stability_of(fp.derivative, opts.neutral_band);
    scan.points.push_back(fp);
  }
  scan.predicted = predicted_solution_count(params);
  scan.grid_flagged = static_cast<int>(scan.points.size()) != scan.predicted;
  return scan;
}

FixedPoint classify_stability(double x, const ModelParams& params, double residual_tol,
                              double neutral_band) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::NonPositiveArgument, "fixed point must be positive and finite");
  }
  const double l = std::log(x);
  const double phi = reduced_log_residual(l, params);
  const double rel = std::abs(std::expm1(phi));
  if (!(rel <= residual_tol)) {
    std::ostringstream os;
    os << "x = " << x << " is not a fixed point: |f(x) - x| / x = " << rel;
    throw Error(ErrorCode::NotAFixedPoint, os.str());
  }
  FixedPoint fp;
  fp.x = x;
  fp.derivative = elasticity(l, params) * std::exp(phi);
  fp.stability = stability_of(fp.derivative, neutral_band);
  return fp;
}

CriticalData critical_points(const ModelParams& params) {
  CriticalData out;
  const double k = params.k;
  const double ratio = (k + 1.0) / (k - 1.0);
  out.threshold_d = params.even() ? std::sqrt(ratio) : ratio;
  if (const auto w = critical_w(params)) {
    out.x_lo = std::exp(log_x_from_w(w->first, params));
    out.x_hi = std::exp(log_x_from_w(w->second, params));
  }
  return out;
}

CriticalData eta_thresholds(const ModelParams& params) {
  CriticalData out = critical_points(params);
  if (out.x_lo && out.x_hi) {
    const double a = std::exp(reduced_log_residual(std::log(*out.x_lo), params));
    const double b = std::exp(reduced_log_residual(std::log(*out.x_hi), params));
    out.eta_lo = std::min(a, b);
    out.eta_hi = std::max(a, b);
  }
  return out;
}

int predicted_intersection_count(const ModelParams& params, double slope, double tangency_tol) {
  const auto eta = eta_thresholds(params);
  if (!eta.eta_lo || !eta.eta_hi) return 1;
  if (std::abs(*eta.eta_lo - slope) <= tangency_tol || std::abs(*eta.eta_hi - slope) <= tangency_tol) {
    return 2;
  }
  return (*eta.eta_lo < slope && slope < *eta.eta_hi) ? 3 : 1;
}

int predicted_solution_count(const ModelParams& params) {
  return predicted_intersection_count(params, 1.0);
}

std::optional<double> inflection_point_even(const ModelParams& params) {
  if (!params.even()) {
    throw Error(ErrorCode::ParityMismatch, "inflection_point_even needs even k");
  }
  const double ld = params.log_d();
  if (ld == 0.0) return std::nullopt;
  const double d = std::exp(ld);
  const double k = params.k;
  // Positive root in y = x^2 of 3 c^2 d y^2 + c (1 + d^2 + k - d^2 k) y - d = 0.
  const double kk = d * d * (k - 1.0) - (k + 1.0);
  const double root = std::sqrt(12.0 * d * d + kk * kk);
  const double num = kk >= 0.0 ? kk + root : 12.0 * d * d / (root - kk);
  return std::exp(0.5 * (std::log(num) - std::log(6.0) - params.log_c() - ld));
}

std::optional<double> tangency_gap(const ModelParams& params) {
  const auto crit = critical_points(params);
  if (!crit.x_lo || !crit.x_hi) return std::nullopt;
  const double lo = std::log(*crit.x_lo);
  const double hi = std::log(*crit.x_hi);
  auto gap = [&](double l) {
    return std::abs(std::exp(log_reduced_map(l, params)) - std::exp(l));
  };
  constexpr int kSamples = 2048;
  int best = 0;
  double best_val = gap(lo);
  for (int i = 1; i <= kSamples; ++i) {
    const double v = gap(lo + (hi - lo) * i / kSamples);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  // Golden-section search on the neighbouring cells.
  double a = lo + (hi - lo) * std::max(0, best - 1) / kSamples;
  double b = lo + (hi - lo) * std::min(kSamples, best + 1) / kSamples;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double e = a + g * (b - a);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (gap(c) < gap(e)) {
      b = e;
    } else {
      a = c;
    }
    c = b - g * (b - a);
    e = a + g * (b - a);
  }
  return std::min(best_val, gap(0.5 * (a + b)));
}

}  // namespace ivtree
