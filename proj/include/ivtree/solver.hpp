#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ivtree/model.hpp"

namespace ivtree {

enum class Stability { Stable, Unstable, Neutral };

std::string_view to_string(Stability s);

struct FixedPoint {
  double x = 1.0;
  double derivative = 0.0;  ///< map'(x)
  Stability stability = Stability::Neutral;
};

struct SolverOptions {
  int grid_points = 4096;
  double margin = 10.0;          ///< bracket is range(map) widened by this factor
  double bisect_tol = 1e-13;     ///< on log x, i.e. relative on x
  double merge_tol = 1e-8;       ///< relative distance under which roots merge
  bool polish = true;
  double neutral_band = 1e-6;    ///< |map'| within 1 +- band is neutral
  double residual_tol = 1e-8;    ///< accepted |map(x) - x| / x for classification
};

/// Critical abscissas x_lo < x_hi of f(x)/x (solutions of x f'(x) = f(x)) and
/// the corresponding slopes eta = f(x_i)/x_i. Absent when there is no
/// positive critical pair.
struct CriticalData {
  std::optional<double> x_lo;
  std::optional<double> x_hi;
  std::optional<double> eta_lo;
  std::optional<double> eta_hi;
  double threshold_d = 1.0;  ///< sqrt((k+1)/(k-1)) for even k, (k+1)/(k-1) for odd k
};

struct RootScan {
  std::vector<FixedPoint> points;  ///< ascending
  int predicted = 1;               ///< predicted_solution_count
  bool grid_flagged = false;       ///< points.size() != predicted
};

/// Log-space bracket [lo, hi] on log x that contains every fixed point.
std::pair<double, double> fixed_point_bracket(const ModelParams& params, double margin);

/// All positive solutions of map(x) = x. Sign changes of log map(x) - log x
/// are located on a log-spaced grid augmented with the closed-form critical
/// abscissas (between consecutive critical points the residual is monotone,
/// so each cell holds at most one root), refined by bisection and an optional
/// guarded Newton step.
RootScan find_fixed_points(const ModelParams& params, const SolverOptions& opts = {});

/// Throws Error(NotAFixedPoint) when |map(x) - x| / x exceeds residual_tol.
FixedPoint classify_stability(double x, const ModelParams& params, double residual_tol = 1e-8,
                              double neutral_band = 1e-6);

CriticalData critical_points(const ModelParams& params);

/// critical_points with eta_lo/eta_hi filled in (when the pair exists).
CriticalData eta_thresholds(const ModelParams& params);

/// Number of positive solutions of map(x) = slope * x predicted from the
/// critical slopes: 1 below the critical pair or outside [eta_lo, eta_hi],
/// 2 within `tangency_tol` of either threshold, 3 strictly between.
int predicted_intersection_count(const ModelParams& params, double slope, double tangency_tol = 1e-9);

/// predicted_intersection_count at slope 1, i.e. the fixed-point count.
int predicted_solution_count(const ModelParams& params);

/// Unique positive inflection point of the even map, absent when d = 1.
std::optional<double> inflection_point_even(const ModelParams& params);

/// min |map(x) - x| over [x_lo, x_hi]; absent without a critical pair.
std::optional<double> tangency_gap(const ModelParams& params);

}  // namespace ivtree
