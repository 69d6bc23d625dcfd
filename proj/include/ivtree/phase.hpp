#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ivtree/error.hpp"
#include "ivtree/model.hpp"
#include "ivtree/solver.hpp"

namespace ivtree {

struct PhasePortrait {
  ModelParams params;
  std::vector<FixedPoint> fixed_points;
  int count = 0;
  bool transition = false;  ///< count >= 3; a tangency (count 2) is not flagged
  CriticalData critical;
  int predicted = 1;
  bool grid_flagged = false;
};

PhasePortrait portrait(const ModelParams& params, const SolverOptions& opts = {});

struct CriticalTemperature {
  double tc = 0.0;
  double bracket_lo = 0.0;   ///< final bisection bracket
  double bracket_hi = 0.0;
  bool degenerate = false;   ///< tol was not smaller than the range width
  bool validated = false;    ///< indicators at tc -+ 2 tol match the range ends
  int count_below = 0;       ///< fixed points at tc - 2 tol
  int count_above = 0;       ///< fixed points at tc + 2 tol
};

/// Raised when the transition indicator agrees at both ends of the range.
class SameIndicatorError : public Error {
 public:
  SameIndicatorError(const std::string& what, PhasePortrait lower, PhasePortrait upper)
      : Error(ErrorCode::SameIndicator, what), lower_(std::move(lower)), upper_(std::move(upper)) {}

  const PhasePortrait& lower() const { return lower_; }
  const PhasePortrait& upper() const { return upper_; }

 private:
  PhasePortrait lower_;
  PhasePortrait upper_;
};

/// Bisects T on the indicator count >= 3 until the bracket is narrower than
/// tol and returns its midpoint. The indicator is assumed monotone inside
/// the range; with a re-entrant boundary the first crossing found is reported.
CriticalTemperature critical_temperature(double J, double Jp, int k, std::pair<double, double> t_range,
                                         double tol, const SolverOptions& opts = {});

enum class Axis { J, Jp, T, k };

std::string_view to_string(Axis axis);
/// Throws Error(InvalidAxis) for names other than J, Jp, T, k.
Axis parse_axis(std::string_view name);

struct AxisSpec {
  Axis axis = Axis::T;
  std::vector<double> values;
};

struct ScanRow {
  std::vector<double> axis_values;  ///< one per scanned axis, in axis order
  int count = 0;
  double x_min = 0.0;
  double x_max = 0.0;
  bool transition = false;
};

/// Cartesian product of the axes over `base`, rows in lexicographic axis
/// order (the first axis varies slowest). Cells are independent and may run
/// on `threads` workers; the output order does not depend on the worker count.
std::vector<ScanRow> scan(const ModelParams& base, const AxisSpec& first,
                          const std::optional<AxisSpec>& second, const SolverOptions& opts = {},
                          int threads = 1);

}  // namespace ivtree
