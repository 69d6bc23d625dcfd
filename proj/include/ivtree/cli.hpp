#pragma once

#include <string>
#include <vector>

#include "ivtree/model.hpp"

namespace ivtree::cli {

inline constexpr const char* kSchemaVersion = "1";

struct RunResult {
  int exit_code = 0;  ///< 0 success, 1 numeric failure, 2 usage error
  std::string out;
  std::string err;
};

/// Runs one command line. `args` excludes the program name.
RunResult run(const std::vector<std::string>& args);

struct PlotRow {
  double x = 0.0;
  double map = 0.0;       ///< f(x) for even k, g(x) for odd k
  double diagonal = 0.0;  ///< the y = x reference
};

/// `count` equally spaced abscissas from x_min to x_max inclusive.
/// Throws Error(NonPositiveArgument) unless 0 < x_min < x_max and count >= 2.
std::vector<PlotRow> emit_plot_data(const ModelParams& params, double x_min, double x_max, int count);

}  // namespace ivtree::cli
