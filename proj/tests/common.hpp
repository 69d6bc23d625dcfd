#pragma once

#include <cmath>
#include <random>

#include "ivtree/model.hpp"

namespace testing {

// Reference parameter sets; both have three fixed points at the default k.
inline ivtree::ModelParams even_example(int k = 10) { return ivtree::make_params(-5.8, 3.25, 14.358, k); }
inline ivtree::ModelParams odd_example(int k = 9) { return ivtree::make_params(-7.3, 5.1, 28.0, k); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace testing
