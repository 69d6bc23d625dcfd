#pragma once

// Scalar log-space primitives shared by the reference kernels and the
// closed-form maps. Everything here is branch-light and overflow-free for
// finite arguments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ivtree::logspace {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(exp(a) + exp(b)).
inline double add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

/// log(1 + exp(z)).
inline double softplus(double z) { return add(0.0, z); }

/// log|exp(z) - 1| for z != 0.
inline double log_abs_expm1(double z) {
  if (z > 0.0) return z + std::log1p(-std::exp(-z));
  return std::log(-std::expm1(z));
}

/// log C(n, i). The coefficient is formed exactly in 64-bit integers (valid
/// for n <= 66) and rounded once; larger n fall back to lgamma.
inline double log_binomial(int n, int i) {
  if (i < 0 || i > n) return kNegInf;
  if (n <= 66) {
    const int r = std::min(i, n - i);
    unsigned long long c = 1;
    for (int j = 1; j <= r; ++j) {
      // c * (n - r + j) / j stays integral at every step.
      const unsigned long long num = static_cast<unsigned long long>(n - r + j);
      const unsigned long long g = c / j;
      const unsigned long long rem = c % j;
      c = g * num + (rem * num) / j;
    }
    return std::log(static_cast<double>(c));
  }
  return std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
}

}  // namespace ivtree::logspace
