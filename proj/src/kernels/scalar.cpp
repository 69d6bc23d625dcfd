#include <algorithm>
#include <cmath>
#include <vector>

#include "ivtree/kernels.hpp"
#include "ivtree/logspace.hpp"

namespace ivtree::kernels::scalar {

void reduced_log_residual(const ReducedMapCoeffs& coeffs, std::span<const double> log_x,
                          std::span<double> out) {
  const double lcd = coeffs.log_c + coeffs.log_d;
  for (std::size_t i = 0; i < log_x.size(); ++i) {
    const double l = log_x[i];
    const double t = coeffs.log_c + coeffs.power * l;
    const double num = logspace::softplus(lcd + coeffs.power * l);
    const double den = logspace::add(coeffs.log_d, t);
    out[i] = coeffs.exponent * (num - den) - l;
  }
}

namespace {
constexpr std::size_t kLeaf = 8;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return logspace::kNegInf;
  const double hi = *std::max_element(values.begin(), values.end());
  if (hi == logspace::kNegInf) return hi;
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = std::exp(values[i] - hi);
  return hi + std::log(pairwise_sum(terms));
}

}  // namespace ivtree::kernels::scalar
