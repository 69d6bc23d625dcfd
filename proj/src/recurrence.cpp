#include "ivtree/recurrence.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "ivtree/error.hpp"
#include "ivtree/logspace.hpp"

namespace ivtree {

namespace ls = logspace;

namespace {

double checked_log(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << x;
    throw Error(ErrorCode::NonPositiveArgument, os.str());
  }
  return std::log(x);
}

void require_parity(const ModelParams& params, bool even, const char* op) {
  if (params.even() != even) {
    std::ostringstream os;
    os << op << " needs " << (even ? "even" : "odd") << " k, got k = " << params.k;
    throw Error(ErrorCode::ParityMismatch, os.str());
  }
}

// Pieces of the reduced map at log_x: t = log(c x^p), log N = log(1 + d e^t),
// log D = log(d + e^t).
struct MapTerms {
  double t;
  double log_num;
  double log_den;
};

MapTerms map_terms(double log_x, const kernels::ReducedMapCoeffs& co) {
  const double t = co.log_c + co.power * log_x;
  return {t, ls::softplus(co.log_d + t), ls::add(co.log_d, t)};
}

}  // namespace

kernels::ReducedMapCoeffs reduced_map_coeffs(const ModelParams& params) {
  kernels::ReducedMapCoeffs co;
  co.log_c = params.log_c();
  co.log_d = params.log_d();
  if (params.even()) {
    co.exponent = params.k / 2.0;
    co.power = 2.0;
  } else {
    co.exponent = params.k;
    co.power = 1.0;
  }
  return co;
}

double log_reduced_map(double log_x, const ModelParams& params) {
  const auto co = reduced_map_coeffs(params);
  const auto m = map_terms(log_x, co);
  return co.exponent * (m.log_num - m.log_den);
}

double reduced_map(double x, const ModelParams& params) {
  const double v = std::exp(log_reduced_map(checked_log(x, "reduced coordinate"), params));
  if (!std::isfinite(v)) throw Error(ErrorCode::MapOverflow, "reduced map value is not representable");
  return v;
}

double reduced_log_residual(double log_x, const ModelParams& params) {
  return log_reduced_map(log_x, params) - log_x;
}

double elasticity(double log_x, const ModelParams& params) {
  const double ld = params.log_d();
  if (ld == 0.0) return 0.0;
  const auto co = reduced_map_coeffs(params);
  const auto m = map_terms(log_x, co);
  // x f'/f = (exponent * power) (d^2 - 1) e^t / (N D)
  const double mag = std::log(co.exponent * co.power) + ls::log_abs_expm1(2.0 * ld) + m.t -
                     m.log_num - m.log_den;
  return (ld > 0.0 ? 1.0 : -1.0) * std::exp(mag);
}

MapDerivatives reduced_map_derivatives(double x, const ModelParams& params) {
  const double lx = checked_log(x, "reduced coordinate");
  const double ld = params.log_d();
  if (ld == 0.0) return {0.0, 0.0};

  const auto co = reduced_map_coeffs(params);
  const auto m = map_terms(lx, co);
  const double k = params.k;
  const double d = std::exp(ld);
  const double sign_d = ld > 0.0 ? 1.0 : -1.0;
  const double log_d2m1 = ls::log_abs_expm1(2.0 * ld);

  MapDerivatives out;
  const double log_f = co.exponent * (m.log_num - m.log_den);
  out.first = sign_d * std::exp(log_f - lx + std::log(k) + log_d2m1 + m.t - m.log_num - m.log_den);

  if (params.even()) {
    // f'' = -c (d^2-1) k Q(x) / ((d + c x^2)^{2+k/2} (1 + c d x^2)^{2-k/2}),
    // Q = 3 c^2 d x^4 + c (1 + d^2 + k - d^2 k) x^2 - d, written in w = c x^2.
    const double lin = 1.0 + d * d + k - d * d * k;
    double log_q;
    double sign_q;
    if (m.t > 0.0) {
      const double scaled = 3.0 * d + lin * std::exp(-m.t) - d * std::exp(-2.0 * m.t);
      log_q = 2.0 * m.t + std::log(std::abs(scaled));
      sign_q = scaled >= 0.0 ? 1.0 : -1.0;
    } else {
      const double w = std::exp(m.t);
      const double q = 3.0 * d * w * w + lin * w - d;
      log_q = std::log(std::abs(q));
      sign_q = q >= 0.0 ? 1.0 : -1.0;
    }
    const double mag = std::log(k) + log_d2m1 + params.log_c() + log_q +
                       (k / 2.0 - 2.0) * m.log_num - (k / 2.0 + 2.0) * m.log_den;
    out.second = -sign_d * sign_q * std::exp(mag);
  } else {
    // Differentiating g twice (not printed alongside the odd map):
    //   g'' = k c^2 (d^2-1) (1 + c d x)^{k-2} (d + c x)^{-k-2} ((k-1) d^2 - (k+1) - 2 d c x)
    const double w = std::exp(m.t);
    const double r = (k - 1.0) * d * d - (k + 1.0) - 2.0 * d * w;
    const double mag = std::log(k) + 2.0 * params.log_c() + log_d2m1 + (k - 2.0) * m.log_num -
                       (k + 2.0) * m.log_den + std::log(std::abs(r));
    out.second = sign_d * (r >= 0.0 ? 1.0 : -1.0) * std::exp(mag);
  }
  return out;
}

RatioPair ratio_map_even(const RatioPair& p, const ModelParams& params) {
  require_parity(params, true, "ratio_map_even");
  const double l1 = checked_log(p.v1, "v_1");
  const double lk = checked_log(p.vk1, "v_{k+1}");
  const double lc = params.log_c();
  const double ld = params.log_d();
  // (c d v1 + vk1) and (c v1 + d vk1)
  const double lnum = ls::add(lc + ld + l1, lk);
  const double lden = ls::add(lc + l1, ld + lk);
  const double half_k = params.k / 2.0;
  return {std::exp(half_k * (lnum - lden)), std::exp(half_k * (lden - lnum))};
}

std::array<double, 2> odd_fixed_residuals(double vk1, double vk2, const ModelParams& params) {
  require_parity(params, false, "odd_fixed_residuals");
  const double l1 = checked_log(vk1, "v_{k+1}");
  const double l2 = checked_log(vk2, "v_{k+2}");
  const double k = params.k;
  const double lc = params.log_c();
  const double ld = params.log_d();
  auto one = [&](double la, double lb) {
    const double lhs = (2.0 * k + 1.0) * la - k * lb;
    const double rhs = k * (ls::softplus(lc + ld + (k + 1.0) * la) - ls::add(ld, lc + (k + 1.0) * lb));
    return lhs - rhs;
  };
  return {one(l1, l2), one(l2, l1)};
}

BranchSums closed_form_branch_sums(const BoundaryFieldVector& h, const ModelParams& params) {
  const int k = params.k;
  if (h.k != k) {
    std::ostringstream os;
    os << "field vector has k = " << h.k << ", parameters have k = " << k;
    throw Error(ErrorCode::InvalidFieldVector, os.str());
  }
  const double la = params.log_a();
  const double lb = params.log_b();
  std::vector<double> terms(k + 1);
  auto sum = [&](int root, int branch) {
    for (int i = 0; i <= k; ++i) {
      const double alt = (i % 2 == 0) ? 1.0 : -1.0;
      terms[i] = ls::log_binomial(k, i) + (k - 2 * i) * (branch * la + root * lb) +
                 branch * alt * h.at(branch, i);
    }
    const double v = kernels::log_sum_exp(terms);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "branch sum B(" << root << "," << branch << ") has log " << v;
      throw Error(ErrorCode::NonPositiveSum, os.str());
    }
    return v;
  };
  return {sum(1, 1), sum(1, -1), sum(-1, 1), sum(-1, -1)};
}

std::array<double, 3> consistency_residuals(const BoundaryFieldVector& h, const BranchSums& s) {
  const int k = h.k;
  const double tail = (k % 2 == 0) ? 1.0 : -1.0;
  return {
      h.at(1, 0) + h.at(-1, 0) - k * (s.pp - s.mp),
      h.at(1, 0) + tail * h.at(-1, k) - k * (s.pp - s.mm),
      tail * (h.at(1, k) + h.at(-1, k)) - k * (s.pm - s.mm),
  };
}

std::array<double, 3> theorem1_residuals(const BoundaryFieldVector& h, const ModelParams& params) {
  return consistency_residuals(h, closed_form_branch_sums(h, params));
}

}  // namespace ivtree
