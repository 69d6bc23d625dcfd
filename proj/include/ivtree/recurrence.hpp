#pragma once

#include <array>

#include "ivtree/fields.hpp"
#include "ivtree/kernels.hpp"
#include "ivtree/model.hpp"

namespace ivtree {

/// Pair (v_1, v_{k+1}) carried by the even-order ratio map.
struct RatioPair {
  double v1 = 1.0;
  double vk1 = 1.0;
};

kernels::ReducedMapCoeffs reduced_map_coeffs(const ModelParams& params);

/// log of the reduced map at log_x:
///   even k: f(x) = ((1 + c d x^2) / (d + c x^2))^{k/2}
///   odd k:  g(x) = ((1 + c d x) / (d + c x))^k
double log_reduced_map(double log_x, const ModelParams& params);

/// f(x) or g(x) by parity. Throws for x <= 0.
double reduced_map(double x, const ModelParams& params);

/// log(map(x)) - log(x); zero exactly at fixed points.
double reduced_log_residual(double log_x, const ModelParams& params);

/// x * map'(x) / map(x) at log_x. At a fixed point this is map'(x) itself.
double elasticity(double log_x, const ModelParams& params);

struct MapDerivatives {
  double first = 0.0;
  double second = 0.0;
};

/// First and second derivatives of the reduced map.
MapDerivatives reduced_map_derivatives(double x, const ModelParams& params);

/// One step of the even-order map restricted to (v_1, v_{k+1}), obtained by
/// dividing the v-recurrences pairwise so the normalisation cancels.
/// The outputs multiply to 1 for every input: the image of set A lies in A.
RatioPair ratio_map_even(const RatioPair& p, const ModelParams& params);

/// Log residuals of the two odd-order fixed-point equations
///   v_{k+1}^{2k+1} v_{k+2}^{-k} = ((1 + (ab)^2 v_{k+1}^{k+1}) / (b^2 + a^2 v_{k+2}^{k+1}))^k
/// and the same with k+1 and k+2 exchanged.
std::array<double, 2> odd_fixed_residuals(double vk1, double vk2, const ModelParams& params);

/// Logs of the four single-branch partition sums B(s_root, s_branch), i.e.
/// the sum over the k grandchildren of one child of the root. Index by
/// root spin then branch spin.
struct BranchSums {
  double pp = 0.0;  // root +, branch +
  double pm = 0.0;  // root +, branch -
  double mp = 0.0;  // root -, branch +
  double mm = 0.0;  // root -, branch -

  double at(int root, int branch) const {
    if (root == 1) return branch == 1 ? pp : pm;
    return branch == 1 ? mp : mm;
  }
};

/// The binomial sums sum_i C(k,i) w^{k-2i} u_{...}^{+-1}, evaluated in log
/// space from the raw fields.
BranchSums closed_form_branch_sums(const BoundaryFieldVector& h, const ModelParams& params);

/// The three L_2-free compatibility equations, as log(lhs) - log(rhs):
///   h(+,0) + h(-,0)             = k (log B++ - log B-+)
///   h(+,0) + (-1)^k h(-,k)      = k (log B++ - log B--)
///   (-1)^k (h(+,k) + h(-,k))    = k (log B+- - log B--)
std::array<double, 3> consistency_residuals(const BoundaryFieldVector& h, const BranchSums& sums);

/// consistency_residuals with the closed-form branch sums.
std::array<double, 3> theorem1_residuals(const BoundaryFieldVector& h, const ModelParams& params);

}  // namespace ivtree
