#pragma once

#include <array>
#include <vector>

#include "ivtree/fields.hpp"
#include "ivtree/model.hpp"
#include "ivtree/recurrence.hpp"

namespace ivtree {

/// How the boundary field enters the finite-volume weight. Each semi-ball
/// B_1(x), x in W_{n-1}, contributes sigma(x) * prod_{y in S(x)} sigma(y) * h(sigma(x), m_x)
/// once (SemiBall) or k times (SemiBallTimesK, the literal double-sum reading
/// kept only to show that it breaks compatibility).
enum class BoundaryConvention { SemiBall, SemiBallTimesK };

/// Exact Gibbs distribution on V_n. probs[i] belongs to
/// FiniteTreeConfig::from_bits(n, k, i).
struct FiniteMeasureTable {
  int n = 1;
  int k = 2;
  std::vector<double> probs;
  double log_partition = 0.0;  ///< log Z_h^{(n)}
};

inline constexpr int kMaxEnumeratedBranch = 12;

/// log of sum over the 2^k successor patterns eta of a branch vertex with
/// spin s_branch under a root with spin s_root of
///   exp(beta J s_branch sum(eta) + beta Jp s_root sum(eta) + s_branch prod(eta) h(s_branch, m(eta)))
/// by direct enumeration (k <= 12).
double branch_sum_enumerated(const ModelParams& params, const BoundaryFieldVector& h, int s_root,
                             int s_branch);

/// Enumerated counterpart of closed_form_branch_sums.
BranchSums enumerated_branch_sums(const ModelParams& params, const BoundaryFieldVector& h);

/// n = 1 needs k <= 12, n = 2 needs k <= 3. Configurations are processed in
/// fixed blocks; `threads` workers share the blocks and the reduction order
/// is fixed, so the table is bit-identical for any worker count.
FiniteMeasureTable exact_measure(const ModelParams& params, const BoundaryFieldVector& h, int n,
                                 int threads = 1,
                                 BoundaryConvention convention = BoundaryConvention::SemiBall);

/// Depth-1 marginal of the depth-2 table, indexed like a depth-1 table.
std::vector<double> marginal_to_depth1(const FiniteMeasureTable& depth2);

struct KolmogorovReport {
  double deviation = 0.0;  ///< max |marginal(sigma_1) - mu^(1)(sigma_1)|
  double log_z1 = 0.0;
  double log_z2 = 0.0;
  double l2 = 1.0;         ///< Z_1 / Z_2, diagnostic only
  double mass1 = 1.0;
  double mass2 = 1.0;
  double min_prob = 0.0;
};

KolmogorovReport kolmogorov_check(const ModelParams& params, const BoundaryFieldVector& h,
                                  int threads = 1,
                                  BoundaryConvention convention = BoundaryConvention::SemiBall);

/// kolmogorov_check(...).deviation; needs k <= 3.
double kolmogorov_deviation(const ModelParams& params, const BoundaryFieldVector& h, int threads = 1);

struct Theorem1Paths {
  std::array<double, 3> closed_form{};
  std::array<double, 3> enumerated{};
  double max_residual = 0.0;  ///< over both paths
  double path_gap = 0.0;      ///< max |closed_form[i] - enumerated[i]|
};

Theorem1Paths theorem1_paths(const ModelParams& params, const BoundaryFieldVector& h);

/// Max absolute log residual of the three compatibility equations over the
/// closed-form and enumerated evaluations. k <= 12.
double check_theorem1(const ModelParams& params, const BoundaryFieldVector& h);

}  // namespace ivtree
