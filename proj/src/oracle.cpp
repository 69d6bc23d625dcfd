#include "ivtree/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>
#include <thread>

#include "ivtree/error.hpp"
#include "ivtree/kernels.hpp"

namespace ivtree {

namespace {

void require_matching(const ModelParams& params, const BoundaryFieldVector& h) {
  if (h.k != params.k) {
    std::ostringstream os;
    os << "field vector has k = " << h.k << ", parameters have k = " << params.k;
    throw Error(ErrorCode::InvalidFieldVector, os.str());
  }
}

void require_spin(int s) {
  if (s != 1 && s != -1) throw Error(ErrorCode::InvalidSpin, "spins must be +1 or -1");
}

constexpr std::size_t kBlock = 1024;

}  // namespace

double branch_sum_enumerated(const ModelParams& params, const BoundaryFieldVector& h, int s_root,
                             int s_branch) {
  require_matching(params, h);
  require_spin(s_root);
  require_spin(s_branch);
  const int k = params.k;
  if (k > kMaxEnumeratedBranch) {
    std::ostringstream os;
    os << "branch enumeration limited to k <= " << kMaxEnumeratedBranch << ", got " << k;
    throw Error(ErrorCode::EnumerationTooLarge, os.str());
  }
  const std::uint32_t count = 1u << k;
  std::vector<double> logw(count);
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    const int down = std::popcount(bits);
    const int sum = k - 2 * down;
    const int prod = (down % 2 == 0) ? 1 : -1;
    logw[bits] = params.beta * params.J * s_branch * sum + params.beta * params.Jp * s_root * sum +
                 s_branch * prod * h.at(s_branch, down);
  }
  return kernels::log_sum_exp(logw);
}

BranchSums enumerated_branch_sums(const ModelParams& params, const BoundaryFieldVector& h) {
  return {branch_sum_enumerated(params, h, 1, 1), branch_sum_enumerated(params, h, 1, -1),
          branch_sum_enumerated(params, h, -1, 1), branch_sum_enumerated(params, h, -1, -1)};
}

FiniteMeasureTable exact_measure(const ModelParams& params, const BoundaryFieldVector& h, int n,
                                 int threads, BoundaryConvention convention) {
  require_matching(params, h);
  const int k = params.k;
  if (n != 1 && n != 2) throw Error(ErrorCode::InvalidDepth, "exact_measure supports depth 1 or 2");
  if ((n == 1 && k > 12) || (n == 2 && k > 3)) {
    std::ostringstream os;
    os << "exact enumeration at depth " << n << " is limited to k <= " << (n == 1 ? 12 : 3)
       << ", got " << k;
    throw Error(ErrorCode::EnumerationTooLarge, os.str());
  }

  const int vertices = FiniteTreeConfig::vertex_count(n, k);
  const std::size_t configs = std::size_t{1} << vertices;
  const double multiplicity = convention == BoundaryConvention::SemiBall ? 1.0 : static_cast<double>(k);

  // Semi-balls carrying the boundary field: the root for n = 1, the root's
  // children for n = 2.
  std::vector<int> centres;
  if (n == 1) {
    centres.push_back(0);
  } else {
    for (int i = 0; i < k; ++i) centres.push_back(FiniteTreeConfig::child(k, 0, i));
  }

  FiniteMeasureTable table;
  table.n = n;
  table.k = k;
  table.probs.assign(configs, 0.0);
  std::vector<double>& logw = table.probs;  // log weights first, normalised in place below

  const std::size_t blocks = (configs + kBlock - 1) / kBlock;
  std::vector<double> block_lse(blocks);

  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * kBlock;
    const std::size_t end = std::min(configs, begin + kBlock);
    for (std::size_t idx = begin; idx < end; ++idx) {
      const auto cfg = FiniteTreeConfig::from_bits(n, k, idx);
      double w = -params.beta * finite_energy(cfg, params);
      for (int x : centres) {
        int down = 0;
        int prod = 1;
        for (int j = 0; j < k; ++j) {
          const int s = cfg.spins[FiniteTreeConfig::child(k, x, j)];
          prod *= s;
          down += s < 0 ? 1 : 0;
        }
        const int sx = cfg.spins[x];
        w += multiplicity * sx * prod * h.at(sx, down);
      }
      logw[idx] = w;
    }
    block_lse[b] = kernels::log_sum_exp(std::span<const double>(logw).subspan(begin, end - begin));
  };

  auto parallel = [&](auto&& body) {
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));
    if (workers == 1) {
      for (std::size_t b = 0; b < blocks; ++b) body(b);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = next++; b < blocks; b = next++) body(b);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  };

  parallel(run_block);
  table.log_partition = kernels::log_sum_exp(block_lse);
  parallel([&](std::size_t b) {
    const std::size_t begin = b * kBlock;
    const std::size_t end = std::min(configs, begin + kBlock);
    for (std::size_t idx = begin; idx < end; ++idx) logw[idx] = std::exp(logw[idx] - table.log_partition);
  });
  return table;
}

std::vector<double> marginal_to_depth1(const FiniteMeasureTable& depth2) {
  if (depth2.n != 2) throw Error(ErrorCode::InvalidDepth, "marginal_to_depth1 needs a depth-2 table");
  const int k = depth2.k;
  const int low_bits = 1 + k;
  const std::size_t low_count = std::size_t{1} << low_bits;
  const std::size_t high_count = std::size_t{1} << (k * k);
  std::vector<double> marginal(low_count);
  std::vector<double> column(high_count);
  for (std::size_t low = 0; low < low_count; ++low) {
    for (std::size_t high = 0; high < high_count; ++high) {
      column[high] = depth2.probs[low | (high << low_bits)];
    }
    marginal[low] = kernels::pairwise_sum(column);
  }
  return marginal;
}

KolmogorovReport kolmogorov_check(const ModelParams& params, const BoundaryFieldVector& h, int threads,
                                  BoundaryConvention convention) {
  const auto mu1 = exact_measure(params, h, 1, threads, convention);
  const auto mu2 = exact_measure(params, h, 2, threads, convention);
  const auto marginal = marginal_to_depth1(mu2);

  KolmogorovReport r;
  for (std::size_t i = 0; i < marginal.size(); ++i) {
    r.deviation = std::max(r.deviation, std::abs(marginal[i] - mu1.probs[i]));
  }
  r.log_z1 = mu1.log_partition;
  r.log_z2 = mu2.log_partition;
  r.l2 = std::exp(r.log_z1 - r.log_z2);
  r.mass1 = kernels::pairwise_sum(mu1.probs);
  r.mass2 = kernels::pairwise_sum(mu2.probs);
  r.min_prob = std::min(*std::min_element(mu1.probs.begin(), mu1.probs.end()),
                        *std::min_element(mu2.probs.begin(), mu2.probs.end()));
  return r;
}

double kolmogorov_deviation(const ModelParams& params, const BoundaryFieldVector& h, int threads) {
  return kolmogorov_check(params, h, threads).deviation;
}

Theorem1Paths theorem1_paths(const ModelParams& params, const BoundaryFieldVector& h) {
  Theorem1Paths out;
  out.closed_form = consistency_residuals(h, closed_form_branch_sums(h, params));
  out.enumerated = consistency_residuals(h, enumerated_branch_sums(params, h));
  for (int i = 0; i < 3; ++i) {
    out.max_residual =
        std::max({out.max_residual, std::abs(out.closed_form[i]), std::abs(out.enumerated[i])});
    out.path_gap = std::max(out.path_gap, std::abs(out.closed_form[i] - out.enumerated[i]));
  }
  return out;
}

double check_theorem1(const ModelParams& params, const BoundaryFieldVector& h) {
  return theorem1_paths(params, h).max_residual;
}

}  // namespace ivtree
