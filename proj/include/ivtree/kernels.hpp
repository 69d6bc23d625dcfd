#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation and, on x86-64 builds, an AVX2+FMA variant chosen at run
// time. The two are equivalence-tested; the scalar one is the definition.

#include <optional>
#include <span>
#include <string_view>

namespace ivtree::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend backend);

/// True when the AVX2 variant was compiled in and the CPU supports it.
bool avx2_available();

/// Backend used by the dispatching entry points. Defaults to the fastest
/// available; IVTREE_BACKEND=scalar|avx2 in the environment overrides.
Backend active_backend();

/// Force a backend (tests). std::nullopt restores automatic selection.
/// Requesting Avx2 where it is unavailable falls back to Scalar.
void set_backend_override(std::optional<Backend> backend);

/// Coefficients of the reduced log residual
///   phi(l) = exponent * (log(1 + e^{log_c + log_d + power*l}) - log(e^{log_d} + e^{log_c + power*l})) - l
/// i.e. log f(x) - log x at l = log x, with (exponent, power) = (k/2, 2) for
/// even trees and (k, 1) for odd ones.
struct ReducedMapCoeffs {
  double log_c = 0.0;
  double log_d = 0.0;
  double exponent = 1.0;
  double power = 2.0;
};

/// out[i] = phi(log_x[i]). Spans must have equal length.
void reduced_log_residual(const ReducedMapCoeffs& coeffs, std::span<const double> log_x,
                          std::span<double> out);

/// log(sum_i exp(values[i])); -inf for an empty span. Summation order is fixed
/// (pairwise), so results are reproducible for a given backend.
double log_sum_exp(std::span<const double> values);

/// Pairwise sum with a fixed reduction tree.
double pairwise_sum(std::span<const double> values);

namespace scalar {
void reduced_log_residual(const ReducedMapCoeffs& coeffs, std::span<const double> log_x,
                          std::span<double> out);
double log_sum_exp(std::span<const double> values);
double pairwise_sum(std::span<const double> values);
}  // namespace scalar

#if defined(IVTREE_HAVE_AVX2)
namespace avx2 {
void reduced_log_residual(const ReducedMapCoeffs& coeffs, std::span<const double> log_x,
                          std::span<double> out);
double log_sum_exp(std::span<const double> values);
double pairwise_sum(std::span<const double> values);

// Exposed for equivalence tests. exp_nonpositive requires x <= 0.
void exp_nonpositive(std::span<const double> x, std::span<double> out);
void log(std::span<const double> x, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace ivtree::kernels
