#include <atomic>
#include <cstdlib>
#include <string_view>

#include "ivtree/kernels.hpp"

namespace ivtree::kernels {

std::string_view to_string(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

bool avx2_available() {
#if defined(IVTREE_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  return supported;
#else
  return false;
#endif
}

namespace {

// -1: automatic, otherwise a Backend value.
std::atomic<int> g_override{-1};

Backend automatic_backend() {
  static const Backend chosen = [] {
    if (const char* env = std::getenv("IVTREE_BACKEND")) {
      if (std::string_view(env) == "scalar") return Backend::Scalar;
    }
    return avx2_available() ? Backend::Avx2 : Backend::Scalar;
  }();
  return chosen;
}

}  // namespace

void set_backend_override(std::optional<Backend> backend) {
  g_override.store(backend ? static_cast<int>(*backend) : -1);
}

Backend active_backend() {
  const int forced = g_override.load();
  if (forced >= 0) {
    const auto b = static_cast<Backend>(forced);
    return (b == Backend::Avx2 && !avx2_available()) ? Backend::Scalar : b;
  }
  return automatic_backend();
}

void reduced_log_residual(const ReducedMapCoeffs& coeffs, std::span<const double> log_x,
                          std::span<double> out) {
#if defined(IVTREE_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return avx2::reduced_log_residual(coeffs, log_x, out);
#endif
  scalar::reduced_log_residual(coeffs, log_x, out);
}

double log_sum_exp(std::span<const double> values) {
#if defined(IVTREE_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return avx2::log_sum_exp(values);
#endif
  return scalar::log_sum_exp(values);
}

double pairwise_sum(std::span<const double> values) {
#if defined(IVTREE_HAVE_AVX2)
  if (active_backend() == Backend::Avx2) return avx2::pairwise_sum(values);
#endif
  return scalar::pairwise_sum(values);
}

}  // namespace ivtree::kernels
