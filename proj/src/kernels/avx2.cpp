// AVX2+FMA variants. Every function carries a target attribute instead of
// compiling the translation unit with -mavx2, so no AVX2 code leaks into
// inline functions shared with the scalar build.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ivtree/kernels.hpp"

#define IVTREE_AVX2 __attribute__((target("avx2,fma")))

namespace ivtree::kernels::avx2 {

namespace {

// Cephes rational approximations, the same ones the scalar libm family grew
// out of. exp is only needed on (-inf, 0] and log on positive normals.

IVTREE_AVX2 inline __m256d exp_nonpositive_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(0.693145751953125);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lo);

  __m256d n = _mm256_floor_pd(_mm256_fmadd_pd(x, log2e, _mm256_set1_pd(0.5)));
  x = _mm256_fnmadd_pd(n, c1, x);
  x = _mm256_fnmadd_pd(n, c2, x);

  const __m256d x2 = _mm256_mul_pd(x, x);
  __m256d px = _mm256_set1_pd(1.26177193074810590878e-4);
  px = _mm256_fmadd_pd(px, x2, _mm256_set1_pd(3.02994407707441961300e-2));
  px = _mm256_fmadd_pd(px, x2, _mm256_set1_pd(9.99999999999999999910e-1));
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_set1_pd(3.00198505138664455042e-6);
  qx = _mm256_fmadd_pd(qx, x2, _mm256_set1_pd(2.52448340349684104192e-3));
  qx = _mm256_fmadd_pd(qx, x2, _mm256_set1_pd(2.27265548208155028766e-1));
  qx = _mm256_fmadd_pd(qx, x2, _mm256_set1_pd(2.00000000000000000009e0));
  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  // 2^n for n in [-1022, 0]: n + 1023 placed in the exponent field.
  const __m128i n32 = _mm256_cvtpd_epi32(n);
  __m256i e = _mm256_cvtepi32_epi64(n32);
  e = _mm256_add_epi64(e, _mm256_set1_epi64x(1023));
  e = _mm256_slli_epi64(e, 52);
  r = _mm256_mul_pd(r, _mm256_castsi256_pd(e));
  return _mm256_andnot_pd(underflow, r);
}

IVTREE_AVX2 inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  // Unbiased exponent for a mantissa in [0.5, 1).
  const __m256i raw_exp = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(raw_exp, _mm256_castpd_si256(magic))), magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, mant_mask), _mm256_castpd_si256(_mm256_set1_pd(0.5))));

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d small = _mm256_cmp_pd(m, _mm256_set1_pd(0.70710678118654752440), _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
  __m256d z = _mm256_add_pd(_mm256_sub_pd(m, one), _mm256_and_pd(small, m));

  const __m256d z2 = _mm256_mul_pd(z, z);
  __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(4.97494994976747001425e-1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(4.70579119878881725854e0));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.44989225341610930846e1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.79368678507819816313e1));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(7.70838733755885391666e0));
  __m256d q = _mm256_add_pd(z, _mm256_set1_pd(1.12873587189167450590e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(4.52279145837532221105e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(8.29875266912776603211e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(7.11544750618563894466e1));
  q = _mm256_fmadd_pd(q, z, _mm256_set1_pd(2.31251620126765340583e1));

  __m256d y = _mm256_mul_pd(_mm256_mul_pd(z, z2), _mm256_div_pd(p, q));
  y = _mm256_fmadd_pd(e, _mm256_set1_pd(-2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z2, y);
  __m256d out = _mm256_add_pd(z, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), out);
}

// log(1 + y) for y in [0, 1], with the usual rounding correction of 1 + y.
IVTREE_AVX2 inline __m256d log1p_unit_pd(__m256d y) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d u = _mm256_add_pd(one, y);
  const __m256d corr = _mm256_div_pd(_mm256_sub_pd(_mm256_sub_pd(u, one), y), u);
  return _mm256_sub_pd(log_pd(u), corr);
}

IVTREE_AVX2 inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// log(e^a + e^b) for finite a, b.
IVTREE_AVX2 inline __m256d log_add_pd(__m256d a, __m256d b) {
  const __m256d hi = _mm256_max_pd(a, b);
  const __m256d gap = _mm256_sub_pd(_mm256_setzero_pd(), abs_pd(_mm256_sub_pd(a, b)));
  return _mm256_add_pd(hi, log1p_unit_pd(exp_nonpositive_pd(gap)));
}

IVTREE_AVX2 double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

constexpr std::size_t kLeaf = 32;

}  // namespace

IVTREE_AVX2 void exp_nonpositive(std::span<const double> x, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, exp_nonpositive_pd(_mm256_loadu_pd(x.data() + i)));
  }
  if (i < x.size()) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    std::copy(x.begin() + i, x.end(), buf);
    _mm256_store_pd(buf, exp_nonpositive_pd(_mm256_load_pd(buf)));
    std::copy(buf, buf + (x.size() - i), out.begin() + i);
  }
}

IVTREE_AVX2 void log(std::span<const double> x, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, log_pd(_mm256_loadu_pd(x.data() + i)));
  }
  if (i < x.size()) {
    alignas(32) double buf[4] = {1.0, 1.0, 1.0, 1.0};
    std::copy(x.begin() + i, x.end(), buf);
    _mm256_store_pd(buf, log_pd(_mm256_load_pd(buf)));
    std::copy(buf, buf + (x.size() - i), out.begin() + i);
  }
}

IVTREE_AVX2 void reduced_log_residual(const ReducedMapCoeffs& coeffs, std::span<const double> log_x,
                                      std::span<double> out) {
  const __m256d lc = _mm256_set1_pd(coeffs.log_c);
  const __m256d ld = _mm256_set1_pd(coeffs.log_d);
  const __m256d lcd = _mm256_set1_pd(coeffs.log_c + coeffs.log_d);
  const __m256d expo = _mm256_set1_pd(coeffs.exponent);
  const __m256d power = _mm256_set1_pd(coeffs.power);
  const __m256d zero = _mm256_setzero_pd();

  auto body = [&](__m256d l) IVTREE_AVX2 {
    const __m256d t = _mm256_fmadd_pd(power, l, lc);
    const __m256d num = log_add_pd(zero, _mm256_fmadd_pd(power, l, lcd));
    const __m256d den = log_add_pd(ld, t);
    return _mm256_fmsub_pd(expo, _mm256_sub_pd(num, den), l);
  };

  std::size_t i = 0;
  for (; i + 4 <= log_x.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, body(_mm256_loadu_pd(log_x.data() + i)));
  }
  if (i < log_x.size()) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    std::copy(log_x.begin() + i, log_x.end(), buf);
    _mm256_store_pd(buf, body(_mm256_load_pd(buf)));
    std::copy(buf, buf + (log_x.size() - i), out.begin() + i);
  }
}

IVTREE_AVX2 double pairwise_sum(std::span<const double> values) {
  if (values.size() <= kLeaf) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= values.size(); i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(values.data() + i));
    double s = hsum(acc);
    for (; i < values.size(); ++i) s += values[i];
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

IVTREE_AVX2 double log_sum_exp(std::span<const double> values) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  if (values.empty()) return neg_inf;
  const double hi = *std::max_element(values.begin(), values.end());
  if (hi == neg_inf) return hi;
  std::vector<double> shifted(values.size());
  const __m256d vhi = _mm256_set1_pd(hi);
  std::size_t i = 0;
  for (; i + 4 <= values.size(); i += 4) {
    const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(values.data() + i), vhi);
    _mm256_storeu_pd(shifted.data() + i, exp_nonpositive_pd(v));
  }
  if (i < values.size()) {
    alignas(32) double buf[4] = {neg_inf, neg_inf, neg_inf, neg_inf};
    for (std::size_t j = i; j < values.size(); ++j) buf[j - i] = values[j] - hi;
    // -inf lanes clamp to -708 and are then masked to zero.
    _mm256_store_pd(buf, exp_nonpositive_pd(_mm256_load_pd(buf)));
    std::copy(buf, buf + (values.size() - i), shifted.begin() + i);
  }
  return hi + std::log(pairwise_sum(shifted));
}

}  // namespace ivtree::kernels::avx2
