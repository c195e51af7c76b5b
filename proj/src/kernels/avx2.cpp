#include "holo/kernels.hpp"

#include <cassert>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#define HOLO_HAVE_X86 1
#else
#define HOLO_HAVE_X86 0
#endif

namespace holo::kernels::avx2 {

#if HOLO_HAVE_X86

// Four points at a time in split re/im registers. Loading two interleaved
// pairs and unpacking gives lanes in order (0, 2, 1, 3); the inverse unpack
// on the way out restores the original order, so no permutes are needed.
__attribute__((target("avx2,fma"))) void partial_fractions(
    std::span<const cplx> z, std::span<const cplx> poles,
    std::span<const cplx> coeffs, std::span<cplx> out) {
  assert(z.size() == out.size() && poles.size() == coeffs.size());
  const auto* zin = reinterpret_cast<const double*>(z.data());
  auto* zout = reinterpret_cast<double*>(out.data());
  const std::size_t n = z.size();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d a = _mm256_loadu_pd(zin + 2 * k);
    const __m256d b = _mm256_loadu_pd(zin + 2 * k + 4);
    const __m256d zr = _mm256_unpacklo_pd(a, b);
    const __m256d zi = _mm256_unpackhi_pd(a, b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    for (std::size_t j = 0; j < poles.size(); ++j) {
      const __m256d dr = _mm256_sub_pd(zr, _mm256_set1_pd(poles[j].real()));
      const __m256d di = _mm256_sub_pd(zi, _mm256_set1_pd(poles[j].imag()));
      const __m256d den = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
      const __m256d cr = _mm256_set1_pd(coeffs[j].real());
      const __m256d ci = _mm256_set1_pd(coeffs[j].imag());
      const __m256d num_re = _mm256_fmadd_pd(cr, dr, _mm256_mul_pd(ci, di));
      const __m256d num_im = _mm256_fmsub_pd(ci, dr, _mm256_mul_pd(cr, di));
      acc_re = _mm256_add_pd(acc_re, _mm256_div_pd(num_re, den));
      acc_im = _mm256_add_pd(acc_im, _mm256_div_pd(num_im, den));
    }
    _mm256_storeu_pd(zout + 2 * k, _mm256_unpacklo_pd(acc_re, acc_im));
    _mm256_storeu_pd(zout + 2 * k + 4, _mm256_unpackhi_pd(acc_re, acc_im));
  }
  if (k < n) {
    scalar::partial_fractions(z.subspan(k), poles, coeffs, out.subspan(k));
  }
}

__attribute__((target("avx2,fma"))) cplx weighted_sum(
    std::span<const double> w, std::span<const cplx> f,
    std::span<const cplx> dz) {
  assert(w.size() == f.size() && f.size() == dz.size());
  const auto* fp = reinterpret_cast<const double*>(f.data());
  const auto* dp = reinterpret_cast<const double*>(dz.data());
  const std::size_t n = w.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const __m256d a = _mm256_loadu_pd(fp + 2 * k);
    const __m256d b = _mm256_loadu_pd(dp + 2 * k);
    const __m256d a_re = _mm256_movedup_pd(a);
    const __m256d a_im = _mm256_permute_pd(a, 0xF);
    const __m256d b_swap = _mm256_permute_pd(b, 0x5);
    // [ar*br - ai*bi, ar*bi + ai*br] per complex lane pair
    const __m256d prod =
        _mm256_fmaddsub_pd(a_re, b, _mm256_mul_pd(a_im, b_swap));
    const __m256d weights = _mm256_set_pd(w[k + 1], w[k + 1], w[k], w[k]);
    acc = _mm256_fmadd_pd(weights, prod, acc);
  }
  const __m128d lo = _mm256_castpd256_pd128(acc);
  const __m128d hi = _mm256_extractf128_pd(acc, 1);
  alignas(16) double pair[2];
  _mm_store_pd(pair, _mm_add_pd(lo, hi));
  cplx total{pair[0], pair[1]};
  if (k < n) {
    total += scalar::weighted_sum(w.subspan(k), f.subspan(k), dz.subspan(k));
  }
  return total;
}

#else

void partial_fractions(std::span<const cplx> z, std::span<const cplx> poles,
                       std::span<const cplx> coeffs, std::span<cplx> out) {
  scalar::partial_fractions(z, poles, coeffs, out);
}

cplx weighted_sum(std::span<const double> w, std::span<const cplx> f,
                  std::span<const cplx> dz) {
  return scalar::weighted_sum(w, f, dz);
}

#endif

}  // namespace holo::kernels::avx2
