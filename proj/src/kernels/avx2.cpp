#include <immintrin.h>

#include "pdmp/kernels.hpp"

namespace pdmp::kernels::avx2 {

namespace {
// Lanes (0,1,2,3) reduced as (0+2)+(1+3), matching the scalar reference.
double horizontal(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}
}  // namespace

double sum(const double* v, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
  double total = horizontal(acc);
  for (; i < n; ++i) total += v[i];
  return total;
}

ProductMoments productMoments(const double* w, const double* g, std::size_t n) {
  __m256d s = _mm256_setzero_pd();
  __m256d q = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(g + i));
    s = _mm256_add_pd(s, p);
    // No FMA here: keeps the rounding of the scalar reference.
    q = _mm256_add_pd(q, _mm256_mul_pd(p, p));
  }
  ProductMoments m{horizontal(s), horizontal(q)};
  for (; i < n; ++i) {
    const double p = w[i] * g[i];
    m.sum += p;
    m.sumSq += p * p;
  }
  return m;
}

void scaledProducts(const double* w, const double* g, double scale, double* out, std::size_t n) {
  const __m256d k = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(g + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(p, k));
  }
  for (; i < n; ++i) out[i] = w[i] * g[i] * scale;
}

}  // namespace pdmp::kernels::avx2
