#include "pdmp/kernels.hpp"

namespace pdmp::kernels::scalar {

// Four interleaved accumulators, the same association as the AVX2 lanes,
// so both paths round identically on the common prefix.
double sum(const double* v, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int l = 0; l < 4; ++l) acc[l] += v[i + l];
  double total = (acc[0] + acc[2]) + (acc[1] + acc[3]);
  for (; i < n; ++i) total += v[i];
  return total;
}

ProductMoments productMoments(const double* w, const double* g, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  double q[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    for (int l = 0; l < 4; ++l) {
      const double p = w[i + l] * g[i + l];
      s[l] += p;
      q[l] += p * p;
    }
  ProductMoments m{(s[0] + s[2]) + (s[1] + s[3]), (q[0] + q[2]) + (q[1] + q[3])};
  for (; i < n; ++i) {
    const double p = w[i] * g[i];
    m.sum += p;
    m.sumSq += p * p;
  }
  return m;
}

void scaledProducts(const double* w, const double* g, double scale, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = w[i] * g[i] * scale;
}

}  // namespace pdmp::kernels::scalar
