#include "pdmp/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

#include "pdmp/random.hpp"

namespace pdmp::stats {

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double standardError(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::sqrt(variance(v) / static_cast<double>(v.size()));
}

double ksDistance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ksDistance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ksTwoSamplePValue(double d, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  if (lambda < 1e-3) return 1.0;
  double q = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    q += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

bool withinBinomial(std::size_t hits, std::size_t trials, double p, double sigmas) {
  const double m = static_cast<double>(trials);
  const double sd = std::sqrt(p * (1.0 - p) / m);
  return std::abs(static_cast<double>(hits) / m - p) <= sigmas * sd;
}

double chiSquarePValue(const std::vector<double>& observed, const std::vector<double>& probabilities) {
  if (observed.size() != probabilities.size() || observed.size() < 2)
    throw std::invalid_argument("chiSquarePValue: need matching cell vectors of size >= 2");
  double total = 0.0;
  for (double o : observed) total += o;
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * probabilities[i];
    if (!(e > 0.0)) throw std::invalid_argument("chiSquarePValue: empty expected cell");
    stat += (observed[i] - e) * (observed[i] - e) / e;
  }
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

VarianceRatio bootstrapVarianceRatio(const std::vector<double>& a, const std::vector<double>& b,
                                     std::size_t resamples, std::uint64_t seed) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("bootstrapVarianceRatio: need two samples of size >= 2");
  VarianceRatio out;
  const double vb = variance(b);
  out.ratio = vb > 0.0 ? variance(a) / vb : INFINITY;
  RandomStream rng(seed, StreamDomain::Test, 0, 0);
  std::vector<double> ratios;
  ratios.reserve(resamples);
  std::vector<double> ra(a.size());
  std::vector<double> rb(b.size());
  for (std::size_t r = 0; r < resamples; ++r) {
    for (auto& x : ra) x = a[static_cast<std::size_t>(rng.uniform() * static_cast<double>(a.size()))];
    for (auto& x : rb) x = b[static_cast<std::size_t>(rng.uniform() * static_cast<double>(b.size()))];
    const double den = variance(rb);
    ratios.push_back(den > 0.0 ? variance(ra) / den : INFINITY);
  }
  std::sort(ratios.begin(), ratios.end());
  const auto idx = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(resamples))) - 1;
  out.upper95 = ratios[std::min(idx, ratios.size() - 1)];
  return out;
}

}  // namespace pdmp::stats
