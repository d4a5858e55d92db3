#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace pdmp::stats {

double mean(const std::vector<double>& v);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(const std::vector<double>& v);
double standardError(const std::vector<double>& v);

/// Kolmogorov-Smirnov distance between a sample and a continuous cdf.
double ksDistance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double ksDistance(std::vector<double> a, std::vector<double> b);

/// Asymptotic p-value of a two-sample KS distance.
double ksTwoSamplePValue(double d, std::size_t n, std::size_t m);

/// |hits/trials - p| within `sigmas` binomial standard deviations.
bool withinBinomial(std::size_t hits, std::size_t trials, double p, double sigmas = 3.0);

/// Pearson goodness-of-fit p-value of observed counts against cell
/// probabilities.
double chiSquarePValue(const std::vector<double>& observed, const std::vector<double>& probabilities);

struct VarianceRatio {
  double ratio = 0.0;    // var(a) / var(b)
  double upper95 = 0.0;  // one-sided 95% bootstrap upper bound
};

/// Bootstrap of var(a)/var(b), resampling each sample independently.
VarianceRatio bootstrapVarianceRatio(const std::vector<double>& a, const std::vector<double>& b,
                                     std::size_t resamples, std::uint64_t seed);

}  // namespace pdmp::stats
