#include <gtest/gtest.h>

#include <cmath>

#include "pdmp/parallel.hpp"
#include "pdmp/random.hpp"
#include "pdmp/stats.hpp"

using namespace pdmp;

TEST(Stats, MeanAndVariance) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(stats::mean(v), 2.5);
  EXPECT_DOUBLE_EQ(stats::variance(v), 5.0 / 3.0);
  EXPECT_EQ(stats::variance({7.0}), 0.0);
}

TEST(Stats, KsOfUniformSample) {
  RandomStream rng(1);
  std::vector<double> u(5000);
  for (auto& x : u) x = rng.uniform();
  EXPECT_LT(stats::ksDistance(u, [](double x) { return x; }), 0.025);
  std::vector<double> w(5000);
  for (auto& x : w) x = rng.uniform();
  const double d = stats::ksDistance(u, w);
  EXPECT_GT(stats::ksTwoSamplePValue(d, u.size(), w.size()), 0.001);
  std::vector<double> shifted = w;
  for (auto& x : shifted) x += 0.1;
  EXPECT_LT(stats::ksTwoSamplePValue(stats::ksDistance(u, shifted), u.size(), w.size()), 1e-6);
}

TEST(Stats, ChiSquare) {
  EXPECT_NEAR(stats::chiSquarePValue({50, 50}, {0.5, 0.5}), 1.0, 1e-12);
  EXPECT_LT(stats::chiSquarePValue({90, 10}, {0.5, 0.5}), 1e-10);
}

TEST(Stats, BootstrapVarianceRatio) {
  RandomStream rng(2);
  std::vector<double> small(40);
  std::vector<double> large(40);
  for (auto& x : small) x = 0.1 * rng.uniform();
  for (auto& x : large) x = rng.uniform();
  const auto r = stats::bootstrapVarianceRatio(small, large, 2000, 5);
  EXPECT_NEAR(r.ratio, stats::variance(small) / stats::variance(large), 1e-15);
  EXPECT_GT(r.upper95, r.ratio);
  EXPECT_LT(r.upper95, 0.05);
}

TEST(Parallel, EveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallelFor(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Parallel, RethrowsWorkerException) {
  EXPECT_THROW(parallelFor(100, 3,
                           [](std::size_t i) {
                             if (i == 57) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}
