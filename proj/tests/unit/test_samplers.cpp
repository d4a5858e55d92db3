#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "pdmp/oracle.hpp"
#include "pdmp/samplers.hpp"
#include "pdmp/stats.hpp"
#include "pdmp/systems.hpp"

using namespace pdmp;

namespace {

MethodConfig config(Method m, std::size_t N, std::size_t n, std::uint64_t seed) {
  MethodConfig c;
  c.method = m;
  c.N = N;
  c.n = n;
  c.seed = seed;
  return c;
}

PotentialSpec uAlphaSpec() {
  PotentialSpec s;
  s.kind = PotentialKind::UAlpha;
  return s;
}

double one(const PathSummary&) { return 1.0; }

}  // namespace

TEST(Ess, Examples) {
  const std::vector<double> w{0.25, 0.25, 0.25, 0.25};
  EXPECT_NEAR(effectiveSampleSize(w, std::vector<double>{1, 1, 1, 1}), 4.0, 1e-12);
  EXPECT_NEAR(effectiveSampleSize(w, std::vector<double>{1, 0, 0, 0}), 1.0, 1e-12);
  EXPECT_NEAR(effectiveSampleSize(w, std::vector<double>{2, 1, 1, 0}), 16.0 / 6.0, 1e-12);
  EXPECT_EQ(effectiveSampleSize(w, std::vector<double>{0, 0, 0, 0}), 0.0);
}

TEST(Multinomial, PointMass) {
  RandomStream rng(1);
  const auto counts = multinomialResample(std::vector<double>{0, 0, 3, 0}, 100, rng);
  EXPECT_EQ(counts[2], 100u);
  EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), 100u);
}

TEST(Multinomial, ZeroWeightsAreNeverSelected) {
  RandomStream rng(2);
  for (int r = 0; r < 200; ++r) {
    const auto counts = multinomialResample(std::vector<double>{0.5, 0.0, 0.5, 0.0}, 50, rng);
    EXPECT_EQ(counts[1], 0u);
    EXPECT_EQ(counts[3], 0u);
  }
}

TEST(Multinomial, MomentsAndGoodnessOfFit) {
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  RandomStream rng(3);
  std::vector<double> total(4, 0.0);
  std::vector<double> first;
  const int reps = 2000;
  const std::size_t N = 50;
  for (int r = 0; r < reps; ++r) {
    const auto c = multinomialResample(w, N, rng);
    for (std::size_t j = 0; j < 4; ++j) total[j] += c[j];
    first.push_back(static_cast<double>(c[0]));
  }
  EXPECT_GT(stats::chiSquarePValue(total, w), 0.001);
  EXPECT_NEAR(stats::mean(first), N * 0.1, 4.0 * std::sqrt(N * 0.1 * 0.9 / reps));
  EXPECT_NEAR(stats::variance(first), N * 0.1 * 0.9, 0.15 * N * 0.1 * 0.9);
}

TEST(Multinomial, RejectsZeroTotal) {
  RandomStream rng(4);
  EXPECT_THROW(multinomialResample(std::vector<double>{0, 0}, 3, rng), std::invalid_argument);
}

TEST(Subdivision, EndsExactlyAtHorizon) {
  const auto g = subdivision(150.0, 7);
  ASSERT_EQ(g.size(), 8u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 150.0);
}

TEST(Samplers, UnitObservableEstimatesOne) {
  const HeatedRoomModel m({});
  for (Method method : {Method::IPS, Method::SMC, Method::IPSM}) {
    const auto r = runEstimator(m, PotentialSpec{}, one, config(method, 500, 5, 3));
    EXPECT_NEAR(r.pHat, 1.0, 1e-9) << toString(method);
    // With selection the estimate of 1 is unbiased but random.
    auto c = config(method, 500, 5, 3);
    c.replications = 20;
    const auto res = replicatedExperiment(m, uAlphaSpec(), one, c);
    EXPECT_NEAR(res.meanPHat, 1.0, 4.0 * std::sqrt(res.empiricalVariance / 20.0) + 1e-9) << toString(method);
  }
}

TEST(Samplers, SingleStepIpsIsMonteCarlo) {
  const ColdStandbyModel m({0.1, 10.0});
  const auto mc = monteCarloEstimate(m, failureIndicator, config(Method::MC, 2000, 1, 17));
  const auto ips = ipsRun(m, uAlphaSpec(), failureIndicator, config(Method::IPS, 2000, 1, 17));
  // Both draw particle j from the same propagation stream; only the
  // summation differs.
  EXPECT_NEAR(mc.pHat, ips.pHat, 1e-12 * mc.pHat);
}

TEST(Samplers, SmcWithoutThresholdNeverResamples) {
  const HeatedRoomModel m({});
  auto c = config(Method::SMC, 1000, 6, 5);
  c.essThreshold = 0.0;
  const auto r = smcRun(m, uAlphaSpec(), failureIndicator, c);
  ASSERT_EQ(r.resampledFlags.size(), 6u);
  for (bool f : r.resampledFlags) EXPECT_FALSE(f);
  for (double s : r.weightSums) EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Samplers, SmcWithFullThresholdAlwaysResamples) {
  const HeatedRoomModel m({});
  auto c = config(Method::SMC, 1000, 6, 5);
  c.essThreshold = 1.0;
  const auto r = smcRun(m, uAlphaSpec(), failureIndicator, c);
  for (bool f : r.resampledFlags) EXPECT_TRUE(f);
  const auto ips = ipsRun(m, uAlphaSpec(), failureIndicator, config(Method::IPS, 1000, 6, 5));
  EXPECT_DOUBLE_EQ(r.pHat, ips.pHat);
}

TEST(Samplers, VanishingPotentialStops) {
  const ColdStandbyModel m({0.1, 10.0});
  PotentialSpec zero;
  zero.kind = PotentialKind::Custom;
  zero.customLogU = [](const PathSummary& s) { return s.time > 0.0 ? -kInfinity : 0.0; };
  for (Method method : {Method::IPS, Method::SMC, Method::IPSM}) {
    const auto r = runEstimator(m, zero, failureIndicator, config(method, 200, 4, 1));
    EXPECT_TRUE(r.stopped) << toString(method);
    EXPECT_EQ(r.pHat, 0.0);
  }
}

TEST(Samplers, IpsmAccounting) {
  const HeatedRoomModel m({});
  const auto c = config(Method::IPSM, 2000, 5, 8);
  const auto r = ipsmRun(m, uAlphaSpec(), failureIndicator, c);
  ASSERT_EQ(r.sampleSizes.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(r.selectedTotals[k], c.N);
    EXPECT_EQ(r.sampleSizes[k], r.clusterSizes[k]);
    EXPECT_GT(r.sampleSizes[k], c.N);
    EXPECT_LE(r.sampleSizes[k], 2 * c.N);
    EXPECT_NEAR(r.weightSums[k], 1.0, 1e-9);
  }
}

TEST(Samplers, IpsmDegenerateClustersKeepAccounting) {
  // No spontaneous jumps and a certain boundary kernel: every cluster is degenerate.
  ClockModel clock({0.0, 3.0, 1.0, 10.0});
  const auto r = ipsmRun(clock, uAlphaSpec(), one, config(Method::IPSM, 100, 4, 2));
  EXPECT_GT(r.degenerateClusters, 0u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(r.sampleSizes[k], r.clusterSizes[k]);
    EXPECT_NEAR(r.weightSums[k], 1.0, 1e-12);
  }
  EXPECT_NEAR(r.pHat, 1.0, 1e-12);
}

TEST(Samplers, UnbiasedOnColdStandby) {
  const double lambda = 0.1;
  const ColdStandbyModel m({lambda, 10.0});
  const double p = coldStandbyExactP(lambda, 10.0);
  for (Method method : {Method::IPS, Method::SMC, Method::IPSM}) {
    auto c = config(method, 1000, 4, 100);
    c.replications = 30;
    const auto res = replicatedExperiment(m, uAlphaSpec(), failureIndicator, c);
    const double se = std::sqrt(res.empiricalVariance / 30.0);
    EXPECT_NEAR(res.meanPHat, p, 4.0 * se + 1e-12) << toString(method);
  }
}

TEST(Samplers, DeterministicAcrossWorkers) {
  const HeatedRoomModel m({});
  auto c = config(Method::IPSM, 1500, 5, 21);
  const auto a = ipsmRun(m, uAlphaSpec(), failureIndicator, c);
  c.workers = 4;
  const auto b = ipsmRun(m, uAlphaSpec(), failureIndicator, c);
  EXPECT_EQ(a.pHat, b.pHat);
  EXPECT_EQ(a.essTrace, b.essTrace);
}

TEST(Samplers, ReplicationSeedsDiffer) {
  const ColdStandbyModel m({0.1, 10.0});
  auto c = config(Method::MC, 500, 1, 4);
  c.replications = 5;
  const auto res = replicatedExperiment(m, uAlphaSpec(), failureIndicator, c);
  ASSERT_EQ(res.reports.size(), 5u);
  for (std::size_t r = 0; r < 5; ++r) EXPECT_EQ(res.reports[r].seed, replicationSeed(4, r));
  EXPECT_GT(res.empiricalVariance, 0.0);
}

TEST(Samplers, ConfigValidation) {
  auto c = config(Method::IPS, 1, 5, 1);
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = config(Method::IPS, 10, 0, 1);
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = config(Method::SMC, 10, 2, 1);
  c.essThreshold = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_THROW(methodFromString("foo"), std::invalid_argument);
  for (Method m : {Method::MC, Method::IPS, Method::SMC, Method::IPSM}) EXPECT_EQ(methodFromString(toString(m)), m);
}
