#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "pdmp/memorization.hpp"
#include "pdmp/oracle.hpp"
#include "pdmp/selfcheck.hpp"
#include "pdmp/stats.hpp"
#include "pdmp/systems.hpp"

using namespace pdmp;

TEST(Memorization, ConstantRateTruncatedExponential) {
  const double lambda = 0.3;
  const double dt = 4.0;
  const ColdStandbyModel m({lambda, 10.0});
  const auto ext = preponderantExtension(m, m.initialState(), dt);
  EXPECT_NEAR(ext.probability, std::exp(-lambda * dt), 1e-15);
  RandomStream rng(1);
  std::vector<double> taus(20000);
  for (auto& t : taus) t = sampleDifferentiationTime(m, ext.segment(), ext.record(), rng).tau;
  const double norm = 1.0 - std::exp(-lambda * dt);
  const double d = stats::ksDistance(taus, [&](double t) { return (1.0 - std::exp(-lambda * t)) / norm; });
  EXPECT_LT(d, 0.012);
}

TEST(Memorization, BoundaryJumpCarriesTheKernelGap) {
  ClockModel clock({0.2, 5.0, 0.9, 10.0});
  const auto ext = preponderantExtension(clock, clock.initialState(), 7.0);
  ASSERT_EQ(ext.segment().jumps.size(), 1u);
  const double v = std::exp(-1.0) * 0.9 * std::exp(-0.4);
  EXPECT_NEAR(ext.probability, v, 1e-12);
  const double gap = std::exp(-1.0) * 0.1 / (1.0 - v);
  RandomStream rng(2);
  const std::size_t trials = 20000;
  std::size_t atJump = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto d = sampleDifferentiationTime(clock, ext.segment(), ext.record(), rng);
    if (d.atBoundaryJump) {
      ++atJump;
      EXPECT_DOUBLE_EQ(d.tau, 5.0);
    }
  }
  EXPECT_TRUE(stats::withinBinomial(atJump, trials, gap)) << atJump;
}

TEST(Memorization, InverseIsMonotone) {
  const MemorizationInstance inst = memorizationInstance();
  const HeatedRoomModel m(inst.params);
  const auto ext = preponderantExtension(m, inst.start, inst.dt);
  const double p = ext.probability;
  double last = kInfinity;
  for (int i = 0; i <= 400; ++i) {
    const double u = p + (1.0 - p) * (i + 0.5) / 401.0;
    const double tau = differentiationTimeAt(m, ext.segment(), ext.record(), u).tau;
    EXPECT_LE(tau, last + 1e-9);
    EXPECT_GE(tau, 0.0);
    EXPECT_LE(tau, inst.dt);
    last = tau;
  }
}

TEST(Memorization, AvoidedBoundaryArrivalIsExcluded) {
  ClockModel clock({0.2, 5.0, 0.9, 10.0});
  const auto ext = preponderantExtension(clock, clock.initialState(), 7.0);
  RandomStream rng(3);
  for (int i = 0; i < 5000; ++i) {
    const auto out = sampleAvoidingExtension(clock, ext, rng, {true, false});
    const auto& jumps = out.skeleton->jumps;
    ASSERT_FALSE(jumps.empty());
    if (jumps[0].forced && jumps[0].arrival.m[0] != Status::Failed) {
      // Nominal arrival kept: the departure happens after the boundary jump.
      EXPECT_GE(jumps.size(), 2u);
    } else if (jumps[0].forced) {
      EXPECT_TRUE(out.failed);
    }
  }
}

TEST(Memorization, AvoidingDrawsNeverFollowTheSegment) {
  const MemorizationInstance inst = memorizationInstance();
  const HeatedRoomModel m(inst.params);
  const auto ext = preponderantExtension(m, inst.start, inst.dt);
  RandomStream rng(4);
  for (int i = 0; i < 5000; ++i) {
    const auto out = sampleAvoidingExtension(m, ext, rng, {true, false});
    ASSERT_FALSE(sameSkeleton(*out.skeleton, ext.segment()));
    EXPECT_EQ(out.jumpCount, out.skeleton->jumps.size());
  }
}

TEST(Memorization, MatchesRejection) {
  const MemorizationInstance inst = memorizationInstance();
  const HeatedRoomModel m(inst.params);
  const auto ext = preponderantExtension(m, inst.start, inst.dt);
  RandomStream a(5);
  RandomStream b(6);
  const std::size_t n = 3000;
  std::vector<double> memo(n);
  std::vector<double> reject(n);
  for (std::size_t i = 0; i < n; ++i) {
    memo[i] = sampleDifferentiationTime(m, ext.segment(), ext.record(), a).tau;
    const auto r = rejectionExtend(m, inst.start, inst.dt, ext.segment(), b);
    reject[i] = differentiationTimeOf(ext.segment(), *r.outcome.skeleton);
  }
  const double d = stats::ksDistance(memo, reject);
  EXPECT_GT(stats::ksTwoSamplePValue(d, n, n), 0.001) << d;
}

TEST(Memorization, MixtureReconstructsTheUnconditionalLaw) {
  const MemorizationInstance inst = memorizationInstance();
  const HeatedRoomModel m(inst.params);
  const auto ext = preponderantExtension(m, inst.start, inst.dt);
  const double v = ext.probability;

  std::map<std::size_t, double> mixture;
  mixture[ext.outcome.jumpCount] += v;
  RandomStream rng(7);
  const std::size_t avoiding = 80000;
  for (std::size_t i = 0; i < avoiding; ++i)
    mixture[sampleAvoidingExtension(m, ext, rng).jumpCount] += (1.0 - v) / avoiding;

  std::map<std::size_t, double> direct;
  RandomStream rng2(8);
  const std::size_t trials = 20000;
  for (std::size_t i = 0; i < trials; ++i) direct[simulate(m, inst.start, inst.dt, rng2).jumpCount] += 1.0;

  // Pool sparse cells into the last one.
  std::vector<double> observed;
  std::vector<double> expected;
  double restObs = 0.0;
  double restExp = 0.0;
  for (const auto& [count, prob] : mixture) {
    if (prob * trials >= 20.0) {
      observed.push_back(direct[count]);
      expected.push_back(prob);
    } else {
      restObs += direct[count];
      restExp += prob;
    }
  }
  for (const auto& [count, hits] : direct)
    if (!mixture.count(count)) restObs += hits;
  if (restExp > 0.0) {
    observed.push_back(restObs);
    expected.push_back(restExp);
  }
  EXPECT_GT(stats::chiSquarePValue(observed, expected), 0.001);
}

TEST(Memorization, CertainSegmentIsDegenerate) {
  ClockModel clock({0.0, 5.0, 1.0, 10.0});
  const auto ext = preponderantExtension(clock, clock.initialState(), 7.0);
  EXPECT_EQ(ext.probability, 1.0);
  RandomStream rng(9);
  EXPECT_THROW(sampleDifferentiationTime(clock, ext.segment(), ext.record(), rng), DegenerateRecordError);
}

TEST(Memorization, RejectsNonPreponderantRecords) {
  const HeatedRoomModel m({});
  RandomStream rng(10);
  for (int i = 0; i < 10000; ++i) {
    const auto [skel, rec] = simulateRecorded(m, m.initialState(), 150.0, rng);
    if (rec.preponderant) continue;
    EXPECT_THROW(differentiationTimeAt(m, skel, rec, 0.5), std::invalid_argument);
    return;
  }
  GTEST_SKIP() << "no spontaneous jump observed";
}
