#include <gtest/gtest.h>

#include <cmath>

#include "pdmp/oracle.hpp"
#include "pdmp/samplers.hpp"
#include "pdmp/stats.hpp"
#include "pdmp/systems.hpp"

using namespace pdmp;

TEST(Oracle, RejectionTriesAreGeometric) {
  const ColdStandbyModel m({0.1, 10.0});
  const double dt = 5.0;
  const auto ext = preponderantExtension(m, m.initialState(), dt);
  RandomStream rng(1);
  std::vector<double> tries(4000);
  for (auto& t : tries) {
    const auto d = rejectionExtend(m, m.initialState(), dt, ext.segment(), rng);
    EXPECT_FALSE(sameSkeleton(*d.outcome.skeleton, ext.segment()));
    t = static_cast<double>(d.tries);
  }
  const double expected = 1.0 / (1.0 - ext.probability);
  const double sd = std::sqrt(ext.probability) / (1.0 - ext.probability);
  EXPECT_NEAR(stats::mean(tries), expected, 4.0 * sd / std::sqrt(4000.0));
}

TEST(Oracle, RejectionExhaustion) {
  ClockModel clock({0.0, 3.0, 1.0, 10.0});
  const auto ext = preponderantExtension(clock, clock.initialState(), 5.0);
  RandomStream rng(2);
  EXPECT_THROW(rejectionExtend(clock, clock.initialState(), 5.0, ext.segment(), rng, 50), OracleExhaustedError);
}

TEST(Oracle, DifferentiationTimeOfIdenticalDrawThrows) {
  const ColdStandbyModel m({0.1, 10.0});
  const auto ext = preponderantExtension(m, m.initialState(), 2.0);
  EXPECT_THROW(differentiationTimeOf(ext.segment(), ext.segment()), std::invalid_argument);
}

TEST(Oracle, GStarOfUnitObservableIsOne) {
  const ColdStandbyModel m({0.1, 10.0});
  const auto grid = subdivision(10.0, 2);
  const PathSummary at{m.initialState(), false, 5.0};
  const PathSummary prev{m.initialState(), false, 0.0};
  const auto g = nestedGStar(m, [](const PathSummary&) { return 1.0; }, grid, 1, at, prev, {50, 50}, 3);
  EXPECT_NEAR(g.value, 1.0, 1e-12);
}

TEST(Oracle, ColdStandbyGStarMatchesClosedForm) {
  const double lambda = 0.1;
  const double tf = 10.0;
  const ColdStandbyModel m({lambda, tf});
  const auto grid = subdivision(tf, 2);
  const PathSummary at{m.initialState(), false, tf / 2};
  const PathSummary prev{m.initialState(), false, 0.0};
  const auto g = nestedGStar(m, failureIndicator, grid, 1, at, prev, {400, 400}, 4);
  const double exact = coldStandbyGStar(lambda, tf);
  EXPECT_GT(exact, 0.0);
  EXPECT_NEAR(g.value, exact, 3.0 * g.stdError + 1e-12) << g.value << " vs " << exact;
}
