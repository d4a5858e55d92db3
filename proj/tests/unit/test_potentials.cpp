#include <gtest/gtest.h>

#include <cmath>

#include "pdmp/potentials.hpp"
#include "pdmp/samplers.hpp"
#include "pdmp/simulation.hpp"
#include "pdmp/systems.hpp"

using namespace pdmp;

namespace {

PathSummary summary(double x, Mode m, bool failed = false, double t = 0.0) {
  return {State{Physical{x}, m}, failed, t};
}

PotentialSpec uAlphaSpec(double alpha = 1.1) {
  PotentialSpec s;
  s.kind = PotentialKind::UAlpha;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST(Potentials, WorkingComponents) {
  EXPECT_EQ(workingComponents(State{Physical{0.0}, Mode{Status::On, Status::Off}}), 2);
  EXPECT_EQ(workingComponents(State{Physical{0.0}, Mode{Status::Failed, Status::On}}), 1);
  EXPECT_EQ(workingComponents(State{Physical{0.0}, Mode{Status::Failed, Status::Failed}}), 0);
}

TEST(Potentials, UAlphaValues) {
  const auto spec = uAlphaSpec();
  EXPECT_NEAR(std::exp(logUAlpha(summary(5, {Status::Failed, Status::Failed}), spec)), std::exp(-1.1), 1e-15);
  EXPECT_NEAR(std::exp(logUAlpha(summary(20, {Status::On, Status::Off}), spec)), std::exp(-9.9), 1e-15);
  EXPECT_NEAR(std::exp(logUAlpha(summary(20, {Status::Failed, Status::On}), spec)), std::exp(-4.4), 1e-15);
  EXPECT_EQ(logUAlpha(summary(-1, {Status::Failed, Status::Failed}, true), spec), 0.0);
}

TEST(Potentials, TimeProfile) {
  auto spec = uAlphaSpec();
  spec.lShape = [](double t) { return 1.0 + t; };
  EXPECT_NEAR(logUAlpha(summary(20, {Status::On, Status::Off}, false, 2.0), spec), -9.9 + std::log(3.0), 1e-14);
}

TEST(Potentials, DamExponential) {
  PotentialSpec spec;
  spec.kind = PotentialKind::DamExponential;
  const auto s = potentialStep(summary(0, {Status::On, Status::Off}), 0.0, 0, spec);
  EXPECT_NEAR(std::exp(s.logG), std::exp(-18.0), 1e-22);
  const auto f = potentialStep(summary(10, {Status::Failed, Status::Failed}), -5.0, 3, spec);
  EXPECT_NEAR(f.logG, -1.0, 1e-15);
}

TEST(Potentials, RatioFormTelescopes) {
  const auto spec = uAlphaSpec();
  const HeatedRoomModel m({});
  RandomStream rng(5);
  const std::size_t n = 6;
  const auto grid = subdivision(m.horizon(), n);
  for (int r = 0; r < 50; ++r) {
    const auto [skel, rec] = simulateRecorded(m, m.initialState(), m.horizon(), rng);
    double logProd = 0.0;
    double prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const PathSummary s{stateAt(m, skel, grid[k]), enteredCriticalBy(m, skel, grid[k]), grid[k]};
      const auto step = potentialStep(s, prev, k, spec);
      EXPECT_NEAR(std::exp(step.logG), potentialAtStep(m, skel, k, grid, spec), 1e-12);
      logProd += step.logG;
      prev = step.logU;
    }
    EXPECT_NEAR(std::exp(logProd), uAlpha(m, skel, grid[n - 1], spec), 1e-12);
  }
}

TEST(Potentials, ConstantAndCustomKinds) {
  PotentialSpec c;
  EXPECT_EQ(potentialStep(summary(1, {Status::On}), 0.0, 2, c).logG, 0.0);
  PotentialSpec custom;
  custom.kind = PotentialKind::Custom;
  custom.customLogU = [](const PathSummary& s) { return -s.state.x[0]; };
  const auto a = potentialStep(summary(2, {Status::On}), 0.0, 0, custom);
  const auto b = potentialStep(summary(5, {Status::On}), a.logU, 1, custom);
  EXPECT_EQ(a.logG, -2.0);
  EXPECT_EQ(b.logG, -3.0);
  PotentialSpec broken;
  broken.kind = PotentialKind::Custom;
  EXPECT_THROW(potentialStep(summary(1, {Status::On}), 0.0, 0, broken), std::invalid_argument);
}

TEST(Potentials, KindNamesRoundTrip) {
  for (auto k : {PotentialKind::UAlpha, PotentialKind::DamExponential, PotentialKind::Constant, PotentialKind::Custom})
    EXPECT_EQ(potentialKindFromString(toString(k)), k);
  EXPECT_THROW(potentialKindFromString("nope"), std::invalid_argument);
}

TEST(Potentials, UAlphaRejectsShortTrajectory) {
  const HeatedRoomModel m({});
  RandomStream rng(6);
  const auto [skel, rec] = simulateRecorded(m, m.initialState(), 10.0, rng);
  EXPECT_THROW(uAlpha(m, skel, 20.0, uAlphaSpec()), std::invalid_argument);
}
