#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pdmp/potentials.hpp"
#include "pdmp/simulation.hpp"

namespace pdmp {

class OracleExhaustedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One-component renewal clock used as an analytic test model. The clock x
/// runs at unit speed and resets at every jump; the component toggles
/// between On and Off at a constant rate and is forced to toggle when x
/// reaches `period`, failing on demand with probability 1 - nominalMass.
/// Failed is absorbing and critical.
struct ClockParams {
  double rate = 0.2;
  double period = 5.0;  // may be infinite
  double nominalMass = 1.0;
  double horizon = 10.0;
};

class ClockModel final : public PdmpModel {
 public:
  explicit ClockModel(ClockParams params);

  std::string name() const override { return "clock"; }
  std::size_t componentCount() const override { return 1; }
  std::size_t dimension() const override { return 1; }
  State initialState() const override { return State{Physical{0.0}, Mode{Status::On}}; }
  double horizon() const override { return p_.horizon; }

  State flow(const State& z, double dt) const override { return State{Physical{z.x[0] + dt}, z.m}; }
  double boundaryHitTime(const State& z) const override;
  std::vector<RateEntry> transitionRates(const State& z) const override;
  double cumulativeRate(const State& z, double t) const override;
  TransitionTable boundaryKernel(const State& z) const override;
  bool isCritical(const State& z) const override { return z.m[0] == Status::Failed; }
  double criticalHitTime(const State& z, double) const override { return isCritical(z) ? 0.0 : kInfinity; }

 private:
  ClockParams p_;
};

/// Failure probability of two cold-standby units by time tf.
double coldStandbyExactP(double lambda, double tf);

struct RejectionDraw {
  SegmentOutcome outcome;  // skeleton always recorded
  std::size_t tries = 0;
};

/// Simulates from z over dt until the skeleton differs from `segment`.
RejectionDraw rejectionExtend(const PdmpModel& model, const State& z, double dt, const TrajectorySkeleton& segment,
                              RandomStream& rng, std::size_t maxTries = 10'000'000);

/// Time of the first jump at which `draw` departs from `segment`.
double differentiationTimeOf(const TrajectorySkeleton& segment, const TrajectorySkeleton& draw);

struct NestedBudget {
  std::size_t outer = 100;
  std::size_t inner = 1000;
};

struct GStarEstimate {
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 1.0;
  double stdError = 0.0;
};

/// Nested Monte Carlo estimate of the optimal potential G*_k at the path
/// summary `atK` (time grid[k]), with `atPrevious` the summary at grid[k-1]
/// (ignored for k == 0).
GStarEstimate nestedGStar(const PdmpModel& model, const Observable& h, const std::vector<double>& grid,
                          std::size_t k, const PathSummary& atK, const std::optional<PathSummary>& atPrevious,
                          NestedBudget budget, std::uint64_t seed, std::size_t workers = 1);

/// G*_1 for cold standby with n = 2, both units intact at tf/2.
double coldStandbyGStar(double lambda, double tf);

}  // namespace pdmp
