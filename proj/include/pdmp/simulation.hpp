#pragma once

#include <optional>
#include <utility>

#include "pdmp/model.hpp"
#include "pdmp/random.hpp"

namespace pdmp {

/// Tolerances of the numerical inversions. Recorded in experiment manifests.
struct SolverTolerances {
  static constexpr double kJumpTimeTol = 1e-10;     // bisection on the cumulative rate
  static constexpr int kMaxBisection = 200;
  static constexpr double kStateTol = 1e-12;        // structural state comparison
  static constexpr double kKernelSumTol = 1e-12;    // transition table normalization
};

State flowAdvance(const PdmpModel& model, const State& z, double dt);

double cumulativeRate(const PdmpModel& model, const State& z, double t);

struct JumpTime {
  double time = 0.0;
  bool forced = false;
};

/// Draws the time to the next jump from z (inverse transform on the
/// cumulative rate, with an atom at the boundary-hit time).
JumpTime sampleJumpTime(const PdmpModel& model, const State& z, RandomStream& rng);

/// Solves cumulativeRate(z, s) = target for s in [0, upper] by bisection.
/// Requires cumulativeRate(z, upper) >= target.
double invertCumulativeRate(const PdmpModel& model, const State& z, double target, double upper);

/// Kernel of the jump departing from zMinus: the boundary kernel when
/// zMinus is on the boundary of its mode's region, else the interior one.
TransitionTable jumpDistribution(const PdmpModel& model, const State& zMinus);

/// Draws an arrival from a table given a uniform variate in (0, 1).
const Transition& drawTransition(const TransitionTable& table, double u);

/// Checks that a table is a probability law that never returns to `departure`.
/// Returns an empty string when valid, else a diagnostic.
std::string validateTable(const TransitionTable& table, const State& departure);

/// Trajectory piece over [0, duration] with what the estimators need:
/// the end state and whether (and when) the path went through D.
struct SegmentOutcome {
  State end;
  bool failed = false;
  double failureTime = kInfinity;  // relative to the segment start
  std::size_t jumpCount = 0;
  std::optional<TrajectorySkeleton> skeleton;
  std::optional<SurvivalRecord> survival;
};

struct SimulateOptions {
  bool recordSkeleton = false;
  bool recordSurvival = false;
};

/// Exact simulation of the PDMP from z over [0, horizon]. Jumps occurring at
/// exactly `horizon` belong to the trajectory. z must lie in the open region
/// of its mode (see settleBoundaryState()).
SegmentOutcome simulate(const PdmpModel& model, const State& z, double horizon, RandomStream& rng,
                        SimulateOptions options = {});

/// Convenience form that records both the skeleton and the survival record.
std::pair<TrajectorySkeleton, SurvivalRecord> simulateRecorded(const PdmpModel& model, const State& z,
                                                               double horizon, RandomStream& rng);

/// Result of extending a state along its most likely continuation.
struct PreponderantExtension {
  SegmentOutcome outcome;  // skeleton and survival always recorded
  double probability = 1.0;
  double logProbability = 0.0;

  const TrajectorySkeleton& segment() const { return *outcome.skeleton; }
  const SurvivalRecord& record() const { return *outcome.survival; }
};

/// The unique extension of duration dt without spontaneous jumps in which
/// every boundary hit takes the nominal branch, with its exact probability.
PreponderantExtension preponderantExtension(const PdmpModel& model, const State& z, double dt);

/// Replaces a state lying on a boundary by a draw of its boundary kernel,
/// repeatedly, so that the result is a valid starting state.
State settleBoundaryState(const PdmpModel& model, const State& z, RandomStream& rng);

/// State at time t along a recorded skeleton.
State stateAt(const PdmpModel& model, const TrajectorySkeleton& skeleton, double t);

/// Whether the trajectory went through D on [0, t].
bool enteredCriticalBy(const PdmpModel& model, const TrajectorySkeleton& skeleton, double t);

/// Recomputes the survival record of a skeleton from the model. For
/// skeletons containing spontaneous jumps the record stops at the first one.
SurvivalRecord survivalOf(const PdmpModel& model, const TrajectorySkeleton& skeleton);

namespace detail {
/// simulate() without the positivity check on the duration.
SegmentOutcome runSegment(const PdmpModel& model, const State& z, double duration, RandomStream& rng,
                          SimulateOptions options);
}  // namespace detail

}  // namespace pdmp
