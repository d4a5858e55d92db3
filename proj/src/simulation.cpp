#include "pdmp/simulation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pdmp {

namespace {

constexpr std::size_t kMaxJumpsPerSegment = 10'000'000;

void checkWithinFlow(const PdmpModel& model, const State& z, double dt, const char* what) {
  if (dt < 0.0) throw std::domain_error(std::string(what) + ": negative duration");
  const double ts = model.boundaryHitTime(z);
  if (dt > ts * (1.0 + 1e-12) + 1e-12) {
    std::ostringstream os;
    os << what << ": duration " << dt << " exceeds the boundary-hit time " << ts << " of " << describe(z);
    throw std::domain_error(os.str());
  }
}

void requireOpenRegion(const PdmpModel& model, const State& z) {
  if (!(model.boundaryHitTime(z) > 0.0))
    throw ModelError("state " + describe(z) + " lies on the boundary of its mode's region");
}

const Transition& nominalEntry(const TransitionTable& table, const State& departure) {
  const Transition* found = nullptr;
  for (const auto& e : table.entries) {
    if (!e.nominal) continue;
    if (found) throw ModelError("boundary kernel at " + describe(departure) + " has several nominal entries");
    found = &e;
  }
  if (!found || !(found->probability > 0.0))
    throw ModelError("boundary kernel at " + describe(departure) + " gives no mass to the nominal branch");
  return *found;
}

void noteFailure(SegmentOutcome& out, double time) {
  if (!out.failed) {
    out.failed = true;
    out.failureTime = time;
  }
}

}  // namespace

State flowAdvance(const PdmpModel& model, const State& z, double dt) {
  checkWithinFlow(model, z, dt, "flowAdvance");
  if (dt == 0.0) return z;
  return model.flow(z, dt);
}

double cumulativeRate(const PdmpModel& model, const State& z, double t) {
  checkWithinFlow(model, z, t, "cumulativeRate");
  if (t == 0.0) return 0.0;
  return model.cumulativeRate(z, t);
}

double invertCumulativeRate(const PdmpModel& model, const State& z, double target, double upper) {
  double lo = 0.0;
  double hi = upper;
  for (int i = 0; i < SolverTolerances::kMaxBisection && hi - lo > SolverTolerances::kJumpTimeTol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (model.cumulativeRate(z, mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

JumpTime sampleJumpTime(const PdmpModel& model, const State& z, RandomStream& rng) {
  requireOpenRegion(model, z);
  const double target = -std::log(rng.uniform());
  const double ts = model.boundaryHitTime(z);
  if (std::isfinite(ts)) {
    if (target >= model.cumulativeRate(z, ts)) return {ts, true};
    return {invertCumulativeRate(model, z, target, ts), false};
  }
  double hi = 1.0;
  while (model.cumulativeRate(z, hi) < target) {
    hi *= 2.0;
    if (hi > 1e15)
      throw ModelError("no jump reachable from " + describe(z) + ": rate vanishes and no boundary is hit");
  }
  return {invertCumulativeRate(model, z, target, hi), false};
}

TransitionTable jumpDistribution(const PdmpModel& model, const State& zMinus) {
  if (model.boundaryHitTime(zMinus) <= 0.0) return model.boundaryKernel(zMinus);
  return model.interiorKernel(zMinus);
}

const Transition& drawTransition(const TransitionTable& table, double u) {
  if (table.entries.empty()) throw ModelError("empty transition table");
  const double target = u * table.totalMass();
  double acc = 0.0;
  const Transition* last = nullptr;
  for (const auto& e : table.entries) {
    if (!(e.probability > 0.0)) continue;
    acc += e.probability;
    last = &e;
    if (target < acc) return e;
  }
  if (!last) throw ModelError("transition table has no positive entry");
  return *last;
}

std::string validateTable(const TransitionTable& table, const State& departure) {
  std::ostringstream os;
  os.precision(17);
  double sum = 0.0;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    const auto& e = table.entries[i];
    if (!(e.probability >= 0.0 && e.probability <= 1.0)) {
      os << "probability " << e.probability << " out of [0,1] at " << describe(departure);
      return os.str();
    }
    sum += e.probability;
    if (sameState(e.arrival, departure, SolverTolerances::kStateTol)) {
      os << "kernel at " << describe(departure) << " jumps onto its departure state";
      return os.str();
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (sameState(e.arrival, table.entries[j].arrival, SolverTolerances::kStateTol)) {
        os << "duplicate arrival " << describe(e.arrival) << " in kernel at " << describe(departure);
        return os.str();
      }
    }
  }
  if (std::abs(sum - 1.0) > SolverTolerances::kKernelSumTol) {
    os << "kernel at " << describe(departure) << " sums to " << sum;
    return os.str();
  }
  return {};
}

namespace detail {

// Shared by simulate() and the continuation step of the memorization
// sampler; accepts duration == 0.
SegmentOutcome runSegment(const PdmpModel& model, const State& z, double duration, RandomStream& rng,
                          SimulateOptions options) {
  requireOpenRegion(model, z);
  SegmentOutcome out;
  if (options.recordSkeleton) out.skeleton = TrajectorySkeleton{z, duration, {}};
  if (options.recordSurvival) out.survival = SurvivalRecord{};
  if (model.isCritical(z)) noteFailure(out, 0.0);

  State cur = z;
  double t = 0.0;
  double logSurvival = 0.0;
  bool preponderant = true;

  for (std::size_t guard = 0;; ++guard) {
    if (guard > kMaxJumpsPerSegment) throw ModelError("jump count explosion from " + describe(z));
    const double remaining = std::max(0.0, duration - t);
    const double ts = model.boundaryHitTime(cur);
    const double window = std::min(ts, remaining);
    const double target = -std::log(rng.uniform());
    const double windowRate = window > 0.0 ? model.cumulativeRate(cur, window) : 0.0;

    double dt;
    bool jump = true;
    bool forced = false;
    if (target < windowRate) {
      dt = invertCumulativeRate(model, cur, target, window);
    } else if (ts <= remaining) {
      dt = ts;
      forced = true;
    } else {
      dt = remaining;
      jump = false;
    }

    if (!out.failed) {
      const double c = model.criticalHitTime(cur, dt);
      if (c <= dt) noteFailure(out, t + c);
    }

    if (!jump) {
      if (preponderant) logSurvival -= windowRate;
      if (dt > 0.0) cur = model.flow(cur, dt);
      break;
    }

    const State departure = dt > 0.0 ? model.flow(cur, dt) : cur;
    const TransitionTable table = forced ? model.boundaryKernel(departure) : model.interiorKernel(departure);
    const Transition& chosen = drawTransition(table, rng.uniform());
    t += dt;

    if (preponderant) {
      if (forced) {
        logSurvival -= windowRate;
        const double before = std::exp(logSurvival);
        logSurvival += std::log(chosen.probability);
        if (out.survival) out.survival->breakpoints.push_back({t, before, std::exp(logSurvival)});
      } else {
        logSurvival -= target;
        preponderant = false;
      }
    }
    if (out.skeleton) out.skeleton->jumps.push_back({t, departure, chosen.arrival, forced});
    ++out.jumpCount;
    cur = chosen.arrival;
    if (!out.failed && model.isCritical(cur)) noteFailure(out, t);
    if (t >= duration) break;
  }

  out.end = cur;
  if (out.survival) {
    out.survival->terminal = std::exp(logSurvival);
    out.survival->preponderant = preponderant;
  }
  return out;
}

}  // namespace detail

SegmentOutcome simulate(const PdmpModel& model, const State& z, double horizon, RandomStream& rng,
                        SimulateOptions options) {
  if (!(horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
  return detail::runSegment(model, z, horizon, rng, options);
}

std::pair<TrajectorySkeleton, SurvivalRecord> simulateRecorded(const PdmpModel& model, const State& z,
                                                               double horizon, RandomStream& rng) {
  auto out = simulate(model, z, horizon, rng, {true, true});
  return {std::move(*out.skeleton), std::move(*out.survival)};
}

PreponderantExtension preponderantExtension(const PdmpModel& model, const State& z, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("preponderantExtension: duration must be positive");
  requireOpenRegion(model, z);

  PreponderantExtension ext;
  SegmentOutcome& out = ext.outcome;
  out.skeleton = TrajectorySkeleton{z, dt, {}};
  out.survival = SurvivalRecord{};
  if (model.isCritical(z)) noteFailure(out, 0.0);

  State cur = z;
  double t = 0.0;
  double logV = 0.0;
  for (std::size_t guard = 0;; ++guard) {
    if (guard > kMaxJumpsPerSegment) throw ModelError("jump count explosion from " + describe(z));
    const double remaining = std::max(0.0, dt - t);
    const double ts = model.boundaryHitTime(cur);
    if (ts <= remaining) {
      const double rate = model.cumulativeRate(cur, ts);
      if (!out.failed) {
        const double c = model.criticalHitTime(cur, ts);
        if (c <= ts) noteFailure(out, t + c);
      }
      const State departure = model.flow(cur, ts);
      const TransitionTable table = model.boundaryKernel(departure);
      const Transition& nominal = nominalEntry(table, departure);
      logV -= rate;
      const double before = std::exp(logV);
      logV += std::log(nominal.probability);
      t += ts;
      out.survival->breakpoints.push_back({t, before, std::exp(logV)});
      out.skeleton->jumps.push_back({t, departure, nominal.arrival, true});
      ++out.jumpCount;
      cur = nominal.arrival;
      if (!out.failed && model.isCritical(cur)) noteFailure(out, t);
      if (t >= dt) break;
    } else {
      const double rate = remaining > 0.0 ? model.cumulativeRate(cur, remaining) : 0.0;
      if (!out.failed) {
        const double c = model.criticalHitTime(cur, remaining);
        if (c <= remaining) noteFailure(out, t + c);
      }
      logV -= rate;
      if (remaining > 0.0) cur = model.flow(cur, remaining);
      break;
    }
  }
  out.end = cur;
  out.survival->terminal = std::exp(logV);
  ext.logProbability = logV;
  ext.probability = out.survival->terminal;
  return ext;
}

State settleBoundaryState(const PdmpModel& model, const State& z, RandomStream& rng) {
  State cur = z;
  for (int guard = 0; model.boundaryHitTime(cur) <= 0.0; ++guard) {
    if (guard > 1000) throw ModelError("boundary cascade does not terminate from " + describe(z));
    cur = drawTransition(model.boundaryKernel(cur), rng.uniform()).arrival;
  }
  return cur;
}

State stateAt(const PdmpModel& model, const TrajectorySkeleton& skeleton, double t) {
  State start = skeleton.initial;
  double startTime = 0.0;
  for (const auto& j : skeleton.jumps) {
    if (j.time > t) break;
    start = j.arrival;
    startTime = j.time;
  }
  const double dt = t - startTime;
  return dt > 0.0 ? model.flow(start, dt) : start;
}

bool enteredCriticalBy(const PdmpModel& model, const TrajectorySkeleton& skeleton, double t) {
  State start = skeleton.initial;
  double startTime = 0.0;
  for (const auto& j : skeleton.jumps) {
    if (j.time > t) break;
    if (model.criticalHitTime(start, j.time - startTime) <= j.time - startTime) return true;
    start = j.arrival;
    startTime = j.time;
  }
  const double rest = t - startTime;
  return model.criticalHitTime(start, rest) <= rest;
}

SurvivalRecord survivalOf(const PdmpModel& model, const TrajectorySkeleton& skeleton) {
  SurvivalRecord rec;
  State start = skeleton.initial;
  double startTime = 0.0;
  double logS = 0.0;
  for (const auto& j : skeleton.jumps) {
    logS -= model.cumulativeRate(start, j.time - startTime);
    if (!j.forced) {
      rec.preponderant = false;
      rec.terminal = std::exp(logS);
      return rec;
    }
    double k = 0.0;
    for (const auto& e : model.boundaryKernel(j.departure).entries)
      if (sameState(e.arrival, j.arrival, 1e-9)) k = e.probability;
    const double before = std::exp(logS);
    logS += std::log(k);
    rec.breakpoints.push_back({j.time, before, std::exp(logS)});
    start = j.arrival;
    startTime = j.time;
  }
  logS -= model.cumulativeRate(start, skeleton.horizon - startTime);
  rec.terminal = std::exp(logS);
  return rec;
}

}  // namespace pdmp
