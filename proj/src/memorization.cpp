#include "pdmp/memorization.hpp"

#include <cmath>

namespace pdmp {

namespace {

const State& pieceStart(const TrajectorySkeleton& segment, std::size_t k) {
  return k == 0 ? segment.initial : segment.jumps[k - 1].arrival;
}

double pieceStartTime(const TrajectorySkeleton& segment, std::size_t k) {
  return k == 0 ? 0.0 : segment.jumps[k - 1].time;
}

}  // namespace

DifferentiationDraw differentiationTimeAt(const PdmpModel& model, const TrajectorySkeleton& segment,
                                          const SurvivalRecord& record, double uTilde) {
  if (!record.preponderant) throw std::invalid_argument("memorization requires a preponderant record");
  if (record.breakpoints.size() != segment.jumps.size())
    throw std::invalid_argument("survival record does not match its segment");
  if (!(record.terminal < 1.0)) throw DegenerateRecordError("preponderant segment has probability 1");

  // F~ starts at 1, decreases continuously on each inter-jump interval and
  // drops at each boundary jump. Walk the pieces until Utilde is crossed.
  double post = 1.0;
  const std::size_t jumps = segment.jumps.size();
  for (std::size_t k = 0;; ++k) {
    const bool last = k == jumps;
    const double pre = last ? record.terminal : record.breakpoints[k].before;
    const double start = pieceStartTime(segment, k);
    const double end = last ? segment.horizon : segment.jumps[k].time;
    if (uTilde >= pre && pre < post) {
      const double target = std::log(post / uTilde);
      const double len = end - start;
      const double s = invertCumulativeRate(model, pieceStart(segment, k), target, len);
      return {start + std::clamp(s, 0.0, len), false, k, uTilde};
    }
    if (last) {
      // Only reachable when Utilde rounds below the terminal value.
      return {end, false, k, uTilde};
    }
    if (uTilde >= record.breakpoints[k].after) return {end, true, k, uTilde};
    post = record.breakpoints[k].after;
  }
}

DifferentiationDraw sampleDifferentiationTime(const PdmpModel& model, const TrajectorySkeleton& segment,
                                              const SurvivalRecord& record, RandomStream& rng) {
  const double p = record.terminal;
  const double uTilde = p + (1.0 - p) * rng.uniform();
  return differentiationTimeAt(model, segment, record, uTilde);
}

SegmentOutcome sampleAvoidingExtension(const PdmpModel& model, const PreponderantExtension& ext, RandomStream& rng,
                                       SimulateOptions options) {
  const TrajectorySkeleton& segment = ext.segment();
  const SurvivalRecord& record = ext.record();
  const DifferentiationDraw draw = sampleDifferentiationTime(model, segment, record, rng);
  const double tau = draw.tau;
  const std::size_t k = draw.segmentIndex;

  SegmentOutcome out;
  if (options.recordSkeleton) out.skeleton = TrajectorySkeleton{segment.initial, segment.horizon, {}};

  // Shared prefix: pieces 0..k-1 and their jumps, then piece k up to tau.
  for (std::size_t i = 0; i < k; ++i) {
    const double len = segment.jumps[i].time - pieceStartTime(segment, i);
    if (!out.failed) {
      const double c = model.criticalHitTime(pieceStart(segment, i), len);
      if (c <= len) {
        out.failed = true;
        out.failureTime = pieceStartTime(segment, i) + c;
      }
    }
    if (out.skeleton) out.skeleton->jumps.push_back(segment.jumps[i]);
    if (!out.failed && model.isCritical(segment.jumps[i].arrival)) {
      out.failed = true;
      out.failureTime = segment.jumps[i].time;
    }
  }
  out.jumpCount = k;

  const State& start = pieceStart(segment, k);
  const double lead = tau - pieceStartTime(segment, k);
  if (!out.failed) {
    const double c = model.criticalHitTime(start, lead);
    if (c <= lead) {
      out.failed = true;
      out.failureTime = pieceStartTime(segment, k) + c;
    }
  }

  // The differing jump at tau.
  State departure;
  TransitionTable table;
  if (draw.atBoundaryJump) {
    const JumpRecord& avoided = segment.jumps[k];
    departure = avoided.departure;
    for (const auto& e : model.boundaryKernel(departure).entries)
      if (e.probability > 0.0 && !sameState(e.arrival, avoided.arrival, SolverTolerances::kStateTol))
        table.entries.push_back(e);
    const double mass = table.totalMass();
    if (!(mass > 0.0))
      throw DegenerateRecordError("boundary kernel at " + describe(departure) + " only allows the preponderant arrival");
    for (auto& e : table.entries) e.probability /= mass;
  } else {
    departure = lead > 0.0 ? model.flow(start, lead) : start;
    table = model.interiorKernel(departure);
  }
  const Transition& chosen = drawTransition(table, rng.uniform());
  if (out.skeleton) out.skeleton->jumps.push_back({tau, departure, chosen.arrival, draw.atBoundaryJump});
  ++out.jumpCount;
  if (!out.failed && model.isCritical(chosen.arrival)) {
    out.failed = true;
    out.failureTime = tau;
  }

  // Unconditioned continuation.
  const double rest = std::max(0.0, segment.horizon - tau);
  SegmentOutcome tail = detail::runSegment(model, chosen.arrival, rest, rng, {options.recordSkeleton, false});
  out.end = tail.end;
  out.jumpCount += tail.jumpCount;
  if (!out.failed && tail.failed) {
    out.failed = true;
    out.failureTime = tau + tail.failureTime;
  }
  if (out.skeleton)
    for (auto j : tail.skeleton->jumps) {
      j.time += tau;
      out.skeleton->jumps.push_back(j);
    }
  return out;
}

}  // namespace pdmp
