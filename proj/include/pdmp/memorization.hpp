#pragma once

#include <stdexcept>

#include "pdmp/simulation.hpp"

namespace pdmp {

/// Raised when a preponderant segment has probability 1, or when a boundary
/// kernel gives all its mass to the preponderant arrival: there is nothing
/// to condition away from.
class DegenerateRecordError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DifferentiationDraw {
  double tau = 0.0;
  bool atBoundaryJump = false;
  std::size_t segmentIndex = 0;  // inter-jump interval, or jump when atBoundaryJump
  double uTilde = 0.0;
};

/// Inverse-transform draw of the time at which a trajectory started where
/// `segment` starts first departs from it, conditioned on departing before
/// the end of the segment. (segment, record) must come from
/// preponderantExtension().
DifferentiationDraw sampleDifferentiationTime(const PdmpModel& model, const TrajectorySkeleton& segment,
                                              const SurvivalRecord& record, RandomStream& rng);

/// Same draw for a given variate Utilde in [terminal, 1).
DifferentiationDraw differentiationTimeAt(const PdmpModel& model, const TrajectorySkeleton& segment,
                                          const SurvivalRecord& record, double uTilde);

/// Draws an extension of duration dt from the start of `ext` conditioned to
/// differ from the preponderant extension, without rejection.
SegmentOutcome sampleAvoidingExtension(const PdmpModel& model, const PreponderantExtension& ext, RandomStream& rng,
                                       SimulateOptions options = {});

}  // namespace pdmp
