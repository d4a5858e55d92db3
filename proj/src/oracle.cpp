#include "pdmp/oracle.hpp"

#include <cmath>

#include "pdmp/parallel.hpp"
#include "pdmp/stats.hpp"

namespace pdmp {

namespace {
constexpr double kThresholdTol = 1e-9;
}

ClockModel::ClockModel(ClockParams params) : p_(params) {
  if (!(p_.rate >= 0.0) || !(p_.period > 0.0) || !(p_.nominalMass > 0.0 && p_.nominalMass <= 1.0) ||
      !(p_.horizon > 0.0))
    throw std::invalid_argument("clock: invalid parameters");
}

double ClockModel::boundaryHitTime(const State& z) const {
  if (isCritical(z) || !std::isfinite(p_.period)) return kInfinity;
  return z.x[0] >= p_.period - kThresholdTol ? 0.0 : p_.period - z.x[0];
}

std::vector<RateEntry> ClockModel::transitionRates(const State& z) const {
  if (isCritical(z) || p_.rate == 0.0) return {};
  const Status other = z.m[0] == Status::On ? Status::Off : Status::On;
  return {{State{Physical{0.0}, Mode{other}}, p_.rate}};
}

double ClockModel::cumulativeRate(const State& z, double t) const {
  if (isCritical(z) || t <= 0.0) return 0.0;
  return p_.rate * t;
}

TransitionTable ClockModel::boundaryKernel(const State& z) const {
  if (isCritical(z) || z.x[0] < p_.period - kThresholdTol) throw ModelError("clock: " + describe(z) + " is not on the boundary");
  const Status other = z.m[0] == Status::On ? Status::Off : Status::On;
  TransitionTable t;
  t.entries.push_back({State{Physical{0.0}, Mode{other}}, p_.nominalMass, true});
  if (p_.nominalMass < 1.0)
    t.entries.push_back({State{Physical{0.0}, Mode{Status::Failed}}, 1.0 - p_.nominalMass, false});
  return t;
}

double coldStandbyExactP(double lambda, double tf) {
  const double a = lambda * tf;
  if (a <= 0.0) return 0.0;
  return -std::expm1(-a) - a * std::exp(-a);
}

RejectionDraw rejectionExtend(const PdmpModel& model, const State& z, double dt, const TrajectorySkeleton& segment,
                              RandomStream& rng, std::size_t maxTries) {
  RejectionDraw draw;
  while (draw.tries < maxTries) {
    ++draw.tries;
    draw.outcome = simulate(model, z, dt, rng, {true, false});
    if (!sameSkeleton(*draw.outcome.skeleton, segment)) return draw;
  }
  throw OracleExhaustedError("rejection oracle: no differing trajectory within " + std::to_string(maxTries) +
                             " tries");
}

double differentiationTimeOf(const TrajectorySkeleton& segment, const TrajectorySkeleton& draw) {
  for (std::size_t k = 0; k < draw.jumps.size(); ++k) {
    if (k >= segment.jumps.size()) return draw.jumps[k].time;
    const auto& a = segment.jumps[k];
    const auto& b = draw.jumps[k];
    if (std::abs(a.time - b.time) > 1e-9 || !sameState(a.arrival, b.arrival, 1e-9)) return b.time;
  }
  throw std::invalid_argument("differentiationTimeOf: draw follows the segment");
}

namespace {

struct Moment {
  double mean = 0.0;
  double se = 0.0;
};

// E[ E[h | Z_{grid[j+1]}]^2 | Z_{grid[j]} = from ], squared inner means
// estimated without bias.
Moment squaredConditionalMean(const PdmpModel& model, const Observable& h, const std::vector<double>& grid,
                              std::size_t j, const PathSummary& from, NestedBudget budget, std::uint64_t seed,
                              std::uint32_t part, std::size_t workers) {
  const double horizon = grid.back();
  std::vector<double> values(budget.outer);
  parallelFor(budget.outer, workers, [&](std::size_t o) {
    RandomStream rng(seed, StreamDomain::Oracle, part, static_cast<std::uint32_t>(o));
    PathSummary mid = from;
    const double t1 = grid[j + 1];
    if (t1 > from.time) {
      const SegmentOutcome seg = detail::runSegment(model, from.state, t1 - from.time, rng, {});
      mid = {seg.end, from.failed || seg.failed, t1};
    }
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < budget.inner; ++i) {
      PathSummary end = mid;
      if (horizon > mid.time) {
        const SegmentOutcome seg = detail::runSegment(model, mid.state, horizon - mid.time, rng, {});
        end = {seg.end, mid.failed || seg.failed, horizon};
      }
      const double v = h(end);
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(budget.inner);
    values[o] = (s * s - s2) / (n * (n - 1.0));
  });
  return {stats::mean(values), stats::standardError(values)};
}

}  // namespace

GStarEstimate nestedGStar(const PdmpModel& model, const Observable& h, const std::vector<double>& grid,
                          std::size_t k, const PathSummary& atK, const std::optional<PathSummary>& atPrevious,
                          NestedBudget budget, std::uint64_t seed, std::size_t workers) {
  if (budget.inner < 2 || budget.outer < 2) throw std::invalid_argument("nestedGStar: budgets must be at least 2");
  if (k + 1 >= grid.size()) throw std::invalid_argument("nestedGStar: step beyond the grid");
  if (k > 0 && !atPrevious) throw std::invalid_argument("nestedGStar: summary at the previous grid time required");

  GStarEstimate est;
  const Moment num = squaredConditionalMean(model, h, grid, k, atK, budget, seed, 0, workers);
  est.numerator = num.mean;
  if (k == 0) {
    est.value = std::sqrt(std::max(0.0, num.mean));
    est.stdError = est.value > 0.0 ? num.se / (2.0 * est.value) : 0.0;
    return est;
  }
  const Moment den = squaredConditionalMean(model, h, grid, k - 1, *atPrevious, budget, seed, 1, workers);
  est.denominator = den.mean;
  if (!(den.mean > 0.0) || !(num.mean > 0.0)) {
    est.value = 0.0;
    return est;
  }
  est.value = std::sqrt(num.mean / den.mean);
  const double rel = std::hypot(num.se / num.mean, den.se / den.mean);
  est.stdError = 0.5 * est.value * rel;
  return est;
}

double coldStandbyGStar(double lambda, double tf) {
  const double a = lambda * tf / 2.0;
  const double p0 = std::exp(-a);
  const double p1 = a * std::exp(-a);
  const double p2 = 1.0 - p0 - p1;
  const double q2 = coldStandbyExactP(lambda, tf / 2.0);
  const double q1 = -std::expm1(-a);
  return std::sqrt(q2 / (p0 * q2 * q2 + p1 * q1 * q1 + p2));
}

}  // namespace pdmp
