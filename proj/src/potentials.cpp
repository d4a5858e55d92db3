#include "pdmp/potentials.hpp"

#include <cmath>
#include <stdexcept>

#include "pdmp/simulation.hpp"

namespace pdmp {

const char* toString(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::UAlpha: return "uAlpha";
    case PotentialKind::DamExponential: return "damExponential";
    case PotentialKind::Constant: return "constant";
    case PotentialKind::Custom: return "custom";
  }
  return "?";
}

PotentialKind potentialKindFromString(const std::string& s) {
  if (s == "uAlpha") return PotentialKind::UAlpha;
  if (s == "damExponential") return PotentialKind::DamExponential;
  if (s == "constant") return PotentialKind::Constant;
  if (s == "custom") return PotentialKind::Custom;
  throw std::invalid_argument("unknown potential kind '" + s + "'");
}

int workingComponents(const State& z) {
  int b = 0;
  for (Status s : z.m) b += (s != Status::Failed);
  return b;
}

double logUAlpha(const PathSummary& s, const PotentialSpec& spec) {
  if (s.failed) return 0.0;
  const double b1 = workingComponents(s.state) + 1.0;
  double logU = -spec.alpha * b1 * b1;
  if (spec.lShape) logU += std::log(spec.lShape(s.time));
  return logU;
}

namespace {

double logU(const PathSummary& s, const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::UAlpha: return logUAlpha(s, spec);
    case PotentialKind::Custom:
      if (!spec.customLogU) throw std::invalid_argument("custom potential without a function");
      return spec.customLogU(s);
    default: return 0.0;
  }
}

PathSummary summaryAt(const PdmpModel& model, const TrajectorySkeleton& traj, double t) {
  return {stateAt(model, traj, t), enteredCriticalBy(model, traj, t), t};
}

}  // namespace

double uAlpha(const PdmpModel& model, const TrajectorySkeleton& traj, double t, const PotentialSpec& spec) {
  if (t > traj.horizon + 1e-12) throw std::invalid_argument("uAlpha: trajectory shorter than t");
  return std::exp(logUAlpha(summaryAt(model, traj, t), spec));
}

PotentialStep potentialStep(const PathSummary& s, double prevLogU, std::size_t k, const PotentialSpec& spec) {
  if (spec.kind == PotentialKind::DamExponential) {
    const double b1 = workingComponents(s.state) + 1.0;
    const double logG = spec.alpha1 * (spec.xlim - s.state.x[0]) + spec.alpha2 * b1 * b1;
    return {logG, prevLogU + logG};
  }
  const double u = logU(s, spec);
  return {k == 0 ? u : u - prevLogU, u};
}

double potentialAtStep(const PdmpModel& model, const TrajectorySkeleton& traj, std::size_t k,
                       const std::vector<double>& grid, const PotentialSpec& spec) {
  if (k >= grid.size()) throw std::invalid_argument("potentialAtStep: step beyond the grid");
  const PathSummary cur = summaryAt(model, traj, grid[k]);
  if (spec.kind == PotentialKind::DamExponential) return std::exp(potentialStep(cur, 0.0, k, spec).logG);
  const double prev = k == 0 ? 0.0 : logU(summaryAt(model, traj, grid[k - 1]), spec);
  return std::exp(potentialStep(cur, prev, k, spec).logG);
}

double failureIndicator(const PathSummary& s) { return s.failed ? 1.0 : 0.0; }

}  // namespace pdmp
