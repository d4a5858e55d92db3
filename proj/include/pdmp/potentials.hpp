#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "pdmp/model.hpp"

namespace pdmp {

/// What particles keep of their trajectory: the state at the last grid
/// time and whether the path went through D. h and every shipped potential
/// depend on the path only through these.
struct PathSummary {
  State state;
  bool failed = false;
  double time = 0.0;
};

enum class PotentialKind { UAlpha, DamExponential, Constant, Custom };

const char* toString(PotentialKind kind);
PotentialKind potentialKindFromString(const std::string& s);

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Constant;
  double alpha = 1.1;
  double alpha1 = -0.9;
  double alpha2 = -1.0;
  double xlim = 10.0;  // failure level used by the dam potential

  /// Optional time profile L(t) of U_alpha; constant 1 when empty.
  std::function<double(double)> lShape;

  /// For kind == Custom: log U of a summary, used in ratio form.
  std::function<double(const PathSummary&)> customLogU;
};

/// Number of components that are not failed.
int workingComponents(const State& z);

/// log U_alpha of a path summary.
double logUAlpha(const PathSummary& s, const PotentialSpec& spec);

/// U_alpha evaluated on a recorded trajectory at time t.
double uAlpha(const PdmpModel& model, const TrajectorySkeleton& traj, double t, const PotentialSpec& spec);

struct PotentialStep {
  double logG = 0.0;  // log G_k at this summary
  double logU = 0.0;  // log U at this summary, carried to the next step
};

/// log G_k given log U at the previous grid time (ignored for k == 0).
PotentialStep potentialStep(const PathSummary& s, double prevLogU, std::size_t k, const PotentialSpec& spec);

/// G_k on a recorded trajectory over the subdivision `grid` (grid[k] = tau_k).
double potentialAtStep(const PdmpModel& model, const TrajectorySkeleton& traj, std::size_t k,
                       const std::vector<double>& grid, const PotentialSpec& spec);

/// Target function h of the estimators.
using Observable = std::function<double(const PathSummary&)>;

/// h = indicator that the path went through D.
double failureIndicator(const PathSummary& s);

}  // namespace pdmp
