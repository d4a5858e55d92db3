#include "pdmp/systems.hpp"

namespace pdmp {

void ColdStandbyParams::validate() const {
  if (!(failRate > 0.0)) throw ParameterError("cold standby: failRate must be positive");
  if (!(tf > 0.0)) throw ParameterError("cold standby: tf must be positive");
}

ColdStandbyModel::ColdStandbyModel(ColdStandbyParams params) : p_(params) { p_.validate(); }

State ColdStandbyModel::initialState() const { return State{Physical{}, Mode{Status::On, Status::Off}}; }

std::vector<RateEntry> ColdStandbyModel::transitionRates(const State& z) const {
  Mode m = z.m;
  if (m[0] == Status::On) {
    m[0] = Status::Failed;
    m[1] = Status::On;
  } else if (m[1] == Status::On) {
    m[1] = Status::Failed;
  } else {
    return {};
  }
  return {{State{z.x, m}, p_.failRate}};
}

double ColdStandbyModel::cumulativeRate(const State& z, double t) const {
  if (t <= 0.0) return 0.0;
  return totalRate(z) * t;
}

TransitionTable ColdStandbyModel::boundaryKernel(const State& z) const {
  throw ModelError("cold standby: no control threshold exists, boundary kernel requested at " + describe(z));
}

bool ColdStandbyModel::isCritical(const State& z) const {
  return z.m[0] == Status::Failed && z.m[1] == Status::Failed;
}

double ColdStandbyModel::criticalHitTime(const State& z, double) const {
  return isCritical(z) ? 0.0 : kInfinity;
}

std::shared_ptr<const PdmpModel> coldStandbyModel(const ColdStandbyParams& params) {
  return std::make_shared<ColdStandbyModel>(params);
}

}  // namespace pdmp
