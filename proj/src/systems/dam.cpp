#include <sstream>

#include "pdmp/systems.hpp"

namespace pdmp {

void DamParams::validate() const {
  std::ostringstream err;
  if (!(inflow > 0.0 && surface > 0.0 && xlim > 0.0)) err << "inflow, surface and xlim must be positive; ";
  if (!(stickRate >= 0.0 && repairRate >= 0.0)) err << "stickRate and repairRate must be nonnegative; ";
  if (!(tf > 0.0)) err << "tf must be positive; ";
  if (!(x0 >= 0.0)) err << "x0 must be nonnegative; ";
  if (!err.str().empty()) throw ParameterError("dam: " + err.str());
}

DamModel::DamModel(DamParams params) : p_(params) { p_.validate(); }

State DamModel::initialState() const { return State{Physical{p_.x0}, Mode{Status::On, Status::Off}}; }

double DamModel::slope(const Mode& m) const noexcept {
  return (m[0] == Status::Failed && m[1] == Status::Failed) ? p_.inflow / p_.surface : 0.0;
}

State DamModel::flow(const State& z, double dt) const {
  const double s = slope(z.m);
  if (s == 0.0 || dt == 0.0) return z;
  return State{Physical{z.x[0] + s * dt}, z.m};
}

std::vector<RateEntry> DamModel::transitionRates(const State& z) const {
  std::vector<RateEntry> out;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t other = 1 - i;
    Mode m = z.m;
    switch (z.m[i]) {
      case Status::On:
        // The standby valve takes over in the same jump.
        m[i] = Status::Failed;
        if (m[other] == Status::Off) m[other] = Status::On;
        if (p_.stickRate > 0.0) out.push_back({State{z.x, m}, p_.stickRate});
        break;
      case Status::Off:
        if (p_.standbyCanStick && p_.stickRate > 0.0) {
          m[i] = Status::Failed;
          out.push_back({State{z.x, m}, p_.stickRate});
        }
        break;
      case Status::Failed:
        m[i] = z.m[other] == Status::Failed ? Status::On : Status::Off;
        if (p_.repairRate > 0.0) out.push_back({State{z.x, m}, p_.repairRate});
        break;
    }
  }
  return out;
}

double DamModel::cumulativeRate(const State& z, double t) const {
  if (t <= 0.0) return 0.0;
  return totalRate(z) * t;
}

TransitionTable DamModel::boundaryKernel(const State& z) const {
  throw ModelError("dam: no control threshold exists, boundary kernel requested at " + describe(z));
}

double DamModel::criticalHitTime(const State& z, double limit) const {
  if (z.x[0] >= p_.xlim) return 0.0;
  const double s = slope(z.m);
  if (s <= 0.0) return kInfinity;
  const double t = (p_.xlim - z.x[0]) / s;
  return t <= limit ? t : kInfinity;
}

std::shared_ptr<const PdmpModel> damModel(const DamParams& params) { return std::make_shared<DamModel>(params); }

}  // namespace pdmp
