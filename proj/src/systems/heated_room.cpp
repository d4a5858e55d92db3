#include <cmath>
#include <sstream>

#include "pdmp/systems.hpp"

namespace pdmp {

namespace {

// States this close to a threshold count as lying on it; the flow evaluated
// at the closed-form hitting time is only accurate to rounding.
constexpr double kThresholdTol = 1e-8;

int countStatus(const Mode& m, Status s) {
  int n = 0;
  for (Status v : m) n += (v == s);
  return n;
}

State withMode(const State& z, Mode m) { return State{z.x, m}; }

// Adds `mass` to the entry for `arrival`, creating it when absent.
void accumulate(TransitionTable& table, const State& arrival, double mass, bool nominal) {
  if (!(mass > 0.0)) return;
  for (auto& e : table.entries) {
    if (e.arrival.m == arrival.m && e.arrival.x == arrival.x) {
      e.probability += mass;
      e.nominal = e.nominal || nominal;
      return;
    }
  }
  table.entries.push_back({arrival, mass, nominal});
}

}  // namespace

void HeatedRoomParams::validate() const {
  std::ostringstream err;
  if (!(xe < 0.0 && 0.0 < xmin && xmin < xmax)) err << "require xe < 0 < xmin < xmax; ";
  if (!(beta1 > 0.0)) err << "beta1 must be positive; ";
  if (!(beta2 > 0.0)) err << "beta2 must be positive; ";
  if (!(gamma >= 0.0 && gamma < 1.0)) err << "gamma must lie in [0,1); ";
  if (!(failA + failB * xe >= 0.0 && failA + failB * xmax >= 0.0))
    err << "failure rate failA + failB*x must be nonnegative on [xe, xmax]; ";
  if (!(repairRate >= 0.0)) err << "repairRate must be nonnegative; ";
  if (!(tf > 0.0)) err << "tf must be positive; ";
  if (!(x0 >= xe && x0 <= xmax)) err << "x0 must lie in [xe, xmax]; ";
  if (m0.size() != 2) err << "m0 must have two components; ";
  if (numericFlow && !(flowStep > 0.0)) err << "flowStep must be positive; ";
  if (!err.str().empty()) throw ParameterError("heated room: " + err.str());
}

HeatedRoomModel::HeatedRoomModel(HeatedRoomParams params) : p_(std::move(params)) {
  p_.validate();
  if (!(boundaryHitTime(initialState()) > 0.0))
    throw ParameterError("heated room: initial state lies on a control threshold");
}

State HeatedRoomModel::initialState() const { return State{Physical{p_.x0}, p_.m0}; }

double HeatedRoomModel::equilibrium(const Mode& m) const noexcept {
  return p_.xe + countStatus(m, Status::On) * p_.beta2 / p_.beta1;
}

bool HeatedRoomModel::heatingRegionUnbounded(const Mode& m) const noexcept {
  return countStatus(m, Status::On) > 0 || countStatus(m, Status::Failed) == 2;
}

State HeatedRoomModel::flow(const State& z, double dt) const {
  if (dt == 0.0) return z;
  const double eq = equilibrium(z.m);
  if (p_.numericFlow) {
    const double b1 = p_.beta1;
    return State{integrateRk4([&](const Physical& x) { return Physical{b1 * (eq - x[0])}; }, z.x, dt, p_.flowStep),
                 z.m};
  }
  return State{Physical{eq + (z.x[0] - eq) * std::exp(-p_.beta1 * dt)}, z.m};
}

double HeatedRoomModel::boundaryHitTime(const State& z) const {
  const double x = z.x[0];
  const double eq = equilibrium(z.m);
  double threshold;
  if (countStatus(z.m, Status::On) > 0) {
    if (x >= p_.xmax - kThresholdTol) return 0.0;
    if (eq <= p_.xmax) return kInfinity;
    threshold = p_.xmax;
  } else if (countStatus(z.m, Status::Failed) == 2) {
    return kInfinity;
  } else {
    if (x <= p_.xmin + kThresholdTol) return 0.0;
    threshold = p_.xmin;
  }
  if (!p_.numericFlow) return std::log((eq - x) / (eq - threshold)) / p_.beta1;

  // Step the integrator until the threshold is bracketed, then bisect.
  const double sign = threshold > x ? 1.0 : -1.0;
  const double bracket = 100.0 * p_.flowStep;
  double lo = 0.0;
  State cur = z;
  for (;;) {
    const State next = flow(cur, bracket);
    if (sign * (next.x[0] - threshold) >= 0.0) break;
    cur = next;
    lo += bracket;
    if (lo > 1e7) return kInfinity;
  }
  double a = 0.0;
  double b = bracket;
  while (b - a > 1e-9) {
    const double mid = 0.5 * (a + b);
    (sign * (flow(cur, mid).x[0] - threshold) >= 0.0 ? b : a) = mid;
  }
  return lo + b;
}

std::vector<RateEntry> HeatedRoomModel::transitionRates(const State& z) const {
  std::vector<RateEntry> out;
  const double x = z.x[0];
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t other = 1 - i;
    if (z.m[i] == Status::On) {
      Mode m = z.m;
      m[i] = Status::Failed;
      out.push_back({withMode(z, m), failureRate(x)});
    } else if (z.m[i] == Status::Failed && p_.repairRate > 0.0) {
      Mode m = z.m;
      m[i] = (x <= p_.xmin + kThresholdTol && z.m[other] == Status::Failed) ? Status::On : Status::Off;
      out.push_back({withMode(z, m), p_.repairRate});
    }
  }
  return out;
}

double HeatedRoomModel::cumulativeRate(const State& z, double t) const {
  if (t <= 0.0) return 0.0;
  if (p_.numericFlow) return PdmpModel::cumulativeRate(z, t);
  const double x = z.x[0];
  const double eq = equilibrium(z.m);
  const int on = countStatus(z.m, Status::On);
  const int failed = countStatus(z.m, Status::Failed);
  const double meanX = eq * t + (x - eq) * (-std::expm1(-p_.beta1 * t)) / p_.beta1;
  return on * (p_.failA * t + p_.failB * meanX) + failed * p_.repairRate * t;
}

void HeatedRoomModel::addLowThresholdOutcomes(TransitionTable& table, const State& z, double mass) const {
  // Heaters are asked in order; each one that is not already failed either
  // starts (probability 1 - gamma) or fails on demand.
  const double g = p_.gamma;
  Mode m = z.m;
  double remaining = mass;
  bool first = true;
  for (std::size_t i = 0; i < 2; ++i) {
    if (m[i] == Status::Failed) continue;
    Mode started = m;
    started[i] = Status::On;
    accumulate(table, withMode(z, started), remaining * (1.0 - g), first);
    first = false;
    m[i] = Status::Failed;
    remaining *= g;
  }
  accumulate(table, withMode(z, m), remaining, first);
}

TransitionTable HeatedRoomModel::boundaryKernel(const State& z) const {
  TransitionTable table;
  if (countStatus(z.m, Status::On) > 0) {
    if (z.x[0] < p_.xmax - kThresholdTol) throw ModelError("heated room: " + describe(z) + " is not on a control threshold");
    Mode m = z.m;
    for (Status& s : m)
      if (s == Status::On) s = Status::Off;
    table.entries.push_back({withMode(z, m), 1.0, true});
    return table;
  }
  if (heatingRegionUnbounded(z.m) || z.x[0] > p_.xmin + kThresholdTol)
    throw ModelError("heated room: " + describe(z) + " is not on a control threshold");
  addLowThresholdOutcomes(table, z, 1.0);
  return table;
}

TransitionTable HeatedRoomModel::interiorKernel(const State& z) const {
  // A spontaneous failure can leave the room below xmin with no heater on;
  // the thermostat then reacts at once, so the two jumps are composed.
  TransitionTable base = PdmpModel::interiorKernel(z);
  TransitionTable table;
  for (const auto& e : base.entries) {
    const bool outside = !heatingRegionUnbounded(e.arrival.m) && e.arrival.x[0] <= p_.xmin + kThresholdTol;
    if (outside)
      addLowThresholdOutcomes(table, e.arrival, e.probability);
    else
      accumulate(table, e.arrival, e.probability, false);
  }
  for (auto& e : table.entries) e.nominal = false;
  return table;
}

double HeatedRoomModel::criticalHitTime(const State& z, double limit) const {
  const double x = z.x[0];
  if (x < 0.0) return 0.0;
  if (p_.numericFlow) return PdmpModel::criticalHitTime(z, limit);
  const double eq = equilibrium(z.m);
  if (eq >= 0.0) return kInfinity;
  const double t = std::log((x - eq) / -eq) / p_.beta1;
  return t <= limit ? t : kInfinity;
}

std::shared_ptr<const PdmpModel> heatedRoomModel(const HeatedRoomParams& params) {
  return std::make_shared<HeatedRoomModel>(params);
}

}  // namespace pdmp
