#include "pdmp/model.hpp"

#include <cmath>
#include <sstream>

namespace pdmp {

const char* toString(Status s) {
  switch (s) {
    case Status::On: return "On";
    case Status::Off: return "Off";
    case Status::Failed: return "F";
  }
  return "?";
}

bool sameState(const State& a, const State& b, double tol) noexcept {
  if (!(a.m == b.m) || a.x.size() != b.x.size()) return false;
  for (std::size_t i = 0; i < a.x.size(); ++i)
    if (std::abs(a.x[i] - b.x[i]) > tol) return false;
  return true;
}

std::string describe(const State& z) {
  std::ostringstream os;
  os.precision(17);
  os << "(x=[";
  for (std::size_t i = 0; i < z.x.size(); ++i) os << (i ? "," : "") << z.x[i];
  os << "], m=(";
  for (std::size_t i = 0; i < z.m.size(); ++i) os << (i ? "," : "") << toString(z.m[i]);
  os << "))";
  return os.str();
}

bool sameSkeleton(const TrajectorySkeleton& a, const TrajectorySkeleton& b, double timeTol) noexcept {
  if (a.jumps.size() != b.jumps.size()) return false;
  if (!sameState(a.initial, b.initial, timeTol)) return false;
  for (std::size_t k = 0; k < a.jumps.size(); ++k) {
    const auto& ja = a.jumps[k];
    const auto& jb = b.jumps[k];
    if (std::abs(ja.time - jb.time) > timeTol) return false;
    if (!sameState(ja.arrival, jb.arrival, timeTol)) return false;
  }
  return true;
}

double TransitionTable::totalMass() const noexcept {
  double s = 0.0;
  for (const auto& e : entries) s += e.probability;
  return s;
}

double PdmpModel::totalRate(const State& z) const {
  double total = 0.0;
  for (const auto& r : transitionRates(z)) total += r.rate;
  return total;
}

double PdmpModel::cumulativeRate(const State& z, double t) const {
  if (t <= 0.0) return 0.0;
  return adaptiveSimpson([&](double u) { return totalRate(flow(z, u)); }, 0.0, t, 1e-10);
}

TransitionTable PdmpModel::interiorKernel(const State& z) const {
  const auto rates = transitionRates(z);
  double total = 0.0;
  for (const auto& r : rates) total += r.rate;
  if (!(total > 0.0)) throw ModelError("interior kernel undefined at " + describe(z) + ": total jump rate is zero");
  TransitionTable table;
  for (const auto& r : rates) {
    if (r.rate <= 0.0) continue;
    table.entries.push_back({r.arrival, r.rate / total, false});
  }
  return table;
}

double PdmpModel::criticalHitTime(const State& z, double limit) const {
  if (isCritical(z)) return 0.0;
  if (!(limit > 0.0) || !std::isfinite(limit)) return kInfinity;
  if (!isCritical(flow(z, limit))) return kInfinity;
  double lo = 0.0;
  double hi = limit;
  for (int i = 0; i < 100 && hi - lo > 1e-12 * std::max(1.0, limit); ++i) {
    const double mid = 0.5 * (lo + hi);
    (isCritical(flow(z, mid)) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace pdmp
