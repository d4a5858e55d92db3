#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pdmp/types.hpp"

namespace pdmp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Behavioral interface of a PDMP with discrete jump kernels.
///
/// Implementations must be immutable after construction: every method is
/// called concurrently from propagation workers.
class PdmpModel {
 public:
  virtual ~PdmpModel() = default;

  virtual std::string name() const = 0;
  virtual std::size_t componentCount() const = 0;
  virtual std::size_t dimension() const = 0;

  /// Default starting state and observation horizon of the system.
  virtual State initialState() const = 0;
  virtual double horizon() const = 0;

  /// Deterministic flow. Only defined for dt <= boundaryHitTime(z).
  virtual State flow(const State& z, double dt) const = 0;

  /// Time until the flow started at z reaches the boundary of its mode's
  /// region; +infinity when it never does; 0 for states on the boundary.
  virtual double boundaryHitTime(const State& z) const = 0;

  /// Spontaneous transitions out of z with their rates.
  virtual std::vector<RateEntry> transitionRates(const State& z) const = 0;

  /// Total jump rate. The default sums transitionRates().
  virtual double totalRate(const State& z) const;

  /// Integral of the total rate along the flow over [0, t]. The default is
  /// adaptive Simpson quadrature; closed-form models override it.
  virtual double cumulativeRate(const State& z, double t) const;

  /// Interior jump law. The default normalizes transitionRates().
  virtual TransitionTable interiorKernel(const State& z) const;

  /// Jump law for a state on the boundary of its mode's region. Exactly one
  /// entry is flagged `nominal` (the control target).
  virtual TransitionTable boundaryKernel(const State& z) const = 0;

  /// Membership in the critical region D.
  virtual bool isCritical(const State& z) const = 0;

  /// Time at which the flow from z first enters D, searched over [0, limit];
  /// +infinity if it does not. The default checks the endpoint and bisects on
  /// the membership indicator, which assumes a single crossing.
  virtual double criticalHitTime(const State& z, double limit) const;
};

/// Adaptive Simpson quadrature with relative tolerance `relTol`.
template <class F>
double adaptiveSimpson(F&& f, double a, double b, double relTol = 1e-10, int maxDepth = 40);

/// Fixed-step classical Runge-Kutta integration of dx/dt = rhs(x).
template <class Rhs>
Physical integrateRk4(Rhs&& rhs, Physical x, double dt, double step);

// -- implementation of the templates --------------------------------------

namespace detail {
template <class F>
double simpsonStep(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpsonStep(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpsonStep(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

template <class F>
double adaptiveSimpson(F&& f, double a, double b, double relTol, int maxDepth) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double scale = std::max(std::abs(whole), 1e-300);
  return detail::simpsonStep(f, a, b, fa, fm, fb, whole, relTol * scale, maxDepth);
}

template <class Rhs>
Physical integrateRk4(Rhs&& rhs, Physical x, double dt, double step) {
  if (dt <= 0.0) return x;
  const auto steps = static_cast<long>(std::ceil(dt / step - 1e-9));
  const double h = dt / static_cast<double>(steps);
  const std::size_t d = x.size();
  for (long s = 0; s < steps; ++s) {
    Physical k1 = rhs(x);
    Physical tmp = x;
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    Physical k2 = rhs(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    Physical k3 = rhs(tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
    Physical k4 = rhs(tmp);
    for (std::size_t i = 0; i < d; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return x;
}

}  // namespace pdmp
