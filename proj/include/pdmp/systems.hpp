#pragma once

#include <memory>
#include <stdexcept>

#include "pdmp/model.hpp"

namespace pdmp {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Room heated by two heaters in passive redundancy. Only heater 1 is asked
/// first at the low threshold; heater 2 backs it up.
struct HeatedRoomParams {
  double xe = -5.0;        // exterior temperature
  double beta1 = 0.1;      // heat transfer rate, 1/h
  double beta2 = 4.0;      // heating power, degC/h
  double xmin = 15.0;
  double xmax = 25.0;
  double gamma = 0.01;     // failure on demand
  double failA = 0.0021;   // failure rate failA + failB * x, 1/h
  double failB = 0.00015;
  double repairRate = 0.2;
  double x0 = 20.0;
  Mode m0{Status::On, Status::Off};
  double tf = 150.0;  // calibrated: 10^6-run pilot gives p = 4.1e-5

  bool numericFlow = false;  // integrate the ODE instead of the closed form
  double flowStep = 1e-3;

  void validate() const;
};

/// Dam drained by two valves in passive redundancy. On means open, Off
/// closed and Failed stuck closed.
struct DamParams {
  double inflow = 10.0;       // Q, m3/h
  double surface = 10.0;      // S, m2
  double xlim = 10.0;
  double stickRate = 0.001;   // lambda, 1/h
  double repairRate = 0.1;    // mu, 1/h
  double tf = 50.0;
  double x0 = 0.0;
  bool standbyCanStick = false;

  void validate() const;
};

/// Two units in cold standby without repair; analytic failure probability.
struct ColdStandbyParams {
  double failRate = 0.1;
  double tf = 10.0;

  void validate() const;
};

class HeatedRoomModel final : public PdmpModel {
 public:
  explicit HeatedRoomModel(HeatedRoomParams params);

  const HeatedRoomParams& params() const noexcept { return p_; }

  std::string name() const override { return "heatedRoom"; }
  std::size_t componentCount() const override { return 2; }
  std::size_t dimension() const override { return 1; }
  State initialState() const override;
  double horizon() const override { return p_.tf; }

  State flow(const State& z, double dt) const override;
  double boundaryHitTime(const State& z) const override;
  std::vector<RateEntry> transitionRates(const State& z) const override;
  double cumulativeRate(const State& z, double t) const override;
  TransitionTable interiorKernel(const State& z) const override;
  TransitionTable boundaryKernel(const State& z) const override;
  bool isCritical(const State& z) const override { return z.x[0] < 0.0; }
  double criticalHitTime(const State& z, double limit) const override;

  /// Equilibrium temperature of the flow in the mode of z.
  double equilibrium(const Mode& m) const noexcept;

 private:
  bool heatingRegionUnbounded(const Mode& m) const noexcept;
  double failureRate(double x) const noexcept { return p_.failA + p_.failB * x; }
  void addLowThresholdOutcomes(TransitionTable& table, const State& z, double mass) const;

  HeatedRoomParams p_;
};

class DamModel final : public PdmpModel {
 public:
  explicit DamModel(DamParams params);

  const DamParams& params() const noexcept { return p_; }

  std::string name() const override { return "dam"; }
  std::size_t componentCount() const override { return 2; }
  std::size_t dimension() const override { return 1; }
  State initialState() const override;
  double horizon() const override { return p_.tf; }

  State flow(const State& z, double dt) const override;
  double boundaryHitTime(const State&) const override { return kInfinity; }
  std::vector<RateEntry> transitionRates(const State& z) const override;
  double cumulativeRate(const State& z, double t) const override;
  TransitionTable boundaryKernel(const State& z) const override;
  bool isCritical(const State& z) const override { return z.x[0] >= p_.xlim; }
  double criticalHitTime(const State& z, double limit) const override;

  double slope(const Mode& m) const noexcept;

 private:
  DamParams p_;
};

class ColdStandbyModel final : public PdmpModel {
 public:
  explicit ColdStandbyModel(ColdStandbyParams params);

  const ColdStandbyParams& params() const noexcept { return p_; }

  std::string name() const override { return "coldStandby"; }
  std::size_t componentCount() const override { return 2; }
  std::size_t dimension() const override { return 0; }
  State initialState() const override;
  double horizon() const override { return p_.tf; }

  State flow(const State& z, double) const override { return z; }
  double boundaryHitTime(const State&) const override { return kInfinity; }
  std::vector<RateEntry> transitionRates(const State& z) const override;
  double cumulativeRate(const State& z, double t) const override;
  TransitionTable boundaryKernel(const State& z) const override;
  bool isCritical(const State& z) const override;
  double criticalHitTime(const State& z, double limit) const override;

 private:
  ColdStandbyParams p_;
};

std::shared_ptr<const PdmpModel> heatedRoomModel(const HeatedRoomParams& params);
std::shared_ptr<const PdmpModel> damModel(const DamParams& params);
std::shared_ptr<const PdmpModel> coldStandbyModel(const ColdStandbyParams& params);

}  // namespace pdmp
