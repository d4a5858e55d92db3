#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdmp/model.hpp"
#include "pdmp/potentials.hpp"
#include "pdmp/random.hpp"

namespace pdmp {

enum class Method { MC, IPS, SMC, IPSM };

const char* toString(Method m);
Method methodFromString(const std::string& s);

struct MethodConfig {
  Method method = Method::MC;
  std::size_t N = 10000;
  std::size_t n = 10;             // subdivisions of [0, tf]
  double essThreshold = 0.5;      // SMC only
  std::uint64_t seed = 1;
  std::size_t replications = 1;
  std::size_t workers = 1;
  std::optional<State> initial;   // defaults to the model's initial state

  void validate() const;
};

struct EstimateReport {
  Method method = Method::MC;
  double pHat = 0.0;
  std::vector<double> stepPotentialMeans;  // eta_k(G_k), k = 0..n-1
  double finalMean = 0.0;                  // eta_n(f_h)
  std::vector<double> essTrace;
  std::vector<bool> resampledFlags;
  bool stopped = false;
  std::uint64_t seed = 0;
  double wallTime = 0.0;

  // Per-step bookkeeping, recorded after each propagation.
  std::vector<double> weightSums;
  std::vector<std::size_t> sampleSizes;     // particles actually held
  std::vector<std::size_t> selectedTotals;  // sum of the selection counts
  std::vector<std::size_t> clusterSizes;    // IPS+M: sum_j (N~^j + 1{N~^j > 0})
  std::size_t nonemptyClusters = 0;
  std::size_t degenerateClusters = 0;
};

/// (sum W G)^2 / sum (W G)^2; 0 when every product vanishes.
double effectiveSampleSize(std::span<const double> weights, std::span<const double> potentials);

/// Multinomial counts of N draws from normalized weights. O(N + size).
std::vector<std::size_t> multinomialResample(std::span<const double> weights, std::size_t N, RandomStream& rng);

/// Grid tau_k = k * horizon / n, with tau_n = horizon exactly.
std::vector<double> subdivision(double horizon, std::size_t n);

EstimateReport monteCarloEstimate(const PdmpModel& model, const Observable& h, const MethodConfig& config);
EstimateReport ipsRun(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                      const MethodConfig& config);
EstimateReport smcRun(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                      const MethodConfig& config);
EstimateReport ipsmRun(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                       const MethodConfig& config);

/// Dispatches on config.method.
EstimateReport runEstimator(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                            const MethodConfig& config);

struct ReplicatedResult {
  double meanPHat = 0.0;
  double empiricalVariance = 0.0;
  std::vector<EstimateReport> reports;

  std::vector<double> estimates() const;
};

/// R = config.replications runs; run r uses replicationSeed(config.seed, r).
ReplicatedResult replicatedExperiment(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                                      const MethodConfig& config);

}  // namespace pdmp
