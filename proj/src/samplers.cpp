#include "pdmp/samplers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdmp/kernels.hpp"
#include "pdmp/memorization.hpp"
#include "pdmp/parallel.hpp"
#include "pdmp/simulation.hpp"
#include "pdmp/stats.hpp"

namespace pdmp {

const char* toString(Method m) {
  switch (m) {
    case Method::MC: return "mc";
    case Method::IPS: return "ips";
    case Method::SMC: return "smc";
    case Method::IPSM: return "ipsm";
  }
  return "?";
}

Method methodFromString(const std::string& s) {
  if (s == "mc") return Method::MC;
  if (s == "ips") return Method::IPS;
  if (s == "smc") return Method::SMC;
  if (s == "ipsm") return Method::IPSM;
  throw std::invalid_argument("unknown method '" + s + "' (expected mc, ips, smc or ipsm)");
}

void MethodConfig::validate() const {
  if (N < 2) throw std::invalid_argument("N must be at least 2");
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(essThreshold >= 0.0 && essThreshold <= 1.0)) throw std::invalid_argument("essThreshold must lie in [0,1]");
  if (replications < 1) throw std::invalid_argument("replications must be positive");
  if (N > std::numeric_limits<std::uint32_t>::max() / 2) throw std::invalid_argument("N too large");
}

double effectiveSampleSize(std::span<const double> weights, std::span<const double> potentials) {
  const auto m = kernels::productMoments(weights, potentials);
  if (!(m.sumSq > 0.0)) return 0.0;
  return m.sum * m.sum / m.sumSq;
}

std::vector<std::size_t> multinomialResample(std::span<const double> weights, std::size_t N, RandomStream& rng) {
  std::vector<std::size_t> counts(weights.size(), 0);
  if (weights.empty() || N == 0) return counts;
  const double total = kernels::sum(weights);
  if (!(total > 0.0)) throw std::invalid_argument("multinomialResample: weights sum to zero");
  std::size_t lastPositive = 0;
  for (std::size_t j = 0; j < weights.size(); ++j)
    if (weights[j] > 0.0) lastPositive = j;

  // Sorted uniforms from normalized exponential spacings.
  std::vector<double> spacings(N + 1);
  double span = 0.0;
  for (auto& e : spacings) {
    e = -std::log(rng.uniform());
    span += e;
  }
  std::size_t j = 0;
  double cum = weights[0] / total;
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    acc += spacings[i];
    const double u = acc / span;
    while (u >= cum && j < lastPositive) cum += weights[++j] / total;
    ++counts[j];
  }
  return counts;
}

std::vector<double> subdivision(double horizon, std::size_t n) {
  std::vector<double> grid(n + 1);
  for (std::size_t k = 0; k <= n; ++k) grid[k] = horizon * static_cast<double>(k) / static_cast<double>(n);
  grid[n] = horizon;
  return grid;
}

namespace {

struct Particle {
  PathSummary path;
  double prevLogU = 0.0;
  double logGsum = 0.0;
};

double elapsedSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

State startState(const PdmpModel& model, const MethodConfig& config) {
  return config.initial ? *config.initial : model.initialState();
}

void advance(const PdmpModel& model, Particle& p, double dt, double endTime, RandomStream& rng) {
  const SegmentOutcome out = detail::runSegment(model, p.path.state, dt, rng, {});
  p.path.state = out.end;
  p.path.failed = p.path.failed || out.failed;
  p.path.time = endTime;
}

// Potential evaluation shared by every particle method. Fills the shifted
// potentials g and returns log eta(G) (or -inf when all products vanish).
struct StepPotentials {
  std::vector<double> logG;
  std::vector<double> logU;
  std::vector<double> g;
  double logMean = -std::numeric_limits<double>::infinity();
  double ess = 0.0;
  double sumWG = 0.0;
};

StepPotentials evaluatePotentials(const std::vector<Particle>& particles, const std::vector<double>& weights,
                                  std::size_t k, const PotentialSpec& spec) {
  StepPotentials sp;
  const std::size_t size = particles.size();
  sp.logG.resize(size);
  sp.logU.resize(size);
  sp.g.resize(size);
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size; ++i) {
    const PotentialStep step = potentialStep(particles[i].path, particles[i].prevLogU, k, spec);
    sp.logG[i] = step.logG;
    sp.logU[i] = step.logU;
    if (weights[i] > 0.0) shift = std::max(shift, step.logG);
  }
  if (!std::isfinite(shift)) return sp;
  for (std::size_t i = 0; i < size; ++i) sp.g[i] = std::exp(sp.logG[i] - shift);
  const auto m = kernels::productMoments(weights, sp.g);
  if (!(m.sum > 0.0)) return sp;
  sp.sumWG = m.sum;
  sp.ess = m.sum * m.sum / m.sumSq;
  // Weights sum to 1, so the weighted sum is the mean.
  sp.logMean = shift + std::log(m.sum / kernels::sum(weights));
  return sp;
}

// eta_n(f_h) with f_h = h / prod G, in log space.
double finalLogMean(const std::vector<Particle>& particles, const std::vector<double>& weights, const Observable& h) {
  double shift = -std::numeric_limits<double>::infinity();
  std::vector<double> hv(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) {
    hv[i] = h(particles[i].path);
    if (hv[i] < 0.0) throw std::domain_error("target function h must be nonnegative");
    if (hv[i] > 0.0 && weights[i] > 0.0) shift = std::max(shift, -particles[i].logGsum);
  }
  if (!std::isfinite(shift)) return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (std::size_t i = 0; i < particles.size(); ++i)
    if (hv[i] > 0.0 && weights[i] > 0.0) s += weights[i] * hv[i] * std::exp(-particles[i].logGsum - shift);
  return shift + std::log(s);
}

std::vector<Particle> initialParticles(const PdmpModel& model, const MethodConfig& config) {
  const State z0 = startState(model, config);
  Particle p;
  p.path = {z0, model.isCritical(z0), 0.0};
  return std::vector<Particle>(config.N, p);
}

void finish(EstimateReport& report, double logProd, double logFinal) {
  report.finalMean = std::exp(logFinal);
  const double logP = logProd + logFinal;
  report.pHat = std::isfinite(logP) ? std::exp(logP) : 0.0;
}

void markStopped(EstimateReport& report) {
  report.stopped = true;
  report.pHat = 0.0;
  report.finalMean = 0.0;
}

// IPS (adaptive == false) and SMC.
EstimateReport sequentialRun(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                             const MethodConfig& config, bool adaptive) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  EstimateReport report;
  report.method = config.method;
  report.seed = config.seed;

  const std::vector<double> grid = subdivision(model.horizon(), config.n);
  std::vector<Particle> particles = initialParticles(model, config);
  std::vector<double> weights(config.N, 1.0 / static_cast<double>(config.N));
  const double N = static_cast<double>(config.N);
  double logProd = 0.0;

  for (std::size_t k = 0; k < config.n; ++k) {
    StepPotentials sp = evaluatePotentials(particles, weights, k, spec);
    if (!std::isfinite(sp.logMean)) {
      markStopped(report);
      report.wallTime = elapsedSince(start);
      return report;
    }
    report.stepPotentialMeans.push_back(std::exp(sp.logMean));
    report.essTrace.push_back(sp.ess);
    logProd += sp.logMean;

    for (std::size_t i = 0; i < particles.size(); ++i) {
      particles[i].logGsum += sp.logG[i];
      particles[i].prevLogU = sp.logU[i];
    }
    std::vector<double> candidate(particles.size());
    kernels::scaledProducts(weights, sp.g, 1.0 / sp.sumWG, candidate);

    const bool resample = !adaptive || sp.ess <= config.essThreshold * N * (1.0 + 1e-12);
    report.resampledFlags.push_back(resample);
    if (resample) {
      RandomStream rng(config.seed, StreamDomain::Selection, static_cast<std::uint32_t>(k), 0);
      const auto counts = multinomialResample(candidate, config.N, rng);
      std::vector<Particle> selected;
      selected.reserve(config.N);
      for (std::size_t j = 0; j < counts.size(); ++j)
        for (std::size_t c = 0; c < counts[j]; ++c) selected.push_back(particles[j]);
      particles = std::move(selected);
      weights.assign(config.N, 1.0 / N);
      report.selectedTotals.push_back(config.N);
    } else {
      weights = std::move(candidate);
      report.selectedTotals.push_back(0);
    }

    const double dt = grid[k + 1] - grid[k];
    parallelFor(particles.size(), config.workers, [&](std::size_t i) {
      RandomStream rng(config.seed, StreamDomain::Propagation, static_cast<std::uint32_t>(k),
                       static_cast<std::uint32_t>(i));
      advance(model, particles[i], dt, grid[k + 1], rng);
    });
    report.weightSums.push_back(kernels::sum(weights));
    report.sampleSizes.push_back(particles.size());
  }

  finish(report, logProd, finalLogMean(particles, weights, h));
  report.wallTime = elapsedSince(start);
  return report;
}

}  // namespace

EstimateReport monteCarloEstimate(const PdmpModel& model, const Observable& h, const MethodConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  EstimateReport report;
  report.method = Method::MC;
  report.seed = config.seed;
  const State z0 = startState(model, config);
  const double horizon = model.horizon();
  std::vector<double> values(config.N);
  parallelFor(config.N, config.workers, [&](std::size_t j) {
    RandomStream rng(config.seed, StreamDomain::Propagation, 0, static_cast<std::uint32_t>(j));
    Particle p;
    p.path = {z0, model.isCritical(z0), 0.0};
    advance(model, p, horizon, horizon, rng);
    values[j] = h(p.path);
  });
  report.finalMean = stats::mean(values);
  report.pHat = report.finalMean;
  report.weightSums.push_back(1.0);
  report.sampleSizes.push_back(config.N);
  report.wallTime = elapsedSince(start);
  return report;
}

EstimateReport ipsRun(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                      const MethodConfig& config) {
  return sequentialRun(model, spec, h, config, false);
}

EstimateReport smcRun(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                      const MethodConfig& config) {
  return sequentialRun(model, spec, h, config, true);
}

EstimateReport ipsmRun(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                       const MethodConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  EstimateReport report;
  report.method = Method::IPSM;
  report.seed = config.seed;

  const std::vector<double> grid = subdivision(model.horizon(), config.n);
  std::vector<Particle> particles = initialParticles(model, config);
  std::vector<double> weights(config.N, 1.0 / static_cast<double>(config.N));
  const double N = static_cast<double>(config.N);
  double logProd = 0.0;

  struct Slot {
    std::size_t cluster;
    bool preponderant;
  };

  for (std::size_t k = 0; k < config.n; ++k) {
    StepPotentials sp = evaluatePotentials(particles, weights, k, spec);
    if (!std::isfinite(sp.logMean)) {
      markStopped(report);
      report.wallTime = elapsedSince(start);
      return report;
    }
    report.stepPotentialMeans.push_back(std::exp(sp.logMean));
    report.essTrace.push_back(sp.ess);
    report.resampledFlags.push_back(true);
    logProd += sp.logMean;

    for (std::size_t i = 0; i < particles.size(); ++i) {
      particles[i].logGsum += sp.logG[i];
      particles[i].prevLogU = sp.logU[i];
    }
    std::vector<double> candidate(particles.size());
    kernels::scaledProducts(weights, sp.g, 1.0 / sp.sumWG, candidate);

    RandomStream selRng(config.seed, StreamDomain::Selection, static_cast<std::uint32_t>(k), 0);
    const auto counts = multinomialResample(candidate, config.N, selRng);

    // Clusters are the ancestors selected at least once.
    std::vector<std::size_t> ancestors;
    std::size_t selected = 0;
    std::size_t expectedSize = 0;
    for (std::size_t j = 0; j < counts.size(); ++j) {
      selected += counts[j];
      expectedSize += counts[j] + (counts[j] > 0 ? 1 : 0);
      if (counts[j] > 0) ancestors.push_back(j);
    }
    report.nonemptyClusters += ancestors.size();

    const double dt = grid[k + 1] - grid[k];
    std::vector<std::optional<PreponderantExtension>> extensions(ancestors.size());
    parallelFor(ancestors.size(), config.workers, [&](std::size_t c) {
      extensions[c] = preponderantExtension(model, particles[ancestors[c]].path.state, dt);
    });

    std::vector<Slot> slots;
    slots.reserve(expectedSize);
    for (std::size_t c = 0; c < ancestors.size(); ++c) {
      slots.push_back({c, true});
      if (extensions[c]->probability >= 1.0) ++report.degenerateClusters;
      for (std::size_t r = 0; r < counts[ancestors[c]]; ++r) slots.push_back({c, false});
    }

    std::vector<Particle> next(slots.size());
    std::vector<double> nextWeights(slots.size());
    parallelFor(slots.size(), config.workers, [&](std::size_t o) {
      const Slot& slot = slots[o];
      const Particle& parent = particles[ancestors[slot.cluster]];
      const PreponderantExtension& ext = *extensions[slot.cluster];
      const double share = static_cast<double>(counts[ancestors[slot.cluster]]) / N;
      Particle p = parent;
      const SegmentOutcome* out = &ext.outcome;
      SegmentOutcome avoiding;
      if (slot.preponderant) {
        nextWeights[o] = ext.probability >= 1.0 ? share : ext.probability * share;
      } else if (ext.probability >= 1.0) {
        // Nothing to avoid: the replicate keeps the cluster's only path with
        // zero weight, which leaves the sample size accounting intact.
        nextWeights[o] = 0.0;
      } else {
        RandomStream rng(config.seed, StreamDomain::Propagation, static_cast<std::uint32_t>(k),
                         static_cast<std::uint32_t>(o));
        avoiding = sampleAvoidingExtension(model, ext, rng);
        out = &avoiding;
        nextWeights[o] = (1.0 - ext.probability) / N;
      }
      p.path.state = out->end;
      p.path.failed = parent.path.failed || out->failed;
      p.path.time = grid[k + 1];
      next[o] = std::move(p);
    });
    particles = std::move(next);
    weights = std::move(nextWeights);

    report.selectedTotals.push_back(selected);
    report.clusterSizes.push_back(expectedSize);
    report.sampleSizes.push_back(particles.size());
    report.weightSums.push_back(kernels::sum(weights));
  }

  finish(report, logProd, finalLogMean(particles, weights, h));
  report.wallTime = elapsedSince(start);
  return report;
}

EstimateReport runEstimator(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                            const MethodConfig& config) {
  switch (config.method) {
    case Method::MC: return monteCarloEstimate(model, h, config);
    case Method::IPS: return ipsRun(model, spec, h, config);
    case Method::SMC: return smcRun(model, spec, h, config);
    case Method::IPSM: return ipsmRun(model, spec, h, config);
  }
  throw std::invalid_argument("unknown method");
}

std::vector<double> ReplicatedResult::estimates() const {
  std::vector<double> v;
  v.reserve(reports.size());
  for (const auto& r : reports) v.push_back(r.pHat);
  return v;
}

ReplicatedResult replicatedExperiment(const PdmpModel& model, const PotentialSpec& spec, const Observable& h,
                                      const MethodConfig& config) {
  config.validate();
  ReplicatedResult result;
  result.reports.reserve(config.replications);
  for (std::size_t r = 0; r < config.replications; ++r) {
    MethodConfig run = config;
    run.seed = replicationSeed(config.seed, r);
    result.reports.push_back(runEstimator(model, spec, h, run));
  }
  const auto est = result.estimates();
  result.meanPHat = stats::mean(est);
  result.empiricalVariance = stats::variance(est);
  return result;
}

}  // namespace pdmp
