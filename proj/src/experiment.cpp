#include "pdmp/experiment.hpp"

#include <chrono>
#include <charconv>
#include <ostream>
#include <sstream>

#include "pdmp/kernels.hpp"
#include "pdmp/parallel.hpp"
#include "pdmp/simulation.hpp"
#include "pdmp/stats.hpp"

#ifndef PDMP_VERSION
#define PDMP_VERSION "unknown"
#endif

namespace pdmp {

namespace {

// Shortest representation that round-trips.
std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string alphaParams(const PotentialSpec& spec) {
  switch (spec.kind) {
    case PotentialKind::UAlpha: return "alpha=" + number(spec.alpha);
    case PotentialKind::DamExponential: return "alpha1=" + number(spec.alpha1) + ";alpha2=" + number(spec.alpha2);
    case PotentialKind::Constant: return "constant";
    case PotentialKind::Custom: return "custom";
  }
  return "";
}

std::string modeString(const Mode& m) {
  std::string s;
  for (Status v : m) s += std::string(s.empty() ? "" : ",") + toString(v);
  return s;
}

nlohmann::ordered_json systemJson(const SystemConfig& s) {
  nlohmann::ordered_json j;
  j["name"] = toString(s.kind);
  nlohmann::ordered_json p;
  switch (s.kind) {
    case SystemKind::HeatedRoom: {
      const auto& h = s.heatedRoom;
      p = {{"xe", h.xe},       {"beta1", h.beta1},       {"beta2", h.beta2},           {"xmin", h.xmin},
           {"xmax", h.xmax},   {"gamma", h.gamma},       {"failA", h.failA},           {"failB", h.failB},
           {"repairRate", h.repairRate}, {"x0", h.x0},   {"m0", modeString(h.m0)},     {"tf", h.tf},
           {"numericFlow", h.numericFlow}, {"flowStep", h.flowStep},
           {"offHeatersFailSpontaneously", false}, {"demandOrder", "heater 1 first"}};
      break;
    }
    case SystemKind::Dam: {
      const auto& d = s.dam;
      p = {{"inflow", d.inflow},         {"surface", d.surface}, {"xlim", d.xlim},
           {"stickRate", d.stickRate},   {"repairRate", d.repairRate}, {"tf", d.tf},
           {"x0", d.x0},                 {"standbyCanStick", d.standbyCanStick},
           {"repairedValveDrains", false}};
      break;
    }
    case SystemKind::ColdStandby:
      p = {{"failRate", s.coldStandby.failRate}, {"tf", s.coldStandby.tf}};
      break;
  }
  j["params"] = p;
  return j;
}

}  // namespace

nlohmann::ordered_json configManifest(const ExperimentConfig& config) {
  nlohmann::ordered_json m;
  m["version"] = PDMP_VERSION;
  m["simd"] = std::string(kernels::isaName(kernels::activeIsa()));
  m["system"] = systemJson(config.system);
  m["potential"] = {{"kind", toString(config.potential.kind)},
                    {"alpha", config.potential.alpha},
                    {"alpha1", config.potential.alpha1},
                    {"alpha2", config.potential.alpha2},
                    {"xlim", config.potential.xlim},
                    {"L", "constant 1"}};
  nlohmann::ordered_json methods = nlohmann::ordered_json::array();
  for (const auto& mc : config.methods)
    methods.push_back({{"method", toString(mc.method)},
                       {"N", mc.N},
                       {"n", mc.n},
                       {"e", mc.essThreshold},
                       {"R", mc.replications},
                       {"seed", mc.seed}});
  m["methods"] = methods;
  m["seed"] = config.seed;
  m["workers"] = config.workers;
  m["tolerances"] = {{"jumpTimeBisection", SolverTolerances::kJumpTimeTol},
                     {"maxBisectionSteps", SolverTolerances::kMaxBisection},
                     {"stateComparison", SolverTolerances::kStateTol},
                     {"kernelSum", SolverTolerances::kKernelSumTol},
                     {"quadratureRelative", 1e-10},
                     {"numericBoundaryTime", 1e-9},
                     {"essTriggerRelative", 1e-12}};
  m["resampling"] = "multinomial";
  m["rng"] = "philox4x32-10 streams keyed by (seed, domain, step, particle); replication seeds by splitmix64";
  return m;
}

ExperimentResult runExperiment(const ExperimentConfig& config, std::ostream* progress) {
  config.validate();
  const auto model = buildModel(config.system);
  ExperimentResult result;
  result.manifest = configManifest(config);
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  const auto start = std::chrono::steady_clock::now();

  for (const auto& mc : config.methods) {
    const auto t0 = std::chrono::steady_clock::now();
    if (progress)
      *progress << "[" << toString(config.system.kind) << "] " << toString(mc.method) << " N=" << mc.N
                << " n=" << mc.n << " R=" << mc.replications << " ..." << std::endl;
    const ReplicatedResult rep = replicatedExperiment(*model, config.potential, failureIndicator, mc);

    ResultRow row;
    row.system = toString(config.system.kind);
    row.method = toString(mc.method);
    row.N = mc.N;
    if (mc.method != Method::MC) {
      row.n = mc.n;
      row.alphaParams = alphaParams(config.potential);
    } else {
      row.alphaParams = "NA";
    }
    row.R = mc.replications;
    row.meanPHat = rep.meanPHat;
    row.empiricalVariance = rep.empiricalVariance;
    row.seed = mc.seed;
    row.estimates = rep.estimates();
    if (mc.method != Method::MC) {
      double essSum = 0.0;
      for (const auto& r : rep.reports) essSum += stats::mean(r.essTrace);
      row.meanESSperStep = essSum / static_cast<double>(rep.reports.size());
    }
    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    for (const auto& r : rep.reports) {
      seeds.push_back(r.seed);
      row.degenerateClusters += r.degenerateClusters;
    }
    row.wallTimeSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    runs.push_back({{"method", row.method},
                    {"n", mc.n},
                    {"replicationSeeds", seeds},
                    {"wallTimeSeconds", row.wallTimeSeconds},
                    {"degenerateClusters", row.degenerateClusters}});
    if (progress)
      *progress << "  mean=" << number(row.meanPHat) << " var=" << number(row.empiricalVariance) << " ("
                << row.wallTimeSeconds << " s)" << std::endl;
    result.rows.push_back(std::move(row));
  }
  result.manifest["runs"] = runs;
  result.manifest["wallTimeSeconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string formatCsv(const std::vector<ResultRow>& rows, bool timing) {
  std::ostringstream os;
  os << "system,method,N,n,alphaParams,R,meanPHat,empiricalVariance,meanESSperStep";
  if (timing) os << ",wallTimeSeconds";
  os << ",seed\n";
  for (const auto& r : rows) {
    os << r.system << ',' << r.method << ',' << r.N << ',' << (r.n ? std::to_string(*r.n) : "NA") << ','
       << (r.alphaParams.empty() ? "NA" : r.alphaParams) << ',' << r.R << ',' << number(r.meanPHat) << ',' << number(r.empiricalVariance) << ','
       << (r.meanESSperStep ? number(*r.meanESSperStep) : "NA");
    if (timing) os << ',' << number(r.wallTimeSeconds);
    os << ',' << r.seed << '\n';
  }
  return os.str();
}

std::string formatJson(const std::vector<ResultRow>& rows, bool timing) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["system"] = r.system;
    j["method"] = r.method;
    j["N"] = r.N;
    j["n"] = r.n ? nlohmann::ordered_json(*r.n) : nlohmann::ordered_json(nullptr);
    j["alphaParams"] = r.alphaParams;
    j["R"] = r.R;
    j["meanPHat"] = r.meanPHat;
    j["empiricalVariance"] = r.empiricalVariance;
    j["meanESSperStep"] = r.meanESSperStep ? nlohmann::ordered_json(*r.meanESSperStep) : nlohmann::ordered_json(nullptr);
    if (timing) j["wallTimeSeconds"] = r.wallTimeSeconds;
    j["seed"] = r.seed;
    j["pHat"] = r.estimates;
    out.push_back(j);
  }
  return out.dump(2) + "\n";
}

ExperimentConfig benchmarkTableConfig(int table) {
  auto methodEntry = [](Method m, std::size_t n, std::size_t R) {
    MethodConfig mc;
    mc.method = m;
    mc.N = 10000;
    mc.n = n;
    mc.replications = R;
    return mc;
  };
  ExperimentConfig cfg;
  cfg.workers = defaultWorkerCount();
  if (table == 1) {
    cfg.system.kind = SystemKind::HeatedRoom;
    cfg.potential.kind = PotentialKind::UAlpha;
    cfg.potential.alpha = 1.1;
    const std::size_t R = 30;
    cfg.methods.push_back(methodEntry(Method::MC, 1, R));
    for (std::size_t n : {5, 10}) {
      cfg.methods.push_back(methodEntry(Method::IPS, n, R));
      cfg.methods.push_back(methodEntry(Method::IPSM, n, R));
    }
    cfg.seed = 20240101;
  } else if (table == 2) {
    cfg.system.kind = SystemKind::Dam;
    cfg.potential.kind = PotentialKind::DamExponential;
    cfg.potential.alpha1 = -0.9;
    cfg.potential.alpha2 = -1.0;
    const std::size_t R = 20;
    cfg.methods.push_back(methodEntry(Method::MC, 1, R));
    cfg.methods.push_back(methodEntry(Method::IPS, 5, R));
    cfg.methods.push_back(methodEntry(Method::IPSM, 5, R));
    cfg.seed = 20240202;
  } else {
    throw std::invalid_argument("table must be 1 or 2");
  }
  cfg.resolve();
  return cfg;
}

}  // namespace pdmp
