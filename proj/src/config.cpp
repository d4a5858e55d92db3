#include "pdmp/config.hpp"

#include <yaml-cpp/yaml.h>

#include "pdmp/parallel.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace pdmp {

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + message),
      line_(line) {}

const char* toString(SystemKind kind) {
  switch (kind) {
    case SystemKind::HeatedRoom: return "heatedRoom";
    case SystemKind::Dam: return "dam";
    case SystemKind::ColdStandby: return "coldStandby";
  }
  return "?";
}

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    const int line = node.IsDefined() && node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
    throw ConfigError(source_, line, message);
  }

  void requireMap(const YAML::Node& node, const std::string& what) const {
    if (!node.IsMap()) fail(node, what + " must be a mapping");
  }

  void allowKeys(const YAML::Node& node, const std::set<std::string>& keys, const std::string& what) const {
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!keys.count(key)) fail(kv.first, "unknown key '" + key + "' in " + what);
    }
  }

  template <class T>
  void read(const YAML::Node& parent, const char* key, T& out) const {
    const YAML::Node node = parent[key];
    if (!node) return;
    try {
      out = node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, std::string("invalid value for '") + key + "'");
    }
  }

  Status status(const YAML::Node& node) const {
    const auto s = node.as<std::string>();
    if (s == "On" || s == "Open") return Status::On;
    if (s == "Off" || s == "Closed") return Status::Off;
    if (s == "F" || s == "Failed" || s == "Stuck") return Status::Failed;
    fail(node, "unknown component status '" + s + "'");
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

void readHeatedRoom(const Reader& r, const YAML::Node& p, HeatedRoomParams& h) {
  r.allowKeys(p,
              {"xe", "beta1", "beta2", "xmin", "xmax", "gamma", "failA", "failB", "repairRate", "x0", "m0", "tf",
               "numericFlow", "flowStep"},
              "heatedRoom params");
  r.read(p, "xe", h.xe);
  r.read(p, "beta1", h.beta1);
  r.read(p, "beta2", h.beta2);
  r.read(p, "xmin", h.xmin);
  r.read(p, "xmax", h.xmax);
  r.read(p, "gamma", h.gamma);
  r.read(p, "failA", h.failA);
  r.read(p, "failB", h.failB);
  r.read(p, "repairRate", h.repairRate);
  r.read(p, "x0", h.x0);
  r.read(p, "tf", h.tf);
  r.read(p, "numericFlow", h.numericFlow);
  r.read(p, "flowStep", h.flowStep);
  if (const auto m = p["m0"]) {
    if (!m.IsSequence() || m.size() != 2) r.fail(m, "m0 must be a list of two statuses");
    h.m0 = Mode{r.status(m[0]), r.status(m[1])};
  }
}

void readDam(const Reader& r, const YAML::Node& p, DamParams& d) {
  r.allowKeys(p, {"inflow", "surface", "xlim", "stickRate", "repairRate", "tf", "x0", "standbyCanStick"},
              "dam params");
  r.read(p, "inflow", d.inflow);
  r.read(p, "surface", d.surface);
  r.read(p, "xlim", d.xlim);
  r.read(p, "stickRate", d.stickRate);
  r.read(p, "repairRate", d.repairRate);
  r.read(p, "tf", d.tf);
  r.read(p, "x0", d.x0);
  r.read(p, "standbyCanStick", d.standbyCanStick);
}

void readColdStandby(const Reader& r, const YAML::Node& p, ColdStandbyParams& c) {
  r.allowKeys(p, {"failRate", "tf"}, "coldStandby params");
  r.read(p, "failRate", c.failRate);
  r.read(p, "tf", c.tf);
}

}  // namespace

ExperimentConfig parseConfig(const std::string& text, const std::string& source) {
  const Reader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line + 1, e.msg);
  }
  if (!root.IsMap()) throw ConfigError(source, 0, "top level must be a mapping");
  r.allowKeys(root, {"system", "potential", "methods", "seed", "workers", "output"}, "configuration");

  ExperimentConfig cfg;
  cfg.workers = defaultWorkerCount();
  const YAML::Node sys = root["system"];
  if (!sys) throw ConfigError(source, 0, "missing 'system' section");
  r.requireMap(sys, "system");
  r.allowKeys(sys, {"name", "params"}, "system");
  std::string name;
  r.read(sys, "name", name);
  const YAML::Node params = sys["params"] ? sys["params"] : YAML::Node(YAML::NodeType::Map);
  if (sys["params"]) r.requireMap(params, "system.params");
  bool damPotentialDefault = false;
  if (name == "heatedRoom") {
    cfg.system.kind = SystemKind::HeatedRoom;
    readHeatedRoom(r, params, cfg.system.heatedRoom);
  } else if (name == "dam") {
    cfg.system.kind = SystemKind::Dam;
    readDam(r, params, cfg.system.dam);
    damPotentialDefault = true;
  } else if (name == "coldStandby") {
    cfg.system.kind = SystemKind::ColdStandby;
    readColdStandby(r, params, cfg.system.coldStandby);
  } else {
    r.fail(sys["name"] ? sys["name"] : sys, "unknown system '" + name + "' (expected heatedRoom, dam or coldStandby)");
  }

  cfg.potential.xlim = cfg.system.dam.xlim;
  if (damPotentialDefault) cfg.potential.kind = PotentialKind::DamExponential;
  if (const auto pot = root["potential"]) {
    r.requireMap(pot, "potential");
    r.allowKeys(pot, {"kind", "alpha", "alpha1", "alpha2"}, "potential");
    if (pot["kind"]) {
      try {
        cfg.potential.kind = potentialKindFromString(pot["kind"].as<std::string>());
      } catch (const std::invalid_argument& e) {
        r.fail(pot["kind"], e.what());
      }
      if (cfg.potential.kind == PotentialKind::Custom) r.fail(pot["kind"], "custom potentials are library-only");
    }
    r.read(pot, "alpha", cfg.potential.alpha);
    r.read(pot, "alpha1", cfg.potential.alpha1);
    r.read(pot, "alpha2", cfg.potential.alpha2);
  }

  r.read(root, "seed", cfg.seed);
  r.read(root, "workers", cfg.workers);
  if (root["workers"] && cfg.workers < 1) r.fail(root["workers"], "workers must be positive");

  const YAML::Node methods = root["methods"];
  if (!methods || !methods.IsSequence() || methods.size() == 0)
    r.fail(methods ? methods : root, "'methods' must be a nonempty list");
  for (const auto& m : methods) {
    r.requireMap(m, "method entry");
    r.allowKeys(m, {"method", "N", "n", "e", "R", "seed"}, "method entry");
    MethodConfig mc;
    std::string method;
    r.read(m, "method", method);
    try {
      mc.method = methodFromString(method);
    } catch (const std::invalid_argument& e) {
      r.fail(m["method"] ? m["method"] : m, e.what());
    }
    r.read(m, "N", mc.N);
    r.read(m, "n", mc.n);
    r.read(m, "e", mc.essThreshold);
    r.read(m, "R", mc.replications);
    r.read(m, "seed", mc.seed);
    try {
      mc.validate();
    } catch (const std::invalid_argument& e) {
      r.fail(m, e.what());
    }
    cfg.methods.push_back(mc);
    cfg.methodSeedSet.push_back(static_cast<bool>(m["seed"]));
  }

  if (const auto out = root["output"]) {
    r.requireMap(out, "output");
    r.allowKeys(out, {"path", "format"}, "output");
    r.read(out, "path", cfg.outputPath);
    if (out["format"]) {
      const auto f = out["format"].as<std::string>();
      if (f == "csv")
        cfg.format = OutputFormat::Csv;
      else if (f == "json")
        cfg.format = OutputFormat::Json;
      else
        r.fail(out["format"], "format must be csv or json");
    }
  }

  try {
    buildModel(cfg.system);
  } catch (const ParameterError& e) {
    r.fail(params.IsDefined() && sys["params"] ? sys["params"] : sys, e.what());
  } catch (const std::exception& e) {
    r.fail(sys, e.what());
  }
  cfg.resolve();
  return cfg;
}

ExperimentConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str(), path);
}

void ExperimentConfig::resolve() {
  methodSeedSet.resize(methods.size(), false);
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (!methodSeedSet[i]) methods[i].seed = seed;
    methods[i].workers = workers;
  }
  if (system.kind == SystemKind::Dam) potential.xlim = system.dam.xlim;
}

void ExperimentConfig::validate() const {
  buildModel(system);
  if (methods.empty()) throw std::invalid_argument("no methods configured");
  for (const auto& m : methods) m.validate();
  if (workers < 1) throw std::invalid_argument("workers must be positive");
}

std::shared_ptr<const PdmpModel> buildModel(const SystemConfig& system) {
  switch (system.kind) {
    case SystemKind::HeatedRoom: return heatedRoomModel(system.heatedRoom);
    case SystemKind::Dam: return damModel(system.dam);
    case SystemKind::ColdStandby: return coldStandbyModel(system.coldStandby);
  }
  throw std::invalid_argument("unknown system");
}

}  // namespace pdmp
