#include "pdmp/selfcheck.hpp"

#include <cmath>
#include <memory>
#include <ostream>
#include <sstream>

#include "pdmp/memorization.hpp"
#include "pdmp/oracle.hpp"
#include "pdmp/stats.hpp"

namespace pdmp {

namespace {

// Forwards to a model but loses 1% of every kernel's mass.
class LeakyKernelModel final : public PdmpModel {
 public:
  explicit LeakyKernelModel(std::shared_ptr<const PdmpModel> base) : base_(std::move(base)) {}

  std::string name() const override { return base_->name(); }
  std::size_t componentCount() const override { return base_->componentCount(); }
  std::size_t dimension() const override { return base_->dimension(); }
  State initialState() const override { return base_->initialState(); }
  double horizon() const override { return base_->horizon(); }
  State flow(const State& z, double dt) const override { return base_->flow(z, dt); }
  double boundaryHitTime(const State& z) const override { return base_->boundaryHitTime(z); }
  std::vector<RateEntry> transitionRates(const State& z) const override { return base_->transitionRates(z); }
  double cumulativeRate(const State& z, double t) const override { return base_->cumulativeRate(z, t); }
  TransitionTable interiorKernel(const State& z) const override { return leak(base_->interiorKernel(z)); }
  TransitionTable boundaryKernel(const State& z) const override { return leak(base_->boundaryKernel(z)); }
  bool isCritical(const State& z) const override { return base_->isCritical(z); }
  double criticalHitTime(const State& z, double limit) const override { return base_->criticalHitTime(z, limit); }

 private:
  static TransitionTable leak(TransitionTable t) {
    for (auto& e : t.entries) e.probability *= 0.99;
    return t;
  }
  std::shared_ptr<const PdmpModel> base_;
};

std::vector<std::shared_ptr<const PdmpModel>> checkedModels(bool leaky) {
  HeatedRoomParams demanding;
  demanding.gamma = 0.05;
  DamParams both;
  both.standbyCanStick = true;
  std::vector<std::shared_ptr<const PdmpModel>> models{heatedRoomModel({}), heatedRoomModel(demanding),
                                                       damModel({}), damModel(both), coldStandbyModel({})};
  if (leaky)
    for (auto& m : models) m = std::make_shared<LeakyKernelModel>(m);
  return models;
}

CheckResult kernelNormalization(const SelfCheckOptions& opt) {
  CheckResult r{"kernel normalization", true, ""};
  std::size_t tables = 0;
  for (const auto& model : checkedModels(opt.injectKernelBug)) {
    for (std::uint32_t i = 0; i < 200; ++i) {
      RandomStream rng(opt.seed, StreamDomain::Test, 1, i);
      const auto out = simulate(*model, model->initialState(), model->horizon(), rng, {true, false});
      for (const auto& j : out.skeleton->jumps) {
        const auto table = j.forced ? model->boundaryKernel(j.departure) : model->interiorKernel(j.departure);
        ++tables;
        const std::string err = validateTable(table, j.departure);
        if (!err.empty()) {
          r.passed = false;
          r.detail = model->name() + ": " + err;
          return r;
        }
      }
    }
  }
  r.detail = std::to_string(tables) + " tables sum to 1 within 1e-12";
  return r;
}

CheckResult flowSemigroup(const SelfCheckOptions& opt) {
  CheckResult r{"flow semigroup", true, ""};
  std::size_t triples = 0;
  for (const auto& model : checkedModels(false)) {
    RandomStream rng(opt.seed, StreamDomain::Test, 2, 0);
    for (std::uint32_t i = 0; i < 1000; ++i) {
      RandomStream sim(opt.seed, StreamDomain::Test, 3, i);
      const auto out = simulate(*model, model->initialState(), model->horizon(), sim, {true, false});
      const State z = out.skeleton->jumps.empty() ? model->initialState()
                                                  : out.skeleton->jumps[i % out.skeleton->jumps.size()].arrival;
      const double ts = std::min(model->boundaryHitTime(z), 50.0);
      const double s = rng.uniform() * ts;
      const double u = rng.uniform() * (ts - s);
      const State a = model->flow(model->flow(z, s), u);
      const State b = model->flow(z, s + u);
      ++triples;
      if (!sameState(a, b, 1e-9) || !sameState(model->flow(z, 0.0), z, 0.0)) {
        r.passed = false;
        r.detail = model->name() + ": semigroup broken from " + describe(z);
        return r;
      }
    }
  }
  r.detail = std::to_string(triples) + " triples within 1e-9";
  return r;
}

CheckResult atomMass(const SelfCheckOptions& opt) {
  const ClockModel clock({0.2, 5.0, 1.0, 10.0});
  const State z = clock.initialState();
  RandomStream rng(opt.seed, StreamDomain::Test, 4, 0);
  const std::size_t M = 100000;
  std::size_t forced = 0;
  for (std::size_t i = 0; i < M; ++i) forced += sampleJumpTime(clock, z, rng).forced;
  const double p = std::exp(-1.0);
  std::ostringstream os;
  os << "forced fraction " << static_cast<double>(forced) / M << " vs " << p;
  return {"atom mass", stats::withinBinomial(forced, M, p), os.str()};
}

CheckResult memorizationAgreement(const SelfCheckOptions& opt) {
  const auto inst = memorizationInstance();
  const HeatedRoomModel model(inst.params);
  const auto ext = preponderantExtension(model, inst.start, inst.dt);
  const std::size_t M = 2000;
  std::vector<double> avoiding;
  std::vector<double> rejection;
  for (std::uint32_t i = 0; i < M; ++i) {
    RandomStream a(opt.seed, StreamDomain::Test, 5, i);
    if (opt.rejectionFallback) {
      const auto d = rejectionExtend(model, inst.start, inst.dt, ext.segment(), a);
      avoiding.push_back(differentiationTimeOf(ext.segment(), *d.outcome.skeleton));
    } else {
      const auto out = sampleAvoidingExtension(model, ext, a, {true, false});
      avoiding.push_back(differentiationTimeOf(ext.segment(), *out.skeleton));
    }
    RandomStream b(opt.seed, StreamDomain::Test, 6, i);
    const auto d = rejectionExtend(model, inst.start, inst.dt, ext.segment(), b);
    rejection.push_back(differentiationTimeOf(ext.segment(), *d.outcome.skeleton));
  }
  const double d = stats::ksDistance(avoiding, rejection);
  const double pv = stats::ksTwoSamplePValue(d, M, M);
  std::ostringstream os;
  os << (opt.rejectionFallback ? "rejection" : "memorization") << " vs rejection: KS " << d << ", p-value " << pv;
  return {"memorization vs rejection", pv >= 0.01, os.str()};
}

}  // namespace

MemorizationInstance memorizationInstance() {
  MemorizationInstance inst;
  inst.params.gamma = 0.05;
  inst.start = State{Physical{20.0}, Mode{Status::Off, Status::Off}};
  inst.dt = 24.0;
  return inst;
}

std::vector<CheckResult> runSelfCheck(const SelfCheckOptions& options, std::ostream& out) {
  std::vector<CheckResult> results;
  using Check = CheckResult (*)(const SelfCheckOptions&);
  const std::pair<const char*, Check> checks[] = {{"kernel normalization", kernelNormalization},
                                                  {"flow semigroup", flowSemigroup},
                                                  {"atom mass", atomMass},
                                                  {"memorization vs rejection", memorizationAgreement}};
  for (const auto& [name, check] : checks) {
    CheckResult r{name, false, ""};
    try {
      r = check(options);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    results.push_back(r);
  }
  return results;
}

}  // namespace pdmp
