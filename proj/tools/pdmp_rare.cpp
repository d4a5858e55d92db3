#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "pdmp/experiment.hpp"
#include "pdmp/oracle.hpp"
#include "pdmp/parallel.hpp"
#include "pdmp/selfcheck.hpp"

namespace {

struct OutputFlags {
  std::string out;
  std::string format;
  bool toStdout = false;
  bool timing = false;
};

void addOutputFlags(CLI::App* app, OutputFlags& flags) {
  app->add_option("--out", flags.out, "result file; the manifest is written next to it");
  app->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_flag("--stdout", flags.toStdout, "print results on standard output");
  app->add_flag("--timing", flags.timing, "include wall times in the results");
}

bool writeFile(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << content;
  return static_cast<bool>(f);
}

int emit(const pdmp::ExperimentConfig& cfg, const OutputFlags& flags) {
  const auto result = pdmp::runExperiment(cfg, &std::cerr);
  const bool json = flags.format.empty() ? cfg.format == pdmp::OutputFormat::Json : flags.format == "json";
  const std::string text = json ? pdmp::formatJson(result.rows, flags.timing) : pdmp::formatCsv(result.rows, flags.timing);
  const std::string path = flags.out.empty() ? cfg.outputPath : flags.out;
  if (!path.empty()) {
    if (!writeFile(path, text) || !writeFile(path + ".manifest.json", result.manifest.dump(2) + "\n")) {
      std::cerr << "error: cannot write " << path << '\n';
      return 3;
    }
    std::cerr << "wrote " << path << " and " << path << ".manifest.json\n";
  }
  if (flags.toStdout || path.empty()) std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rare-event estimation for piecewise deterministic Markov processes"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t workers = pdmp::defaultWorkerCount();
  bool seedGiven = false;
  bool workersGiven = false;

  auto* run = app.add_subcommand("run", "run the experiment described by a configuration file");
  std::string configPath;
  OutputFlags runFlags;
  run->add_option("config", configPath, "YAML configuration")->required();
  run->add_option("--seed", seed, "master seed (overrides the configuration)");
  run->add_option("--workers", workers, "worker threads (default: PDMP_WORKERS or 1)")->check(CLI::PositiveNumber);
  addOutputFlags(run, runFlags);

  auto* tables = app.add_subcommand("tables", "desk-scale reproduction of the benchmark tables");
  int table = 1;
  std::size_t replications = 0;
  std::size_t particles = 0;
  OutputFlags tableFlags;
  tables->add_option("--paper", table, "table to reproduce")->required()->check(CLI::IsMember({1, 2}));
  tables->add_option("--seed", seed, "master seed");
  tables->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  tables->add_option("--replications", replications, "override R")->check(CLI::PositiveNumber);
  tables->add_option("--particles", particles, "override N")->check(CLI::Range(2, 100000000));
  addOutputFlags(tables, tableFlags);

  auto* selfcheck = app.add_subcommand("selfcheck", "run the fast oracle suite");
  pdmp::SelfCheckOptions checkOptions;
  selfcheck->add_option("--seed", checkOptions.seed, "seed of the checks");
  selfcheck->add_flag("--inject-kernel-bug", checkOptions.injectKernelBug)->group("");
  selfcheck->add_flag("--rejection-fallback", checkOptions.rejectionFallback)->group("");

  auto* oracle = app.add_subcommand("oracle", "closed-form reference values");
  oracle->group("");
  double lambda = 0.1;
  double tf = 10.0;
  oracle->add_option("--lambda", lambda);
  oracle->add_option("--tf", tf);

  CLI11_PARSE(app, argc, argv);
  seedGiven = run->count("--seed") + tables->count("--seed") > 0;
  workersGiven = run->count("--workers") + tables->count("--workers") > 0;

  try {
    if (*run || *tables) {
      pdmp::ExperimentConfig cfg = *run ? pdmp::loadConfig(configPath) : pdmp::benchmarkTableConfig(table);
      if (seedGiven) cfg.seed = seed;
      if (workersGiven) cfg.workers = workers;
      for (auto& m : cfg.methods) {
        if (replications) m.replications = replications;
        if (particles) m.N = particles;
      }
      if (seedGiven) cfg.methodSeedSet.assign(cfg.methods.size(), false);
      cfg.resolve();
      return emit(cfg, *run ? runFlags : tableFlags);
    }
    if (*selfcheck) {
      const auto results = pdmp::runSelfCheck(checkOptions, std::cout);
      for (const auto& r : results)
        if (!r.passed) return 1;
      return 0;
    }
    if (*oracle) {
      std::cout.precision(17);
      std::cout << "coldStandbyExactP " << pdmp::coldStandbyExactP(lambda, tf) << '\n'
                << "coldStandbyGStar " << pdmp::coldStandbyGStar(lambda, tf) << '\n';
      return 0;
    }
  } catch (const pdmp::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const pdmp::OracleExhaustedError& e) {
    std::cerr << "oracle exhausted: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
