#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pdmp/config.hpp"
#include "json.hpp"

namespace pdmp {

struct ResultRow {
  std::string system;
  std::string method;
  std::size_t N = 0;
  std::optional<std::size_t> n;  // absent for mc
  std::string alphaParams;
  std::size_t R = 0;
  double meanPHat = 0.0;
  double empiricalVariance = 0.0;
  std::optional<double> meanESSperStep;
  double wallTimeSeconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> estimates;
  std::size_t degenerateClusters = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  nlohmann::ordered_json manifest;
};

/// Runs every configured method. Progress lines go to `progress` when set.
ExperimentResult runExperiment(const ExperimentConfig& config, std::ostream* progress = nullptr);

/// Result serializations. Wall times are included only when `timing` is
/// set, so that the default output is identical across runs.
std::string formatCsv(const std::vector<ResultRow>& rows, bool timing = false);
std::string formatJson(const std::vector<ResultRow>& rows, bool timing = false);

/// Resolved configuration, defaults, tolerances and build information.
nlohmann::ordered_json configManifest(const ExperimentConfig& config);

/// Desk-scale configurations of the two benchmark tables (1 or 2).
ExperimentConfig benchmarkTableConfig(int table);

}  // namespace pdmp
