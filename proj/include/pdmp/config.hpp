#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdmp/potentials.hpp"
#include "pdmp/samplers.hpp"
#include "pdmp/systems.hpp"

namespace pdmp {

/// Configuration error with the 1-based line of the offending node (0 when
/// unknown).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class SystemKind { HeatedRoom, Dam, ColdStandby };

const char* toString(SystemKind kind);

struct SystemConfig {
  SystemKind kind = SystemKind::ColdStandby;
  HeatedRoomParams heatedRoom;
  DamParams dam;
  ColdStandbyParams coldStandby;
};

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  SystemConfig system;
  PotentialSpec potential;
  std::vector<MethodConfig> methods;
  std::vector<bool> methodSeedSet;  // whether each method carried its own seed
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string outputPath;
  OutputFormat format = OutputFormat::Csv;

  /// Propagates the experiment seed and worker count to the methods.
  void resolve();
  void validate() const;
};

ExperimentConfig parseConfig(const std::string& text, const std::string& source = "<config>");
ExperimentConfig loadConfig(const std::string& path);

std::shared_ptr<const PdmpModel> buildModel(const SystemConfig& system);

}  // namespace pdmp
