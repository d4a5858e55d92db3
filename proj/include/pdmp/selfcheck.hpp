#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pdmp/systems.hpp"

namespace pdmp {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfCheckOptions {
  bool injectKernelBug = false;    // scales every kernel by 0.99
  bool rejectionFallback = false;  // avoiding draws by rejection instead of memorization
  std::uint64_t seed = 7;
  std::size_t workers = 1;
};

/// Heated-room segment used to compare memorization with rejection.
struct MemorizationInstance {
  HeatedRoomParams params;
  State start;
  double dt = 0.0;
};

MemorizationInstance memorizationInstance();

/// Fast oracle suite. Prints one PASS/FAIL line per check to `out`.
std::vector<CheckResult> runSelfCheck(const SelfCheckOptions& options, std::ostream& out);

}  // namespace pdmp
