#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pdmp {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream domains keep the counters of unrelated consumers disjoint.
enum class StreamDomain : std::uint32_t {
  Propagation = 0,
  Selection = 1,
  Oracle = 2,
  Test = 3,
};

/// Counter-based random stream. Each (seed, domain, step, index) tuple
/// addresses an independent sequence, so a particle's draws do not depend on
/// which worker runs it or in what order.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, StreamDomain domain, std::uint32_t step, std::uint32_t index) noexcept;
  explicit RandomStream(std::uint64_t seed) noexcept : RandomStream(seed, StreamDomain::Test, 0, 0) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

/// Seed of replication `r` of an experiment seeded with `master`.
std::uint64_t replicationSeed(std::uint64_t master, std::uint64_t r) noexcept;

}  // namespace pdmp
