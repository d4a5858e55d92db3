#pragma once

#include <array>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdmp {

inline constexpr std::size_t kMaxVariables = 4;
inline constexpr std::size_t kMaxComponents = 4;

/// Discrete status of one component. Systems map their own labels onto
/// these (a valve that is Open is On, a stuck valve is Failed).
enum class Status : std::uint8_t { On, Off, Failed };

const char* toString(Status s);

/// Inline, fixed-capacity vector. States are copied into particle arrays of
/// tens of thousands of entries, so they must not own heap memory.
template <class T, std::size_t Capacity>
class StaticVector {
 public:
  StaticVector() = default;
  StaticVector(std::initializer_list<T> values) {
    if (values.size() > Capacity) throw std::length_error("StaticVector capacity exceeded");
    for (const T& v : values) data_[size_++] = v;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  static constexpr std::size_t capacity() noexcept { return Capacity; }

  void push_back(const T& v) {
    if (size_ == Capacity) throw std::length_error("StaticVector capacity exceeded");
    data_[size_++] = v;
  }

  T& operator[](std::size_t i) noexcept {
    assert(i < size_);
    return data_[i];
  }
  const T& operator[](std::size_t i) const noexcept {
    assert(i < size_);
    return data_[i];
  }

  T* begin() noexcept { return data_.data(); }
  T* end() noexcept { return data_.data() + size_; }
  const T* begin() const noexcept { return data_.data(); }
  const T* end() const noexcept { return data_.data() + size_; }

  friend bool operator==(const StaticVector& a, const StaticVector& b) noexcept {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i)
      if (!(a.data_[i] == b.data_[i])) return false;
    return true;
  }

 private:
  std::array<T, Capacity> data_{};
  std::size_t size_ = 0;
};

using Physical = StaticVector<double, kMaxVariables>;
using Mode = StaticVector<Status, kMaxComponents>;

/// Instantaneous PDMP state: physical variables paired with the mode.
struct State {
  Physical x;
  Mode m;
};

/// Structural state equality: exact on the mode, absolute `tol` per
/// physical coordinate.
bool sameState(const State& a, const State& b, double tol = 1e-12) noexcept;

std::string describe(const State& z);

struct JumpRecord {
  double time = 0.0;  // relative to the start of the skeleton
  State departure;
  State arrival;
  bool forced = false;
};

/// Skeleton of a trajectory of length `horizon`: its initial state and the
/// ordered jumps. Jump times are strictly increasing in (0, horizon].
struct TrajectorySkeleton {
  State initial;
  double horizon = 0.0;
  std::vector<JumpRecord> jumps;
};

/// Segment-wise equality used to decide whether a trajectory followed a
/// given (preponderant) skeleton.
bool sameSkeleton(const TrajectorySkeleton& a, const TrajectorySkeleton& b, double timeTol = 1e-9) noexcept;

struct SurvivalBreakpoint {
  double time = 0.0;
  double before = 1.0;  // survival just before the jump
  double after = 1.0;   // survival just after it (before * kernel mass)
};

/// Piecewise survival function of a preponderant trajectory, memorized at
/// its jump times. `terminal` is the probability of the whole segment.
/// Records built from trajectories containing spontaneous jumps stop at the
/// first such jump and have `preponderant == false`.
struct SurvivalRecord {
  std::vector<SurvivalBreakpoint> breakpoints;
  double terminal = 1.0;
  bool preponderant = true;
};

struct Transition {
  State arrival;
  double probability = 0.0;
  bool nominal = false;  // the control target of a boundary kernel
};

/// Discrete jump law from one departure state.
struct TransitionTable {
  std::vector<Transition> entries;

  double totalMass() const noexcept;
};

/// Rate of a single spontaneous transition out of the current mode.
struct RateEntry {
  State arrival;
  double rate = 0.0;
};

/// Thrown when a model violates a structural requirement (zero-rate state
/// with no reachable boundary, kernel without a nominal branch, ...).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pdmp
