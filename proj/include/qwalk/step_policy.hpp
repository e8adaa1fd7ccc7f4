#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "qwalk/spinor_field.hpp"

namespace qwalk {

/// splitmix64: state advances by the golden-ratio increment and each output
/// is the xor-shift-multiply finalizer of the new state. Bit-exact across
/// platforms.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kIncrement = 0x9E3779B97F4A7C15ULL;

  constexpr SplitMix64() = default;
  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += kIncrement;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  [[nodiscard]] constexpr std::uint64_t state() const { return state_; }

  friend constexpr bool operator==(const SplitMix64&, const SplitMix64&) = default;

 private:
  std::uint64_t state_ = 0;
};

/// Uniform draw from {1, ..., n} by rejection above the largest multiple of
/// n that fits in 64 bits. Throws std::invalid_argument for n == 0.
std::uint64_t uniform_in_range(SplitMix64& gen, std::uint64_t n);

namespace policy {

/// Standard walk, both sizes 1.
struct Unit {
  friend bool operator==(const Unit&, const Unit&) = default;
};

/// Equal left and right size `size`.
struct FixedUnbiased {
  int size = 1;
  friend bool operator==(const FixedUnbiased&, const FixedUnbiased&) = default;
};

/// Left step size `left` and right step size `right`.
struct Biased {
  int left = 1;
  int right = 1;
  friend bool operator==(const Biased&, const Biased&) = default;
};

/// One j drawn uniformly from {1, ..., max} per step, used for both
/// directions.
struct RandomInterval {
  int max = 1;
  friend bool operator==(const RandomInterval&, const RandomInterval&) = default;
};

}  // namespace policy

using StepPolicy =
    std::variant<policy::Unit, policy::FixedUnbiased, policy::Biased, policy::RandomInterval>;

/// Throws std::invalid_argument unless every size parameter is >= 1.
void validate(const StepPolicy& policy);

/// Sizes for step `t` (1-based). Only RandomInterval advances `gen`.
StepSizes steps_for(const StepPolicy& policy, SplitMix64& gen, std::size_t t);

[[nodiscard]] bool consumes_randomness(const StepPolicy& policy);

/// Short human-readable description, e.g. "biased(k=3,l=1)".
std::string describe(const StepPolicy& policy);

}  // namespace qwalk
