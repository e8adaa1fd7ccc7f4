#include "qwalk/step_policy.hpp"

#include <stdexcept>

namespace qwalk {

namespace {

template <typename... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <typename... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

void require_positive(int value, const char* what) {
  if (value < 1) {
    throw std::invalid_argument(std::string(what) + " must be >= 1, got " + std::to_string(value));
  }
}

}  // namespace

std::uint64_t uniform_in_range(SplitMix64& gen, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_in_range: n must be >= 1");
  // 2^64 mod n, computed without 128-bit arithmetic.
  const std::uint64_t excess = (0 - n) % n;
  // Accept x < 2^64 - excess, the largest multiple of n representable.
  const std::uint64_t limit = 0 - excess;
  for (;;) {
    const std::uint64_t x = gen.next();
    if (excess == 0 || x < limit) return x % n + 1;
  }
}

void validate(const StepPolicy& policy) {
  std::visit(overloaded{
                 [](const policy::Unit&) {},
                 [](const policy::FixedUnbiased& p) { require_positive(p.size, "step size"); },
                 [](const policy::Biased& p) {
                   require_positive(p.left, "left step size");
                   require_positive(p.right, "right step size");
                 },
                 [](const policy::RandomInterval& p) { require_positive(p.max, "interval max"); },
             },
             policy);
}

StepSizes steps_for(const StepPolicy& policy, SplitMix64& gen, std::size_t t) {
  if (t < 1) throw std::invalid_argument("steps_for: step index is 1-based");
  return std::visit(overloaded{
                        [](const policy::Unit&) { return StepSizes{1, 1}; },
                        [](const policy::FixedUnbiased& p) { return StepSizes{p.size, p.size}; },
                        [](const policy::Biased& p) { return StepSizes{p.left, p.right}; },
                        [&gen](const policy::RandomInterval& p) {
                          const auto j = static_cast<int>(
                              uniform_in_range(gen, static_cast<std::uint64_t>(p.max)));
                          return StepSizes{j, j};
                        },
                    },
                    policy);
}

bool consumes_randomness(const StepPolicy& policy) {
  return std::holds_alternative<policy::RandomInterval>(policy);
}

std::string describe(const StepPolicy& policy) {
  return std::visit(
      overloaded{
          [](const policy::Unit&) { return std::string("unit"); },
          [](const policy::FixedUnbiased& p) { return "unbiased(s=" + std::to_string(p.size) + ")"; },
          [](const policy::Biased& p) {
            return "biased(k=" + std::to_string(p.left) + ",l=" + std::to_string(p.right) + ")";
          },
          [](const policy::RandomInterval& p) { return "random(n=" + std::to_string(p.max) + ")"; },
      },
      policy);
}

}  // namespace qwalk
