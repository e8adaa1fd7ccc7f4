#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/distribution.hpp"
#include "qwalk/engine.hpp"

namespace qwalk::cli {

enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kUsage = 2,
  kVerifyFailed = 3,
};

/// Environment variable overriding the walk step cap.
inline constexpr const char* kStepCapVariable = "QWALK_MAX_STEPS";

/// Largest step count `verify` accepts.
inline constexpr std::size_t kVerifyMaxSteps = 12;

/// "pi", "pi/<d>" (d a positive integer) or a plain radian literal. The pi
/// forms round to the double nearest the exact value. Throws
/// std::invalid_argument on anything else.
double parse_theta(std::string_view text);

/// Decimal or 0x-prefixed hexadecimal unsigned 64-bit integer.
std::uint64_t parse_seed(std::string_view text);

/// Comma-separated list of parse_seed values.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

/// Step cap from kStepCapVariable, or kDefaultStepCap when unset.
std::size_t step_cap_from_environment();

/// printf "%.17g".
std::string format_real(double value);

/// Header `x,probability`, ascending x, `\n` line endings.
void write_distribution_csv(std::ostream& out, const Distribution& d);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<StepSizes> replayed_steps;

  [[nodiscard]] bool passed() const;
  /// Null when every check passed.
  [[nodiscard]] const CheckResult* first_failure() const;
};

struct VerifyOptions {
  /// Test hook: perturbs the engine's final distribution before checking.
  bool inject_fault = false;
};

/// Runs the invariant suite (norm, parity, scaling, affine remap, oracle
/// agreement) applicable to the configured walk. Throws
/// std::invalid_argument for more than kVerifyMaxSteps steps.
VerifyReport verify(const WalkConfig& config, VerifyOptions options = {});

/// Entry point shared by the executable and the tests. Returns an ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qwalk::cli
