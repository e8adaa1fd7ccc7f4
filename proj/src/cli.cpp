#include "qwalk/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <variant>

#include <CLI11.hpp>

#include "qwalk/oracle.hpp"
#include "qwalk/stats.hpp"

namespace qwalk::cli {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kDistributionTolerance = 1e-12;
constexpr double kSigmaTolerance = 1e-9;

/// Command-line error that maps to ExitCode::kUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_whole(std::string_view text, T& value, int base = 10) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  std::from_chars_result result;
  if constexpr (std::is_floating_point_v<T>) {
    result = std::from_chars(first, last, value);
  } else {
    result = std::from_chars(first, last, value, base);
  }
  return result.ec == std::errc{} && result.ptr == last;
}

std::string join_steps(const std::vector<StepSizes>& steps, bool equal_sizes) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ',';
    if (equal_sizes) {
      out += std::to_string(steps[i].left);
    } else {
      out += '(' + std::to_string(steps[i].left) + ' ' + std::to_string(steps[i].right) + ')';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// verify checks

CheckResult check_norm(const Trajectory& trajectory, const Distribution& final) {
  double worst = std::abs(trajectory.final_state.norm() - 1.0);
  for (const auto& record : trajectory.per_step) worst = std::max(worst, std::abs(record.norm - 1.0));
  worst = std::max(worst, std::abs(final.total() - 1.0));
  return {"norm", worst <= kNormTolerance, "max |norm - 1| = " + format_real(worst)};
}

CheckResult check_oracle(const WalkConfig& config, const Trajectory& trajectory,
                         const Distribution& final) {
  oracle::PathSumConfig path_cfg{config.theta, config.initial_coin, trajectory.step_sizes_used};
  const double err = max_pointwise_difference(final, oracle::oracle_distribution(path_cfg));
  return {"oracle", err <= kDistributionTolerance, "max |P - P_oracle| = " + format_real(err)};
}

// With equal left and right sizes every displacement is +-j_t, so the final
// position has the parity of the sum of the j_t.
CheckResult check_parity(const Trajectory& trajectory, const Distribution& final) {
  long long total = 0;
  for (const auto& s : trajectory.step_sizes_used) total += s.left;
  std::size_t bad = 0;
  for (const auto& [x, p] : final) {
    if (((x - total) % 2) != 0) ++bad;
  }
  return {"parity", bad == 0, std::to_string(bad) + " support positions off parity"};
}

WalkConfig unit_reference(const WalkConfig& config) {
  WalkConfig unit = config;
  unit.policy = policy::Unit{};
  return unit;
}

CheckResult check_scaling(const WalkConfig& config, const Trajectory& trajectory,
                          const Distribution& final, int s) {
  const Trajectory unit = run_walk(unit_reference(config));
  const Distribution unit_final = probability_distribution(unit.final_state);
  double worst = 0.0;
  for (const auto& [x, p] : unit_final) worst = std::max(worst, std::abs(final.at(s * x) - p));
  const bool same_support = final.support_size() == unit_final.support_size();
  double sigma_err = 0.0;
  for (std::size_t i = 0; i < unit.per_step.size(); ++i) {
    sigma_err = std::max(sigma_err,
                         std::abs(trajectory.per_step[i].sigma - s * unit.per_step[i].sigma));
  }
  return {"scaling",
          same_support && worst <= kDistributionTolerance && sigma_err <= kSigmaTolerance,
          "max |P_s(s x) - P_1(x)| = " + format_real(worst) +
              ", max |sigma_s - s sigma_1| = " + format_real(sigma_err)};
}

CheckResult check_remap(const WalkConfig& config, const Distribution& final, int k, int l) {
  const Distribution unit_final = final_distribution(unit_reference(config));
  const auto steps = static_cast<Position>(config.steps);
  double worst = 0.0;
  for (const auto& [x, p] : unit_final) {
    // x = 2R - T, so ((l + k) x + (l - k) T) / 2 = (l + k) R - k T exactly.
    const Position mapped = ((l + k) * x + (l - k) * steps) / 2;
    worst = std::max(worst, std::abs(final.at(mapped) - p));
  }
  const bool same_support = final.support_size() == unit_final.support_size();
  return {"affine-remap", same_support && worst <= kDistributionTolerance,
          "max |P_kl(remap x) - P_1(x)| = " + format_real(worst)};
}

Distribution corrupt(const Distribution& d) {
  Distribution::Map entries = d.entries();
  auto tallest = std::max_element(entries.begin(), entries.end(),
                                  [](const auto& a, const auto& b) { return a.second < b.second; });
  tallest->second *= 0.5;
  return Distribution::from_map(std::move(entries));
}

// ---------------------------------------------------------------------------
// command line

struct RunRequest {
  std::string kind;
  std::string theta = "pi/4";
  std::size_t steps = 0;
  std::string seeds = "0";
  int interval_max = 0;
  int step_size = 0;
  int left_step = 0;
  int right_step = 0;
  std::string initial = "up";
  std::string output;
  double min_height_fraction = kDefaultPeakHeightFraction;
  bool inject_fault = false;
};

struct SizeOptions {
  CLI::Option* interval_max = nullptr;
  CLI::Option* step_size = nullptr;
  CLI::Option* left_step = nullptr;
  CLI::Option* right_step = nullptr;
};

SizeOptions add_walk_options(CLI::App& cmd, RunRequest& req) {
  cmd.add_option("--kind", req.kind, "Walk kind")
      ->required()
      ->check(CLI::IsMember({"dtqw", "rsqw", "ubqw", "bqw"}));
  cmd.add_option("--theta", req.theta, "Coin angle: radians, 'pi' or 'pi/<d>'")->capture_default_str();
  cmd.add_option("--steps", req.steps, "Number of steps T")->required();
  cmd.add_option("--seed", req.seeds, "Seed (decimal or 0x hex); rsqw accepts a comma-separated list")
      ->capture_default_str();
  cmd.add_option("--initial", req.initial, "Initial coin state")
      ->check(CLI::IsMember({"up", "down"}))
      ->capture_default_str();
  SizeOptions sizes;
  sizes.interval_max = cmd.add_option("--interval-max", req.interval_max, "rsqw: j drawn from [1, n]");
  sizes.step_size = cmd.add_option("--step-size", req.step_size, "ubqw: step size s");
  sizes.left_step = cmd.add_option("--left-step", req.left_step, "bqw: left step size k");
  sizes.right_step = cmd.add_option("--right-step", req.right_step, "bqw: right step size l");
  return sizes;
}

void add_output_option(CLI::App& cmd, RunRequest& req) {
  cmd.add_option("-o,--output", req.output, "CSV output path (standard output when omitted)");
}

StepPolicy policy_from(const RunRequest& req, const SizeOptions& sizes) {
  auto reject_unless = [&](CLI::Option* opt, bool allowed, const char* name) {
    if (opt->count() > 0 && !allowed) {
      throw UsageError(std::string(name) + " is not accepted for --kind " + req.kind);
    }
    if (opt->count() == 0 && allowed) {
      throw UsageError(std::string(name) + " is required for --kind " + req.kind);
    }
  };
  reject_unless(sizes.interval_max, req.kind == "rsqw", "--interval-max");
  reject_unless(sizes.step_size, req.kind == "ubqw", "--step-size");
  reject_unless(sizes.left_step, req.kind == "bqw", "--left-step");
  reject_unless(sizes.right_step, req.kind == "bqw", "--right-step");

  StepPolicy policy = policy::Unit{};
  if (req.kind == "rsqw") policy = policy::RandomInterval{req.interval_max};
  if (req.kind == "ubqw") policy = policy::FixedUnbiased{req.step_size};
  if (req.kind == "bqw") policy = policy::Biased{req.left_step, req.right_step};
  try {
    validate(policy);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return policy;
}

struct Plan {
  WalkConfig base;
  std::vector<std::uint64_t> seeds;
};

Plan plan_from(const RunRequest& req, const SizeOptions& sizes) {
  Plan plan;
  try {
    plan.base.theta = parse_theta(req.theta);
    plan.seeds = parse_seed_list(req.seeds);
    plan.base.step_cap = step_cap_from_environment();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  plan.base.policy = policy_from(req, sizes);
  plan.base.steps = req.steps;
  plan.base.initial_coin = req.initial == "down" ? CoinState::Down : CoinState::Up;
  plan.base.seed = plan.seeds.front();
  if (plan.seeds.size() > 1 && req.kind != "rsqw") {
    throw UsageError("a seed list is only accepted for --kind rsqw");
  }
  try {
    validate(plan.base);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return plan;
}

/// Runs one walk per seed concurrently; results come back in seed order.
std::vector<Trajectory> run_all(const Plan& plan) {
  std::vector<std::future<Trajectory>> pending;
  pending.reserve(plan.seeds.size());
  for (auto seed : plan.seeds) {
    WalkConfig cfg = plan.base;
    cfg.seed = seed;
    pending.push_back(std::async(plan.seeds.size() > 1 ? std::launch::async : std::launch::deferred,
                                 [cfg] { return run_walk(cfg); }));
  }
  std::vector<Trajectory> out;
  out.reserve(pending.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

/// Sends CSV to the --output file, or to `fallback` when none was given.
template <typename Writer>
void emit_csv(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path + " for writing");
  write(file);
  file.flush();
  if (!file) throw IoError("failed writing " + path);
}

int cmd_walk(const RunRequest& req, const SizeOptions& sizes, std::ostream& out, std::ostream& err) {
  const Plan plan = plan_from(req, sizes);
  const auto runs = run_all(plan);
  std::vector<Distribution> finals;
  finals.reserve(runs.size());
  for (const auto& r : runs) finals.push_back(probability_distribution(r.final_state));

  const bool multi = plan.seeds.size() > 1;
  emit_csv(req.output, out, [&](std::ostream& csv) {
    if (!multi) {
      write_distribution_csv(csv, finals.front());
      return;
    }
    csv << "seed,x,probability\n";
    for (std::size_t i = 0; i < finals.size(); ++i) {
      for (const auto& [x, p] : finals[i]) {
        csv << plan.seeds[i] << ',' << x << ',' << format_real(p) << '\n';
      }
    }
  });

  std::ostream& summary = req.output.empty() ? err : out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Moments m = moments(finals[i]);
    summary << "seed=" << plan.seeds[i] << " steps=" << plan.base.steps
            << " policy=" << describe(plan.base.policy) << " norm=" << format_real(finals[i].total())
            << " sigma=" << format_real(m.sigma) << " rms=" << format_real(m.rms)
            << " peaks=" << detect_peaks(finals[i], req.min_height_fraction).peaks.size() << '\n';
  }
  return kOk;
}

int cmd_sigma_sweep(const RunRequest& req, const SizeOptions& sizes, std::ostream& out,
                    std::ostream& err) {
  const Plan plan = plan_from(req, sizes);
  const auto runs = run_all(plan);
  const bool multi = plan.seeds.size() > 1;
  emit_csv(req.output, out, [&](std::ostream& csv) {
    csv << (multi ? "seed,t,sigma,rms,mean\n" : "t,sigma,rms,mean\n");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (const auto& r : runs[i].per_step) {
        if (multi) csv << plan.seeds[i] << ',';
        csv << r.t << ',' << format_real(r.sigma) << ',' << format_real(r.rms) << ','
            << format_real(r.mean) << '\n';
      }
    }
  });
  std::ostream& summary = req.output.empty() ? err : out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double final_sigma = runs[i].per_step.empty() ? 0.0 : runs[i].per_step.back().sigma;
    summary << "seed=" << plan.seeds[i] << " policy=" << describe(plan.base.policy)
            << " sigma(T)=" << format_real(final_sigma) << '\n';
  }
  return kOk;
}

int cmd_verify(const RunRequest& req, const SizeOptions& sizes, std::ostream& out) {
  if (req.steps > kVerifyMaxSteps) {
    throw UsageError("verify accepts at most " + std::to_string(kVerifyMaxSteps) + " steps");
  }
  const Plan plan = plan_from(req, sizes);
  if (plan.seeds.size() > 1) throw UsageError("verify takes a single seed");
  const VerifyReport report = verify(plan.base, {req.inject_fault});
  out << "verify " << describe(plan.base.policy) << " theta=" << format_real(plan.base.theta)
      << " steps=" << plan.base.steps << " seed=" << plan.base.seed << '\n';
  if (consumes_randomness(plan.base.policy)) {
    out << "replayed j-sequence: " << join_steps(report.replayed_steps, true) << '\n';
  }
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  if (const CheckResult* failure = report.first_failure()) {
    out << "first failing check: " << failure->name << '\n';
    return kVerifyFailed;
  }
  out << "all checks passed\n";
  return kOk;
}

int cmd_peaks(const RunRequest& req, const SizeOptions& sizes, std::ostream& out, std::ostream& err) {
  const Plan plan = plan_from(req, sizes);
  if (plan.seeds.size() > 1) throw UsageError("peaks takes a single seed");
  const Distribution d = final_distribution(plan.base);

  std::optional<int> rule_step;
  if (req.kind == "dtqw") rule_step = 1;
  if (req.kind == "ubqw") rule_step = req.step_size;
  const PeakReport report = rule_step ? check_peak_rule(d, *rule_step, req.min_height_fraction)
                                      : detect_peaks(d, req.min_height_fraction);

  emit_csv(req.output, out, [&](std::ostream& csv) {
    csv << "index,position,height\n";
    for (const auto& p : report.peaks) {
      csv << p.index << ',' << p.position << ',' << format_real(p.height) << '\n';
    }
  });
  std::ostream& summary = req.output.empty() ? err : out;
  summary << "peaks=" << report.peaks.size();
  if (!rule_step) {
    summary << '\n';
    return kOk;
  }
  summary << " grid=2*m*" << *rule_step << " off_grid_support=" << report.off_grid_support
          << " rule_satisfied=" << (report.satisfied ? "true" : "false");
  if (report.flag == PeakRuleFlag::OddStepGrid) summary << " flag=odd-step-grid";
  summary << '\n';
  return report.satisfied ? kOk : kVerifyFailed;
}

}  // namespace

double parse_theta(std::string_view text) {
  text = trim(text);
  if (text == "pi") return std::numbers::pi;
  if (text.starts_with("pi/")) {
    unsigned long long d = 0;
    if (!parse_whole(text.substr(3), d) || d == 0) {
      throw std::invalid_argument("bad theta '" + std::string(text) + "': expected pi/<positive integer>");
    }
    // Extended precision keeps the quotient correctly rounded once narrowed.
    return static_cast<double>(std::numbers::pi_v<long double> / static_cast<long double>(d));
  }
  double value = 0.0;
  if (text.empty() || !parse_whole(text, value) || !std::isfinite(value)) {
    throw std::invalid_argument("bad theta '" + std::string(text) + "'");
  }
  return value;
}

std::uint64_t parse_seed(std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  bool ok = false;
  if (text.starts_with("0x") || text.starts_with("0X")) {
    ok = text.size() > 2 && parse_whole(text.substr(2), value, 16);
  } else {
    ok = !text.empty() && parse_whole(text, value, 10);
  }
  if (!ok) throw std::invalid_argument("bad seed '" + std::string(text) + "'");
  return value;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    seeds.push_back(parse_seed(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seeds;
}

std::size_t step_cap_from_environment() {
  const char* raw = std::getenv(kStepCapVariable);
  if (raw == nullptr || *raw == '\0') return kDefaultStepCap;
  std::size_t cap = 0;
  if (!parse_whole(trim(raw), cap)) {
    throw std::invalid_argument(std::string(kStepCapVariable) + " must be a non-negative integer");
  }
  return cap;
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_distribution_csv(std::ostream& out, const Distribution& d) {
  out << "x,probability\n";
  for (const auto& [x, p] : d) out << x << ',' << format_real(p) << '\n';
}

bool VerifyReport::passed() const { return first_failure() == nullptr; }

const CheckResult* VerifyReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

VerifyReport verify(const WalkConfig& config, VerifyOptions options) {
  if (config.steps > kVerifyMaxSteps) {
    throw std::invalid_argument("verify accepts at most " + std::to_string(kVerifyMaxSteps) + " steps");
  }
  const Trajectory trajectory = run_walk(config);
  Distribution final = probability_distribution(trajectory.final_state);
  if (options.inject_fault) final = corrupt(final);

  VerifyReport report;
  report.replayed_steps = trajectory.step_sizes_used;
  report.checks.push_back(check_norm(trajectory, final));
  if (!std::holds_alternative<policy::Biased>(config.policy)) {
    report.checks.push_back(check_parity(trajectory, final));
  }
  if (const auto* p = std::get_if<policy::FixedUnbiased>(&config.policy)) {
    report.checks.push_back(check_scaling(config, trajectory, final, p->size));
  }
  if (const auto* p = std::get_if<policy::Biased>(&config.policy)) {
    report.checks.push_back(check_remap(config, final, p->left, p->right));
  }
  report.checks.push_back(check_oracle(config, trajectory, final));
  return report;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-time quantum walks with generalized step sizes", "qwalk"};
  app.require_subcommand(1);

  RunRequest req;
  auto* walk = app.add_subcommand("walk", "Final probability distribution as CSV (x,probability)");
  const SizeOptions walk_sizes = add_walk_options(*walk, req);
  add_output_option(*walk, req);

  auto* sweep = app.add_subcommand("sigma-sweep", "Per-step statistics as CSV (t,sigma,rms,mean)");
  const SizeOptions sweep_sizes = add_walk_options(*sweep, req);
  add_output_option(*sweep, req);

  auto* check = app.add_subcommand("verify", "Invariant and path-sum oracle checks (T <= 12)");
  const SizeOptions verify_sizes = add_walk_options(*check, req);
  check->add_flag("--inject-fault", req.inject_fault, "Corrupt the distribution (negative control)")
      ->group("");

  auto* peaks = app.add_subcommand("peaks", "Peak detection and the step-size grid rule");
  const SizeOptions peak_sizes = add_walk_options(*peaks, req);
  add_output_option(*peaks, req);
  peaks->add_option("--min-height-fraction", req.min_height_fraction,
                    "Ignore peaks below this fraction of the tallest")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (walk->parsed()) return cmd_walk(req, walk_sizes, out, err);
    if (sweep->parsed()) return cmd_sigma_sweep(req, sweep_sizes, out, err);
    if (check->parsed()) return cmd_verify(req, verify_sizes, out);
    if (peaks->parsed()) return cmd_peaks(req, peak_sizes, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace qwalk::cli
