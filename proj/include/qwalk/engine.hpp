#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qwalk/spinor_field.hpp"
#include "qwalk/step_policy.hpp"

namespace qwalk {

inline constexpr std::size_t kDefaultStepCap = 100'000;

struct WalkConfig {
  double theta = 0.0;
  std::size_t steps = 0;
  CoinState initial_coin = CoinState::Up;
  StepPolicy policy = policy::Unit{};
  std::uint64_t seed = 0;
  std::size_t step_cap = kDefaultStepCap;
};

/// Throws std::invalid_argument for a non-finite theta, invalid policy
/// parameters, or steps above step_cap.
void validate(const WalkConfig& config);

/// Observables after t full applications of the walk operator.
struct StepRecord {
  std::size_t t = 0;
  double sigma = 0.0;
  double rms = 0.0;
  double mean = 0.0;
  std::size_t support_size = 0;
  double norm = 0.0;
};

struct Trajectory {
  SpinorField final_state = SpinorField::localized(CoinState::Up, 0);
  std::vector<StepRecord> per_step;
  std::vector<StepSizes> step_sizes_used;
};

/// Starts localized at the origin and applies coin then shift `steps`
/// times, recording statistics after every shift.
Trajectory run_walk(const WalkConfig& config);

struct SigmaPoint {
  std::size_t t = 0;
  double sigma = 0.0;
};

std::vector<SigmaPoint> run_sigma_sweep(const WalkConfig& config);

/// Final distribution of run_walk(config).
Distribution final_distribution(const WalkConfig& config);

}  // namespace qwalk
