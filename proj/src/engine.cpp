#include "qwalk/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qwalk/stats.hpp"

namespace qwalk {

namespace {

StepRecord observe(const SpinorField& state, std::size_t t) {
  MomentSums sums;
  std::size_t support = 0;
  const auto up = state.up();
  const auto down = state.down();
  for (std::size_t i = 0; i < up.size(); ++i) {
    const double p = std::norm(up[i]) + std::norm(down[i]);
    if (p >= 1e-300) {
      sums.add(state.origin() + static_cast<Position>(i), p);
      ++support;
    }
  }
  const Moments m = sums.finish();
  return {t, m.sigma, m.rms, m.mean, support, state.norm()};
}

}  // namespace

void validate(const WalkConfig& config) {
  if (!std::isfinite(config.theta)) throw std::invalid_argument("theta must be finite");
  if (config.steps > config.step_cap) {
    throw std::invalid_argument("steps " + std::to_string(config.steps) + " exceed the cap of " +
                                std::to_string(config.step_cap));
  }
  validate(config.policy);
}

Trajectory run_walk(const WalkConfig& config) {
  validate(config);
  const CoinOperator coin(config.theta);
  SplitMix64 gen(config.seed);

  Trajectory out;
  out.final_state = SpinorField::localized(config.initial_coin, 0);
  out.per_step.reserve(config.steps);
  out.step_sizes_used.reserve(config.steps);

  for (std::size_t t = 1; t <= config.steps; ++t) {
    const StepSizes sizes = steps_for(config.policy, gen, t);
    out.final_state.apply_coin_in_place(coin);
    out.final_state.apply_shift_in_place(sizes);
    out.step_sizes_used.push_back(sizes);
    out.per_step.push_back(observe(out.final_state, t));
  }
  return out;
}

std::vector<SigmaPoint> run_sigma_sweep(const WalkConfig& config) {
  const Trajectory trajectory = run_walk(config);
  std::vector<SigmaPoint> out;
  out.reserve(trajectory.per_step.size());
  for (const auto& record : trajectory.per_step) out.push_back({record.t, record.sigma});
  return out;
}

Distribution final_distribution(const WalkConfig& config) {
  return probability_distribution(run_walk(config).final_state);
}

}  // namespace qwalk
