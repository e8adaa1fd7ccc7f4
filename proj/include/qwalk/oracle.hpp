#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <vector>

#include "qwalk/distribution.hpp"
#include "qwalk/spinor_field.hpp"

namespace qwalk::oracle {

/// Enumeration is exponential in the number of steps.
inline constexpr std::size_t kMaxSteps = 20;

struct PathSumConfig {
  double theta = 0.0;
  CoinState initial_coin = CoinState::Up;
  /// One (left, right) pair per step.
  std::vector<StepSizes> step_sequence;
};

struct FinalAmplitude {
  std::complex<double> up;
  std::complex<double> down;
};

/// Final amplitudes keyed by position, summed over all 2^T coin-outcome
/// histories in a fixed order with compensated summation. Throws
/// std::invalid_argument for more than kMaxSteps steps or non-positive
/// step sizes.
std::map<Position, FinalAmplitude> path_sum_amplitudes(const PathSumConfig& cfg);

/// Squared moduli of path_sum_amplitudes, summed over the final coin value.
Distribution oracle_distribution(const PathSumConfig& cfg);

}  // namespace qwalk::oracle
