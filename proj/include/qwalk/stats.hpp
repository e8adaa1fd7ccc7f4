#pragma once

#include <cstddef>
#include <vector>

#include "qwalk/distribution.hpp"

namespace qwalk {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double sigma = 0.0;  // about the mean
  double rms = 0.0;    // about the origin
};

/// Running sums of P, x P and x^2 P. Lets callers that hold probabilities
/// in another layout share the moment arithmetic with moments().
class MomentSums {
 public:
  void add(Position x, double p) {
    const auto xd = static_cast<double>(x);
    mass_ += p;
    first_ += xd * p;
    second_ += xd * xd * p;
  }

  [[nodiscard]] double mass() const { return mass_; }
  [[nodiscard]] Moments finish() const;

 private:
  double mass_ = 0.0;
  double first_ = 0.0;
  double second_ = 0.0;
};

Moments moments(const Distribution& d);

struct Peak {
  /// Ordinal counted outward from the origin on each side; 0 at the origin.
  int index = 0;
  Position position = 0;
  double height = 0.0;
};

enum class PeakRuleFlag {
  None,
  /// Support sits on odd multiples of the step size, as after an odd
  /// number of steps; the rule is stated for the even grid.
  OddStepGrid,
};

struct PeakReport {
  /// Sorted by |position|, negative side first on ties.
  std::vector<Peak> peaks;
  /// Grid positions 2 m s within the support span (empty from detect_peaks).
  std::vector<Position> rule_positions;
  bool satisfied = false;
  PeakRuleFlag flag = PeakRuleFlag::None;
  /// Support positions that are not multiples of 2 s.
  std::size_t off_grid_support = 0;
};

inline constexpr double kDefaultPeakHeightFraction = 0.01;

/// Strict local maxima over the nonzero support whose height is at least
/// `min_height_fraction` of the tallest entry. Endpoints compare against
/// their single neighbour and count when not below it. Throws
/// std::invalid_argument unless 0 < min_height_fraction < 1.
PeakReport detect_peaks(const Distribution& d,
                        double min_height_fraction = kDefaultPeakHeightFraction);

/// Checks that every support position (hence every peak) lies on
/// {2 m step_size : m integer}. Throws std::invalid_argument for
/// step_size < 1.
PeakReport check_peak_rule(const Distribution& d, int step_size,
                           double min_height_fraction = kDefaultPeakHeightFraction);

}  // namespace qwalk
