#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qwalk/distribution.hpp"

namespace qwalk {

using Amplitude = std::complex<double>;

enum class CoinState { Up, Down };

/// The real coin [[cos t, sin t], [sin t, -cos t]]. Symmetric and
/// orthogonal, so it is its own inverse.
class CoinOperator {
 public:
  explicit CoinOperator(double theta);

  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] double cos_theta() const { return cos_; }
  [[nodiscard]] double sin_theta() const { return sin_; }

  /// Row-major 2x2 matrix, rows and columns ordered (Up, Down).
  [[nodiscard]] std::array<std::array<double, 2>, 2> matrix() const;

 private:
  double theta_;
  double cos_;
  double sin_;
};

/// Left and right displacement magnitudes for one time step.
struct StepSizes {
  int left = 1;
  int right = 1;

  friend bool operator==(const StepSizes&, const StepSizes&) = default;
};

/// Two-component wavefunction on the window [origin, origin + size()).
/// Positions outside the window carry amplitude zero.
class SpinorField {
 public:
  /// Throws std::invalid_argument if the components differ in length or
  /// are empty.
  SpinorField(Position origin, std::vector<Amplitude> up, std::vector<Amplitude> down);

  /// Amplitude one in the given coin component at `position`.
  static SpinorField localized(CoinState coin, Position position);

  [[nodiscard]] Position origin() const { return origin_; }
  [[nodiscard]] std::size_t size() const { return up_.size(); }
  [[nodiscard]] Position last_position() const {
    return origin_ + static_cast<Position>(up_.size()) - 1;
  }
  [[nodiscard]] std::span<const Amplitude> up() const { return up_; }
  [[nodiscard]] std::span<const Amplitude> down() const { return down_; }

  [[nodiscard]] Amplitude up_at(Position x) const;
  [[nodiscard]] Amplitude down_at(Position x) const;

  /// Sum of squared moduli over both components.
  [[nodiscard]] double norm() const;

  void apply_coin_in_place(const CoinOperator& coin);

  /// Up amplitudes move to x - left, down amplitudes to x + right. The
  /// window widens by left + right. Throws on non-positive sizes.
  void apply_shift_in_place(StepSizes sizes);

  /// Undoes apply_shift_in_place with the same sizes: up moves right by
  /// `left`, down moves left by `right`. The window widens symmetrically.
  void apply_inverse_shift_in_place(StepSizes sizes);

  /// Scales every amplitude by `factor`.
  void scale_in_place(Amplitude factor);

  /// Drops all-zero leading and trailing positions, keeping at least one.
  void trim_in_place();

 private:
  Position origin_;
  std::vector<Amplitude> up_;
  std::vector<Amplitude> down_;
};

SpinorField apply_coin(SpinorField state, const CoinOperator& coin);
SpinorField apply_shift(SpinorField state, int left_size, int right_size);

/// Born-rule distribution; entries below 1e-300 are dropped.
Distribution probability_distribution(const SpinorField& state);

/// Largest amplitude difference over the union of both windows, both
/// components.
double max_amplitude_difference(const SpinorField& a, const SpinorField& b);

}  // namespace qwalk
