#include "qwalk/spinor_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qwalk {

namespace {

constexpr double kProbabilityFloor = 1e-300;

void check_sizes(StepSizes sizes) {
  if (sizes.left < 1 || sizes.right < 1) {
    throw std::invalid_argument("step sizes must be positive, got (" +
                                std::to_string(sizes.left) + ", " +
                                std::to_string(sizes.right) + ")");
  }
}

}  // namespace

CoinOperator::CoinOperator(double theta)
    : theta_(theta), cos_(std::cos(theta)), sin_(std::sin(theta)) {
  if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
}

std::array<std::array<double, 2>, 2> CoinOperator::matrix() const {
  return {{{cos_, sin_}, {sin_, -cos_}}};
}

SpinorField::SpinorField(Position origin, std::vector<Amplitude> up, std::vector<Amplitude> down)
    : origin_(origin), up_(std::move(up)), down_(std::move(down)) {
  if (up_.empty() || up_.size() != down_.size()) {
    throw std::invalid_argument("spinor components must be non-empty and of equal length");
  }
}

SpinorField SpinorField::localized(CoinState coin, Position position) {
  std::vector<Amplitude> up{coin == CoinState::Up ? 1.0 : 0.0};
  std::vector<Amplitude> down{coin == CoinState::Down ? 1.0 : 0.0};
  return SpinorField(position, std::move(up), std::move(down));
}

Amplitude SpinorField::up_at(Position x) const {
  if (x < origin_ || x > last_position()) return {};
  return up_[static_cast<std::size_t>(x - origin_)];
}

Amplitude SpinorField::down_at(Position x) const {
  if (x < origin_ || x > last_position()) return {};
  return down_[static_cast<std::size_t>(x - origin_)];
}

double SpinorField::norm() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < up_.size(); ++i) sum += std::norm(up_[i]) + std::norm(down_[i]);
  return sum;
}

void SpinorField::apply_coin_in_place(const CoinOperator& coin) {
  const double c = coin.cos_theta();
  const double s = coin.sin_theta();
  for (std::size_t i = 0; i < up_.size(); ++i) {
    const Amplitude u = up_[i];
    const Amplitude d = down_[i];
    up_[i] = c * u + s * d;
    down_[i] = s * u - c * d;
  }
}

void SpinorField::apply_shift_in_place(StepSizes sizes) {
  check_sizes(sizes);
  const auto widen = static_cast<std::size_t>(sizes.left) + static_cast<std::size_t>(sizes.right);
  // The new window starts `left` further out, so up keeps its index and
  // down moves forward by left + right.
  up_.resize(up_.size() + widen);
  down_.insert(down_.begin(), widen, Amplitude{});
  origin_ -= sizes.left;
}

void SpinorField::apply_inverse_shift_in_place(StepSizes sizes) {
  check_sizes(sizes);
  const auto widen = static_cast<std::size_t>(sizes.left) + static_cast<std::size_t>(sizes.right);
  up_.insert(up_.begin(), widen, Amplitude{});
  down_.resize(down_.size() + widen);
  origin_ -= sizes.right;
}

void SpinorField::scale_in_place(Amplitude factor) {
  for (auto& a : up_) a *= factor;
  for (auto& a : down_) a *= factor;
}

void SpinorField::trim_in_place() {
  auto is_zero = [&](std::size_t i) { return up_[i] == Amplitude{} && down_[i] == Amplitude{}; };
  std::size_t first = 0;
  while (first + 1 < up_.size() && is_zero(first)) ++first;
  std::size_t last = up_.size() - 1;
  while (last > first && is_zero(last)) --last;
  up_ = std::vector<Amplitude>(up_.begin() + static_cast<std::ptrdiff_t>(first),
                               up_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  down_ = std::vector<Amplitude>(down_.begin() + static_cast<std::ptrdiff_t>(first),
                                 down_.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  origin_ += static_cast<Position>(first);
}

SpinorField apply_coin(SpinorField state, const CoinOperator& coin) {
  state.apply_coin_in_place(coin);
  return state;
}

SpinorField apply_shift(SpinorField state, int left_size, int right_size) {
  state.apply_shift_in_place({left_size, right_size});
  return state;
}

Distribution probability_distribution(const SpinorField& state) {
  Distribution::Map entries;
  const auto up = state.up();
  const auto down = state.down();
  for (std::size_t i = 0; i < up.size(); ++i) {
    const double p = std::norm(up[i]) + std::norm(down[i]);
    if (p >= kProbabilityFloor) {
      entries.emplace_hint(entries.end(), state.origin() + static_cast<Position>(i), p);
    }
  }
  return Distribution::from_map(std::move(entries));
}

double max_amplitude_difference(const SpinorField& a, const SpinorField& b) {
  const Position lo = std::min(a.origin(), b.origin());
  const Position hi = std::max(a.last_position(), b.last_position());
  double worst = 0.0;
  for (Position x = lo; x <= hi; ++x) {
    worst = std::max(worst, std::abs(a.up_at(x) - b.up_at(x)));
    worst = std::max(worst, std::abs(a.down_at(x) - b.down_at(x)));
  }
  return worst;
}

}  // namespace qwalk
