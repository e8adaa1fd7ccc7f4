#include "qwalk/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qwalk::oracle {

namespace {

/// Neumaier summation, applied to each complex part separately.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      carry_ += (sum_ - t) + value;
    } else {
      carry_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct Bucket {
  CompensatedSum re[2];
  CompensatedSum im[2];
  bool touched = false;
};

}  // namespace

std::map<Position, FinalAmplitude> path_sum_amplitudes(const PathSumConfig& cfg) {
  const std::size_t steps = cfg.step_sequence.size();
  if (steps > kMaxSteps) {
    throw std::invalid_argument("path sum limited to " + std::to_string(kMaxSteps) + " steps, got " +
                                std::to_string(steps));
  }
  if (!std::isfinite(cfg.theta)) throw std::invalid_argument("theta must be finite");

  Position lowest = 0;
  Position highest = 0;
  for (const auto& s : cfg.step_sequence) {
    if (s.left < 1 || s.right < 1) throw std::invalid_argument("step sizes must be positive");
    lowest -= s.left;
    highest += s.right;
  }

  // entry[to][from] of the coin matrix, index 0 = up, 1 = down.
  const double c = std::cos(cfg.theta);
  const double s = std::sin(cfg.theta);
  const double entry[2][2] = {{c, s}, {s, -c}};
  const int start = cfg.initial_coin == CoinState::Up ? 0 : 1;

  std::vector<Bucket> buckets(static_cast<std::size_t>(highest - lowest + 1));
  const std::uint64_t paths = std::uint64_t{1} << steps;
  for (std::uint64_t path = 0; path < paths; ++path) {
    std::complex<double> amplitude = 1.0;
    Position x = 0;
    int coin = start;
    for (std::size_t t = 0; t < steps; ++t) {
      const int outcome = static_cast<int>((path >> t) & 1U);
      amplitude *= entry[outcome][coin];
      x += outcome == 0 ? -cfg.step_sequence[t].left : cfg.step_sequence[t].right;
      coin = outcome;
    }
    Bucket& b = buckets[static_cast<std::size_t>(x - lowest)];
    b.re[coin].add(amplitude.real());
    b.im[coin].add(amplitude.imag());
    b.touched = true;
  }

  std::map<Position, FinalAmplitude> out;
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const Bucket& b = buckets[i];
    if (!b.touched) continue;
    out.emplace(lowest + static_cast<Position>(i),
                FinalAmplitude{{b.re[0].value(), b.im[0].value()}, {b.re[1].value(), b.im[1].value()}});
  }
  return out;
}

Distribution oracle_distribution(const PathSumConfig& cfg) {
  Distribution::Map entries;
  for (const auto& [x, a] : path_sum_amplitudes(cfg)) {
    const double p = std::norm(a.up) + std::norm(a.down);
    if (p >= 1e-300) entries.emplace_hint(entries.end(), x, p);
  }
  return Distribution::from_map(std::move(entries));
}

}  // namespace qwalk::oracle
