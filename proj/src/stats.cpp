#include "qwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iterator>
#include <stdexcept>

namespace qwalk {

Moments MomentSums::finish() const {
  Moments m;
  m.mean = first_;
  // Rounding can push the variance of a point mass slightly negative.
  m.variance = std::max(0.0, second_ - first_ * first_);
  m.sigma = std::sqrt(m.variance);
  m.rms = std::sqrt(second_);
  return m;
}

Moments moments(const Distribution& d) {
  MomentSums sums;
  for (const auto& [x, p] : d) sums.add(x, p);
  return sums.finish();
}

PeakReport detect_peaks(const Distribution& d, double min_height_fraction) {
  if (!(min_height_fraction > 0.0 && min_height_fraction < 1.0)) {
    throw std::invalid_argument("min_height_fraction must lie in (0, 1)");
  }
  PeakReport report;
  if (d.empty()) return report;

  double tallest = 0.0;
  for (const auto& [x, p] : d) tallest = std::max(tallest, p);
  const double floor = min_height_fraction * tallest;

  for (auto it = d.begin(); it != d.end(); ++it) {
    const double p = it->second;
    if (p < floor) continue;
    const bool first = it == d.begin();
    const auto next = std::next(it);
    const bool last = next == d.end();
    if (first && last) {
      report.peaks.push_back({0, it->first, p});
      continue;
    }
    // Interior points must beat both neighbours; an endpoint only has to
    // match its single neighbour.
    if (first) {
      if (!(p >= next->second)) continue;
    } else if (last) {
      if (!(p >= std::prev(it)->second)) continue;
    } else if (!(p > std::prev(it)->second && p > next->second)) {
      continue;
    }
    report.peaks.push_back({0, it->first, p});
  }

  std::stable_sort(report.peaks.begin(), report.peaks.end(), [](const Peak& a, const Peak& b) {
    const auto ma = std::llabs(a.position);
    const auto mb = std::llabs(b.position);
    return ma != mb ? ma < mb : a.position < b.position;
  });
  int left = 0;
  int right = 0;
  for (auto& peak : report.peaks) {
    if (peak.position < 0) peak.index = ++left;
    else if (peak.position > 0) peak.index = ++right;
  }
  return report;
}

PeakReport check_peak_rule(const Distribution& d, int step_size, double min_height_fraction) {
  if (step_size < 1) throw std::invalid_argument("step size must be >= 1");
  PeakReport report = detect_peaks(d, min_height_fraction);
  if (d.empty()) return report;

  const Position grid = 2 * static_cast<Position>(step_size);
  std::size_t odd_multiples = 0;
  for (const auto& [x, p] : d) {
    if (x % grid != 0) {
      ++report.off_grid_support;
      if (x % step_size == 0) ++odd_multiples;
    }
  }

  // First grid point at or above the smallest support position.
  const Position lo = d.min_position();
  Position first = lo - (lo % grid);
  if (first < lo) first += grid;
  for (Position x = first; x <= d.max_position(); x += grid) report.rule_positions.push_back(x);

  report.satisfied = report.off_grid_support == 0;
  if (odd_multiples == d.support_size()) report.flag = PeakRuleFlag::OddStepGrid;
  return report;
}

}  // namespace qwalk
