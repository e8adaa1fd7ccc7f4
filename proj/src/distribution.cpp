#include "qwalk/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qwalk {

namespace {

void check_probability(Position x, double p) {
  // Allow for rounding of a squared modulus that should be exactly one.
  if (!std::isfinite(p) || p <= 0.0 || p > 1.0 + 1e-12) {
    throw std::invalid_argument("invalid probability " + std::to_string(p) +
                                " at position " + std::to_string(x));
  }
}

template <typename F>
void for_each_union(const Distribution& p, const Distribution& q, F&& f) {
  auto a = p.begin();
  auto b = q.begin();
  while (a != p.end() || b != q.end()) {
    if (b == q.end() || (a != p.end() && a->first < b->first)) {
      f(a->second, 0.0);
      ++a;
    } else if (a == p.end() || b->first < a->first) {
      f(0.0, b->second);
      ++b;
    } else {
      f(a->second, b->second);
      ++a;
      ++b;
    }
  }
}

}  // namespace

Distribution::Distribution(const std::vector<std::pair<Position, double>>& entries) {
  for (const auto& [x, p] : entries) {
    check_probability(x, p);
    if (!entries_.emplace(x, p).second) {
      throw std::invalid_argument("duplicate position " + std::to_string(x));
    }
  }
}

Distribution Distribution::from_map(Map entries) {
  for (const auto& [x, p] : entries) check_probability(x, p);
  Distribution d;
  d.entries_ = std::move(entries);
  return d;
}

double Distribution::at(Position x) const {
  auto it = entries_.find(x);
  return it == entries_.end() ? 0.0 : it->second;
}

double Distribution::total() const {
  double sum = 0.0;
  for (const auto& [x, p] : entries_) sum += p;
  return sum;
}

Position Distribution::min_position() const {
  if (entries_.empty()) throw std::logic_error("empty distribution");
  return entries_.begin()->first;
}

Position Distribution::max_position() const {
  if (entries_.empty()) throw std::logic_error("empty distribution");
  return entries_.rbegin()->first;
}

double max_pointwise_difference(const Distribution& p, const Distribution& q) {
  double worst = 0.0;
  for_each_union(p, q, [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); });
  return worst;
}

double total_variation_distance(const Distribution& p, const Distribution& q) {
  double sum = 0.0;
  for_each_union(p, q, [&](double a, double b) { sum += std::abs(a - b); });
  return 0.5 * sum;
}

}  // namespace qwalk
