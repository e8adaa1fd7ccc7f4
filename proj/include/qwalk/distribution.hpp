#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace qwalk {

using Position = std::int64_t;

/// Probability mass over lattice positions. Only strictly positive entries
/// are stored; positions absent from the map carry probability zero.
///
/// The total is not forced to one on construction so that rescaled or
/// deliberately corrupted distributions can still be represented; walks
/// and the oracle always produce normalized ones.
class Distribution {
 public:
  using Map = std::map<Position, double>;

  Distribution() = default;

  /// Throws std::invalid_argument on non-finite, non-positive or > 1
  /// probabilities, or on repeated positions.
  explicit Distribution(const std::vector<std::pair<Position, double>>& entries);
  static Distribution from_map(Map entries);

  [[nodiscard]] double at(Position x) const;
  [[nodiscard]] double total() const;
  [[nodiscard]] std::size_t support_size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] const Map& entries() const { return entries_; }

  [[nodiscard]] Position min_position() const;
  [[nodiscard]] Position max_position() const;

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  Map entries_;
};

/// Largest |p(x) - q(x)| over the union of both supports.
double max_pointwise_difference(const Distribution& p, const Distribution& q);

/// Half the L1 distance between two distributions.
double total_variation_distance(const Distribution& p, const Distribution& q);

}  // namespace qwalk
