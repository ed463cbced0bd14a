#include "nlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nlab/exponent.hpp"
#include "nlab/types.hpp"

namespace nlab {

Exponent::Exponent(double p) : p_(p) {
  if (!std::isfinite(p) || p < 1.0) {
    throw Error("exponent must satisfy 1 <= p < infinity, got " + std::to_string(p));
  }
}

std::optional<double> Exponent::dual() const {
  if (is_one()) return std::nullopt;
  return p_ / (p_ - 1.0);
}

Grid::Grid(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("grid needs at least one cell");
  double total = 0.0;
  min_weight_ = std::numeric_limits<double>::infinity();
  lefts_.reserve(weights_.size());
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error("grid weights must be positive and finite");
    lefts_.push_back(total);
    total += w;
    min_weight_ = std::min(min_weight_, w);
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error("grid weights must sum to 1 (got " + std::to_string(total) + ")");
  }
  equal_ = std::all_of(weights_.begin(), weights_.end(), [&](double w) { return w == weights_.front(); });
}

bool Grid::same_as(const Grid& other) const {
  return this == &other || weights_ == other.weights_;
}

GridPtr make_equal_grid(std::size_t n) {
  if (n == 0) throw Error("grid cell count must be positive");
  return std::make_shared<const Grid>(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::vector<std::size_t> dyadic_refinement_map(std::size_t coarse_n) {
  std::vector<std::size_t> map(2 * coarse_n);
  for (std::size_t i = 0; i < map.size(); ++i) map[i] = i / 2;
  return map;
}

PartitionMap::PartitionMap(GridPtr grid, std::vector<std::size_t> block_of)
    : grid_(std::move(grid)), block_of_(std::move(block_of)) {
  if (!grid_) throw Error("partition needs a grid");
  if (block_of_.size() != grid_->size()) throw Error("partition length differs from grid cell count");
  const std::size_t m = block_of_.empty() ? 0 : *std::max_element(block_of_.begin(), block_of_.end()) + 1;
  block_weights_.assign(m, 0.0);
  members_.assign(m, {});
  for (std::size_t i = 0; i < block_of_.size(); ++i) {
    block_weights_[block_of_[i]] += grid_->weight(i);
    members_[block_of_[i]].push_back(i);
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (members_[k].empty()) throw Error("partition block " + std::to_string(k) + " is empty");
  }
}

PartitionMap PartitionMap::equal_blocks(GridPtr grid, std::size_t m) {
  const std::size_t n = grid->size();
  if (m == 0 || n % m != 0) {
    throw Error("equal blocks need m to divide n (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> block_of(n);
  for (std::size_t i = 0; i < n; ++i) block_of[i] = i / (n / m);
  return {std::move(grid), std::move(block_of)};
}

PartitionMap PartitionMap::single_block(GridPtr grid) {
  const std::size_t n = grid->size();
  return {std::move(grid), std::vector<std::size_t>(n, 0)};
}

PartitionMap PartitionMap::singletons(GridPtr grid) {
  std::vector<std::size_t> block_of(grid->size());
  std::iota(block_of.begin(), block_of.end(), std::size_t{0});
  return {std::move(grid), std::move(block_of)};
}

}  // namespace nlab
