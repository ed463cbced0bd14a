#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace nlab {

/// Partition of [0,1] into consecutive cells with positive weights summing
/// to one. Cell i covers [left(i), left(i) + weight(i)).
class Grid {
 public:
  explicit Grid(std::vector<double> weights);

  std::size_t size() const { return weights_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const { return weights_; }
  double left(std::size_t i) const { return lefts_[i]; }
  double midpoint(std::size_t i) const { return lefts_[i] + 0.5 * weights_[i]; }
  double min_weight() const { return min_weight_; }
  bool is_equal_weight() const { return equal_; }

  /// Same cell count and identical weights.
  bool same_as(const Grid& other) const;

 private:
  std::vector<double> weights_;
  std::vector<double> lefts_;
  double min_weight_ = 0.0;
  bool equal_ = false;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_equal_grid(std::size_t n);

/// Map from the cells of the 2n-cell dyadic refinement to the n coarse cells.
std::vector<std::size_t> dyadic_refinement_map(std::size_t coarse_n);

/// Assignment of grid cells to m nonempty blocks (a finite sub-sigma-algebra).
class PartitionMap {
 public:
  PartitionMap(GridPtr grid, std::vector<std::size_t> block_of);

  /// m contiguous blocks of equal cell count; requires m to divide n.
  static PartitionMap equal_blocks(GridPtr grid, std::size_t m);
  static PartitionMap single_block(GridPtr grid);
  static PartitionMap singletons(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  std::size_t block_count() const { return block_weights_.size(); }
  std::size_t block_of(std::size_t cell) const { return block_of_[cell]; }
  double block_weight(std::size_t k) const { return block_weights_[k]; }
  const std::vector<std::size_t>& members(std::size_t k) const { return members_[k]; }

 private:
  GridPtr grid_;
  std::vector<std::size_t> block_of_;
  std::vector<double> block_weights_;
  std::vector<std::vector<std::size_t>> members_;
};

}  // namespace nlab
