#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nlab/grid.hpp"
#include "nlab/lp_vector.hpp"

namespace nlab {

/// A {-1, 0, +1}-valued function on the grid. Its support is the set A with
/// g^2 = 1_A and its residual is the integral sum_i w_i g_i.
class SignVector {
 public:
  SignVector(GridPtr grid, std::vector<std::int8_t> values);

  static SignVector zero(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  const std::vector<std::int8_t>& values() const { return values_; }
  std::int8_t operator[](std::size_t i) const { return values_[i]; }
  std::vector<std::size_t> support() const;
  double residual() const { return residual_; }
  bool is_mean_zero(double eta) const { return std::abs(residual_) <= eta; }

  LpVector to_lp_vector() const;
  std::uint64_t hash() const;

 private:
  GridPtr grid_;
  std::vector<std::int8_t> values_;
  double residual_ = 0.0;
};

}  // namespace nlab
