#pragma once

#include <span>
#include <vector>

#include "nlab/exponent.hpp"
#include "nlab/grid.hpp"
#include "nlab/types.hpp"

namespace nlab {

/// Piecewise-constant function on a grid, stored as one coefficient per cell.
class LpVector {
 public:
  LpVector(GridPtr grid, CVector coeffs);

  static LpVector zeros(GridPtr grid);
  static LpVector ones(GridPtr grid);
  static LpVector indicator(GridPtr grid, std::span<const std::size_t> cells);

  const GridPtr& grid() const { return grid_; }
  const CVector& coeffs() const { return coeffs_; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  Scalar operator[](std::size_t i) const { return coeffs_[static_cast<Eigen::Index>(i)]; }
  std::span<const Scalar> span() const { return {coeffs_.data(), size()}; }

  LpVector operator+(const LpVector& other) const;
  LpVector operator-(const LpVector& other) const;
  LpVector operator*(Scalar c) const;

 private:
  GridPtr grid_;
  CVector coeffs_;
};

/// Throws if the two grids are not the same partition.
void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// (sum_i w_i |c_i|^p)^(1/p).
double lp_norm(const LpVector& v, const Exponent& p);
double lp_norm(std::span<const Scalar> coeffs, std::span<const double> weights, double p);
/// sum_i w_i |c_i|^p, without the root.
double lp_norm_pow(std::span<const Scalar> coeffs, std::span<const double> weights, double p);

/// Replaces v on every block by its weighted block mean.
LpVector simple_approximation(const LpVector& v, const PartitionMap& part);

/// Block-constant copy of v on a finer grid. refinement_map[i] is the coarse
/// cell containing fine cell i; fine weights must aggregate to coarse weights.
LpVector embed(const LpVector& v, GridPtr fine, std::span<const std::size_t> refinement_map);

}  // namespace nlab
