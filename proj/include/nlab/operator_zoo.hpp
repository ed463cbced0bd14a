#pragma once

#include <functional>
#include <string>

#include "nlab/grid.hpp"
#include "nlab/lp_vector.hpp"
#include "nlab/sign_vector.hpp"
#include "nlab/types.hpp"

namespace nlab {

/// Dense square operator on the coefficients of a grid. Entry (i, j) is the
/// response in cell i to a unit coefficient in cell j.
class OperatorMatrix {
 public:
  OperatorMatrix(GridPtr grid, CMatrix entries, std::string label,
                 bool certified_projection = false);

  const GridPtr& grid() const { return grid_; }
  const CMatrix& entries() const { return entries_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return grid_->size(); }
  /// All imaginary parts are exactly zero.
  bool is_real() const { return real_; }
  /// Tagged as a projection of norm one in every L^p.
  bool certified_projection() const { return certified_projection_; }

 private:
  GridPtr grid_;
  CMatrix entries_;
  std::string label_;
  bool real_ = true;
  bool certified_projection_ = false;
};

LpVector apply(const OperatorMatrix& t, const LpVector& v);

OperatorMatrix identity(GridPtr grid);
OperatorMatrix zero_operator(GridPtr grid);

/// f -> (integral of f) 1.
OperatorMatrix mean_operator(GridPtr grid);

/// Block averaging: each cell receives the weighted mean of its block.
OperatorMatrix conditional_expectation(const PartitionMap& part);

/// Same matrix as conditional_expectation, tagged as a norm-one projection
/// whose range (block-constant vectors) contains the constants.
OperatorMatrix coarsening_projection(const PartitionMap& part);

using Kernel = std::function<double(double s, double t)>;

/// Midpoint rule for f -> integral K(s, t) f(t) dt: T_ij = K(s_i, t_j) w_j.
OperatorMatrix kernel_operator(GridPtr grid, const Kernel& kernel, std::string label);

/// v -> <v, phi> u with <v, phi> = sum_j w_j conj(phi_j) v_j.
OperatorMatrix rank_one(const LpVector& u, const LpVector& phi, std::string label = {});

/// gamma I - T.
OperatorMatrix gamma_shift(const OperatorMatrix& t, Scalar gamma);

/// I - T.
OperatorMatrix complement(const OperatorMatrix& t);

OperatorMatrix scaled(const OperatorMatrix& t, Scalar c);

/// T composed with multiplication by the sign g: column j scaled by g_j.
OperatorMatrix multiply_by_sign(const OperatorMatrix& t, const SignVector& g);

/// T composed with multiplication by a bounded function g.
OperatorMatrix multiply_by_function(const OperatorMatrix& t, const LpVector& g);

}  // namespace nlab
