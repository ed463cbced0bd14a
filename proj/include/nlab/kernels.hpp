#pragma once

// Data-parallel inner loops. Every kernel exists twice: an OpenMP version
// used by the library, and a plain serial reference used by the tests and the
// benchmark. Both produce bit-identical results: parallel loops only split
// independent outputs, and merges run serially in index order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nlab/types.hpp"

namespace nlab::kernels {

/// Row-major copy of a square matrix and of its conjugate transpose.
template <class S>
struct DenseOp {
  std::size_t n = 0;
  std::vector<S> a;
  std::vector<S> ah;
};

/// For S = double the imaginary parts of m are dropped; callers check
/// realness first.
template <class S>
DenseOp<S> make_dense(const CMatrix& m);

/// Best point of the two-valued family f = a on k cells, 1 on n - k cells,
/// for the operator I - gamma E on an n-cell equal grid.
struct TwoValuedProblem {
  std::size_t n = 0;
  Scalar gamma{1.0, 0.0};
  double p = 2.0;
  std::span<const Scalar> mesh;  // candidate values of a
};

struct TwoValuedBest {
  std::size_t k = 0;
  std::size_t mesh_index = 0;
  double value = 0.0;  // ||(I - gamma E) f||_p / ||f||_p
};

/// Closed-form ratio for one member of the two-valued family.
double two_valued_ratio(double alpha, Scalar a, Scalar gamma, double p);

/// Exhaustive minimisation of ||T g||_p over signs g on a fixed support
/// (cell 0 of the support pinned to +1, since g and -g are equivalent).
struct SignEnumProblem {
  std::size_t rows = 0;               // grid cell count
  std::size_t k = 0;                  // support size, 1..24
  std::span<const Scalar> columns;    // T restricted to the support, column-major rows x k
  std::span<const double> row_weights;
  std::span<const double> cell_weights;  // weights of the support cells
  double p = 2.0;
  double eta = 0.0;                   // admissible |residual|
};

struct SignEnumResult {
  bool feasible = false;
  std::vector<std::int8_t> signs;  // length k
  double value = 0.0;
  std::uint64_t evaluations = 0;
};

/// Dense sampling of the real unit sphere: directions with one coordinate
/// pinned to 1 and the others on a uniform grid of `resolution` points in
/// [-1, 1].
struct SphereSampleProblem {
  const CMatrix* t = nullptr;
  std::span<const double> weights;
  double p = 2.0;
  bool maximize = true;
  std::size_t resolution = 41;
};

struct SphereSampleResult {
  double value = 0.0;
  Eigen::VectorXd direction;
  std::uint64_t evaluations = 0;
};

namespace serial {
template <class S>
void matvec(const DenseOp<S>& op, std::span<const S> x, std::span<S> y);
template <class S>
void adjoint_matvec(const DenseOp<S>& op, std::span<const S> x, std::span<S> y);
TwoValuedBest scan_two_valued(const TwoValuedProblem& problem);
SignEnumResult enumerate_signs(const SignEnumProblem& problem);
SphereSampleResult sample_sphere(const SphereSampleProblem& problem);
}  // namespace serial

namespace parallel {
template <class S>
void matvec(const DenseOp<S>& op, std::span<const S> x, std::span<S> y);
template <class S>
void adjoint_matvec(const DenseOp<S>& op, std::span<const S> x, std::span<S> y);
TwoValuedBest scan_two_valued(const TwoValuedProblem& problem);
SignEnumResult enumerate_signs(const SignEnumProblem& problem);
SphereSampleResult sample_sphere(const SphereSampleProblem& problem);
}  // namespace parallel

}  // namespace nlab::kernels
