#include "nlab/operator_zoo.hpp"

#include <cmath>
#include <sstream>

#include "nlab/util.hpp"

namespace nlab {

namespace {

Eigen::Index dim(const Grid& g) { return static_cast<Eigen::Index>(g.size()); }

std::string scalar_label(Scalar c) { return format_complex(c); }

}  // namespace

OperatorMatrix::OperatorMatrix(GridPtr grid, CMatrix entries, std::string label, bool certified_projection)
    : grid_(std::move(grid)), entries_(std::move(entries)), label_(std::move(label)),
      certified_projection_(certified_projection) {
  if (!grid_) throw Error("operator needs a grid");
  if (entries_.rows() != dim(*grid_) || entries_.cols() != dim(*grid_)) {
    throw Error("operator matrix must be square with the grid's cell count");
  }
  if (label_.empty()) throw Error("operator label is mandatory");
  real_ = (entries_.imag().array() == 0.0).all();
}

LpVector apply(const OperatorMatrix& t, const LpVector& v) {
  require_same_grid(*t.grid(), *v.grid(), "apply");
  return {t.grid(), t.entries() * v.coeffs()};
}

OperatorMatrix identity(GridPtr grid) {
  const auto n = dim(*grid);
  return {std::move(grid), CMatrix::Identity(n, n), "identity", true};
}

OperatorMatrix zero_operator(GridPtr grid) {
  const auto n = dim(*grid);
  return {std::move(grid), CMatrix::Zero(n, n), "zero"};
}

OperatorMatrix mean_operator(GridPtr grid) {
  const auto n = dim(*grid);
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j).setConstant(grid->weight(static_cast<std::size_t>(j)));
  return {std::move(grid), std::move(m), "mean", true};
}

OperatorMatrix conditional_expectation(const PartitionMap& part) {
  const Grid& g = *part.grid();
  CMatrix m = CMatrix::Zero(dim(g), dim(g));
  for (std::size_t k = 0; k < part.block_count(); ++k) {
    for (auto i : part.members(k)) {
      for (auto j : part.members(k)) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g.weight(j) / part.block_weight(k);
      }
    }
  }
  return {part.grid(), std::move(m), "condexp:m=" + std::to_string(part.block_count()), true};
}

OperatorMatrix coarsening_projection(const PartitionMap& part) {
  auto e = conditional_expectation(part);
  return {part.grid(), e.entries(), "projection:m=" + std::to_string(part.block_count()), true};
}

OperatorMatrix kernel_operator(GridPtr grid, const Kernel& kernel, std::string label) {
  const auto n = dim(*grid);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = grid->midpoint(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double t = grid->midpoint(static_cast<std::size_t>(j));
      const double k = kernel(s, t);
      if (!std::isfinite(k)) {
        std::ostringstream msg;
        msg << "kernel '" << label << "' is not finite at (" << s << ", " << t << ")";
        throw Error(msg.str());
      }
      m(i, j) = k * grid->weight(static_cast<std::size_t>(j));
    }
  }
  return {std::move(grid), std::move(m), std::move(label)};
}

OperatorMatrix rank_one(const LpVector& u, const LpVector& phi, std::string label) {
  require_same_grid(*u.grid(), *phi.grid(), "rank_one");
  const Grid& g = *u.grid();
  CVector row(dim(g));
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    row[j] = g.weight(static_cast<std::size_t>(j)) * std::conj(phi.coeffs()[j]);
  }
  CMatrix m = u.coeffs() * row.transpose();
  if (label.empty()) label = "rankone";
  return {u.grid(), std::move(m), std::move(label)};
}

OperatorMatrix gamma_shift(const OperatorMatrix& t, Scalar gamma) {
  CMatrix m = -t.entries();
  m.diagonal().array() += gamma;
  return {t.grid(), std::move(m), "(" + scalar_label(gamma) + ")I-[" + t.label() + "]"};
}

OperatorMatrix complement(const OperatorMatrix& t) {
  CMatrix m = -t.entries();
  m.diagonal().array() += 1.0;
  return {t.grid(), std::move(m), "I-[" + t.label() + "]"};
}

OperatorMatrix scaled(const OperatorMatrix& t, Scalar c) {
  return {t.grid(), t.entries() * c, scalar_label(c) + "*" + t.label()};
}

OperatorMatrix multiply_by_sign(const OperatorMatrix& t, const SignVector& g) {
  require_same_grid(*t.grid(), *g.grid(), "multiply_by_sign");
  CMatrix m = t.entries();
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) *= static_cast<double>(g[static_cast<std::size_t>(j)]);
  return {t.grid(), std::move(m), "[" + t.label() + "]g"};
}

OperatorMatrix multiply_by_function(const OperatorMatrix& t, const LpVector& g) {
  require_same_grid(*t.grid(), *g.grid(), "multiply_by_function");
  CMatrix m = t.entries();
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j) *= g.coeffs()[j];
  return {t.grid(), std::move(m), "[" + t.label() + "]gI"};
}

}  // namespace nlab
