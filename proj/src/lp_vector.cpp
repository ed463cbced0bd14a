#include "nlab/lp_vector.hpp"

#include <cmath>
#include <string>

#include "nlab/sign_vector.hpp"
#include "nlab/util.hpp"

namespace nlab {

LpVector::LpVector(GridPtr grid, CVector coeffs) : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (!grid_) throw Error("vector needs a grid");
  if (static_cast<std::size_t>(coeffs_.size()) != grid_->size()) {
    throw Error("coefficient count " + std::to_string(coeffs_.size()) + " differs from grid size " +
                std::to_string(grid_->size()));
  }
}

LpVector LpVector::zeros(GridPtr grid) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return {std::move(grid), CVector::Zero(n)};
}

LpVector LpVector::ones(GridPtr grid) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  return {std::move(grid), CVector::Ones(n)};
}

LpVector LpVector::indicator(GridPtr grid, std::span<const std::size_t> cells) {
  CVector c = CVector::Zero(static_cast<Eigen::Index>(grid->size()));
  for (auto i : cells) {
    if (i >= grid->size()) throw Error("indicator cell out of range");
    c[static_cast<Eigen::Index>(i)] = 1.0;
  }
  return {std::move(grid), std::move(c)};
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!a.same_as(b)) throw Error(std::string(what) + ": grid mismatch");
}

LpVector LpVector::operator+(const LpVector& other) const {
  require_same_grid(*grid_, *other.grid_, "vector sum");
  return {grid_, coeffs_ + other.coeffs_};
}

LpVector LpVector::operator-(const LpVector& other) const {
  require_same_grid(*grid_, *other.grid_, "vector difference");
  return {grid_, coeffs_ - other.coeffs_};
}

LpVector LpVector::operator*(Scalar c) const { return {grid_, coeffs_ * c}; }

double lp_norm_pow(std::span<const Scalar> coeffs, std::span<const double> weights, double p) {
  double sum = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) sum += weights[i] * std::abs(coeffs[i]);
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) sum += weights[i] * std::norm(coeffs[i]);
  } else {
    for (std::size_t i = 0; i < coeffs.size(); ++i) sum += weights[i] * std::pow(std::abs(coeffs[i]), p);
  }
  return sum;
}

double lp_norm(std::span<const Scalar> coeffs, std::span<const double> weights, double p) {
  // Scale by the largest modulus so |c|^p cannot overflow or underflow.
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  if (p == 1.0) return lp_norm_pow(coeffs, weights, 1.0);
  if (p == 2.0) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) sum += weights[i] * std::norm(coeffs[i] / scale);
    return scale * std::sqrt(sum);
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) sum += weights[i] * std::pow(std::abs(coeffs[i]) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

double lp_norm(const LpVector& v, const Exponent& p) {
  return lp_norm(v.span(), v.grid()->weights(), p.value());
}

LpVector simple_approximation(const LpVector& v, const PartitionMap& part) {
  require_same_grid(*v.grid(), *part.grid(), "simple_approximation");
  const Grid& g = *v.grid();
  CVector out(static_cast<Eigen::Index>(g.size()));
  for (std::size_t k = 0; k < part.block_count(); ++k) {
    Scalar mean = 0.0;
    for (auto i : part.members(k)) mean += g.weight(i) * v[i];
    mean /= part.block_weight(k);
    for (auto i : part.members(k)) out[static_cast<Eigen::Index>(i)] = mean;
  }
  return {v.grid(), std::move(out)};
}

LpVector embed(const LpVector& v, GridPtr fine, std::span<const std::size_t> refinement_map) {
  const Grid& coarse = *v.grid();
  if (refinement_map.size() != fine->size()) throw Error("refinement map length differs from fine grid size");
  std::vector<double> aggregated(coarse.size(), 0.0);
  for (std::size_t i = 0; i < refinement_map.size(); ++i) {
    if (refinement_map[i] >= coarse.size()) throw Error("refinement map points outside the coarse grid");
    aggregated[refinement_map[i]] += fine->weight(i);
  }
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    if (std::abs(aggregated[j] - coarse.weight(j)) > 1e-12) {
      throw Error("fine weights do not aggregate to coarse cell " + std::to_string(j));
    }
  }
  CVector out(static_cast<Eigen::Index>(fine->size()));
  for (std::size_t i = 0; i < refinement_map.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[refinement_map[i]];
  return {std::move(fine), std::move(out)};
}

SignVector::SignVector(GridPtr grid, std::vector<std::int8_t> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw Error("sign length differs from grid size");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] < -1 || values_[i] > 1) throw Error("sign values must lie in {-1, 0, 1}");
    residual_ += values_[i] * grid_->weight(i);
  }
}

SignVector SignVector::zero(GridPtr grid) {
  const std::size_t n = grid->size();
  return {std::move(grid), std::vector<std::int8_t>(n, 0)};
}

std::vector<std::size_t> SignVector::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0) s.push_back(i);
  }
  return s;
}

LpVector SignVector::to_lp_vector() const {
  CVector c(static_cast<Eigen::Index>(values_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) c[static_cast<Eigen::Index>(i)] = static_cast<double>(values_[i]);
  return {grid_, std::move(c)};
}

std::uint64_t SignVector::hash() const {
  std::string text(values_.size(), '0');
  for (std::size_t i = 0; i < values_.size(); ++i) text[i] = values_[i] > 0 ? '+' : (values_[i] < 0 ? '-' : '0');
  return fnv1a(text);
}

}  // namespace nlab
