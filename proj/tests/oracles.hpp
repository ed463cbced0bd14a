#pragma once

// Reference computations written independently of the library code paths:
// plain loops, a different factorisation, no shared helpers beyond the
// operator constructors.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "nlab/operator_zoo.hpp"

namespace oracle {

// The C_p objective written as printed, with std::pow.
inline double cp_plain(double a, double p) {
  const double r = 1.0 / (p - 1.0);
  return std::pow(std::pow(a, p - 1.0) + std::pow(1.0 - a, p - 1.0), 1.0 / p) *
         std::pow(std::pow(a, r) + std::pow(1.0 - a, r), 1.0 - 1.0 / p);
}

// Maximum over a uniform grid on [0, 1].
inline double cp_grid_scan(double p, double step = 1e-6) {
  const auto count = static_cast<long>(std::llround(1.0 / step));
  double best = 0.0;
  for (long i = 0; i <= count; ++i) best = std::max(best, cp_plain(static_cast<double>(i) / count, p));
  return best;
}

// max_j sum_i w_i |T_ij| / w_j.
inline double column_sum(const nlab::OperatorMatrix& t) {
  const auto& g = *t.grid();
  double best = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      s += g.weight(i) * std::abs(t.entries()(static_cast<long>(i), static_cast<long>(j)));
    }
    best = std::max(best, s / g.weight(j));
  }
  return best;
}

// Singular values of the weighted L^2 operator from the eigenvalues of
// A^H A with A = W^{1/2} T W^{-1/2}. Returns {min, max}.
inline std::pair<double, double> spectral(const nlab::OperatorMatrix& t) {
  const auto& g = *t.grid();
  const long n = static_cast<long>(g.size());
  nlab::CMatrix a = t.entries();
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) a(i, j) *= std::sqrt(g.weight(static_cast<std::size_t>(i)) / g.weight(static_cast<std::size_t>(j)));
  }
  Eigen::SelfAdjointEigenSolver<nlab::CMatrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {std::sqrt(std::max(ev.minCoeff(), 0.0)), std::sqrt(std::max(ev.maxCoeff(), 0.0))};
}

// 1 / ||T^{-1}||_1 through a full-pivot inverse.
inline double inverse_column_sum(const nlab::OperatorMatrix& t) {
  const nlab::CMatrix inv = t.entries().fullPivLu().inverse();
  return 1.0 / column_sum(nlab::OperatorMatrix(t.grid(), inv, "inv"));
}

// Weighted p-norm of T g for every sign pattern on the support and the
// smallest over mean-zero ones (|residual| <= eta). Plain nested loops.
inline double best_sign_value(const nlab::OperatorMatrix& t, const std::vector<std::size_t>& support, double p,
                              double eta) {
  const auto& g = *t.grid();
  const std::size_t k = support.size();
  double best = INFINITY;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<double> s(g.size(), 0.0);
    double residual = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      s[support[c]] = (mask >> c) & 1 ? -1.0 : 1.0;
      residual += s[support[c]] * g.weight(support[c]);
    }
    if (std::abs(residual) > eta) continue;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::complex<double> y = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) y += t.entries()(static_cast<long>(i), static_cast<long>(j)) * s[j];
      acc += g.weight(i) * std::pow(std::abs(y), p);
    }
    best = std::min(best, std::pow(acc, 1.0 / p));
  }
  return best;
}

}  // namespace oracle
