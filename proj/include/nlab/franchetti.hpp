#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlab/exponent.hpp"
#include "nlab/norm_engine.hpp"

namespace nlab {

/// (a^{p-1} + (1-a)^{p-1})^{1/p} (a^{1/(p-1)} + (1-a)^{1/(p-1)})^{1-1/p}
/// for 0 <= a <= 1 and p > 1, evaluated in log form with 0^x = 0.
double cp_objective(double alpha, const Exponent& p);

struct CpResult {
  double p = 1.0;
  double value = 2.0;
  double alpha_star = 0.0;  // smaller maximiser of the symmetric pair
  std::string method;
};

/// Maximum of cp_objective over [0, 1]; 2 for p = 1.
CpResult cp_constant(const Exponent& p);

struct RhsEstimate {
  Scalar gamma;
  double p = 1.0;
  std::size_t grid_n = 0;
  NormEstimate value;
};

struct RhsOptions {
  std::uint64_t seed = 0;
  int restarts = 8;
  /// Witnesses carried over from a coarser grid (already embedded).
  std::vector<LpVector> warm_start;
};

/// Two-valued mesh for the ratio a / b (b = 1): 0 and +-10^{-2 + 4j/2000},
/// j = 1..2000, for real gamma; the magnitudes times 64 phases for complex
/// gamma.
std::vector<Scalar> two_valued_mesh(Scalar gamma);

/// Two-valued witness: a on the first k cells, 1 elsewhere, unit p-norm.
LpVector two_valued_vector(const GridPtr& grid, std::size_t k, Scalar a, const Exponent& p);

/// ||I - gamma E||_p on an equal grid: best of the power iteration and the
/// exhaustive two-valued scan. Never an upper bound.
RhsEstimate rhs_norm(Scalar gamma, const Exponent& p, const GridPtr& grid, const RhsOptions& options = {});

}  // namespace nlab
