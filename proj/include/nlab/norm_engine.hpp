#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlab/exponent.hpp"
#include "nlab/lp_vector.hpp"
#include "nlab/operator_zoo.hpp"

namespace nlab {

enum class BoundKind { Exact, LowerBound, UpperBound };
std::string_view to_string(BoundKind kind);

/// A norm value together with the direction of its uncertainty. When a
/// witness is present it has unit p-norm and attains `value` to 1e-9.
struct NormEstimate {
  double value = 0.0;
  BoundKind kind = BoundKind::Exact;
  std::optional<LpVector> witness;
  std::string solver;
  std::uint64_t seed = 0;
};

enum class Strategy { Auto, Exact, Power, Descent, Brute };
/// Accepts "auto", "exact", "power", "descent", "brute"; throws otherwise.
Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy strategy);

/// Scalar field searched by the heuristic solvers. Closed-form routines are
/// field independent.
enum class Field { Complex, Real };

struct SolverOptions {
  Strategy strategy = Strategy::Auto;
  std::uint64_t seed = 0;
  Field field = Field::Complex;
  int restarts = 32;
  int max_iterations = 10000;
  double tolerance = 1e-12;
  int descent_restarts = 8;
  int descent_iterations = 500;
  std::size_t brute_resolution = 41;
  int brute_zoom_rounds = 16;
  /// Extra starting vectors (warm starts); evaluated and polished.
  std::vector<LpVector> candidates;
};

/// ||T||_{p->p}. Exact at p = 1 (weighted column sums) and p = 2 (largest
/// singular value of W^{1/2} T W^{-1/2}); otherwise a lower bound from the
/// multistart dual power iteration.
NormEstimate op_norm_p(const OperatorMatrix& t, const Exponent& p, const SolverOptions& options = {});

/// inf_{||u||_p = 1} ||T u||_p. Exact when T has a numerical null vector, at
/// p = 2 (smallest singular value) and at p = 1 for invertible T
/// (1 / ||T^{-1}||_1); otherwise an upper bound from inverse power iteration
/// polished by projected descent on the unit sphere.
NormEstimate min_modulus(const OperatorMatrix& t, const Exponent& p, const SolverOptions& options = {});

enum class Extremum { Max, Min };

/// Independent oracle for tiny grids (n <= 6): enumerates real directions on
/// a grid and zooms in on the best one. Lower bound in max mode, upper bound
/// in min mode.
NormEstimate brute_force_norm(const OperatorMatrix& t, const Exponent& p, Extremum mode,
                              std::size_t resolution = 41, int zoom_rounds = 16);

/// Certified upper bound on ||T||_p by Riesz-Thorin interpolation between
/// the exact p = 1, 2 and infinity norms. Exact at p in {1, 2}.
NormEstimate op_norm_upper_bound(const OperatorMatrix& t, const Exponent& p);

/// max_j (sum_i w_i |T_ij|) / w_j.
double column_sum_norm(const OperatorMatrix& t);
/// max_i sum_j |T_ij|, the L^infinity operator norm.
double row_sum_norm(const OperatorMatrix& t);

/// ||T w||_p / ||w||_p.
double rayleigh_value(const OperatorMatrix& t, const LpVector& w, const Exponent& p);

}  // namespace nlab
