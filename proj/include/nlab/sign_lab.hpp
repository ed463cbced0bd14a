#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlab/exponent.hpp"
#include "nlab/operator_zoo.hpp"
#include "nlab/sign_vector.hpp"

namespace nlab {

/// No sign on the requested support has |residual| <= eta.
class InfeasibleSign : public Error {
 public:
  using Error::Error;
};

enum class SearchMode { Auto, Exhaustive, Randomized };

struct SignSearchOptions {
  std::optional<double> eta;  // default: half the smallest cell weight
  std::uint64_t budget = 50000;  // objective evaluations (randomized mode)
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::Auto;  // Auto: exhaustive when |A| <= 20
};

double default_eta(const Grid& grid);

struct SignSearchResult {
  SignVector sign;
  double value = 0.0;  // ||T g||_p
  std::uint64_t evaluations = 0;
  bool exhaustive = false;
};

/// Smallest ||T g||_p over signs g with support exactly A and
/// |residual| <= eta.
SignSearchResult find_mean_zero_sign(const OperatorMatrix& t, std::span<const std::size_t> support,
                                     const Exponent& p, const SignSearchOptions& options = {});

/// Pointwise sum of signs with pairwise disjoint supports.
SignVector combine_signs(std::span<const SignVector> parts, const GridPtr& grid);

struct Lemma1Piece {
  std::size_t block = 0;
  Scalar mean;         // a_k, the block mean of g
  double value = 0.0;  // ||T h_k||_p
};

struct Lemma1Witness {
  SignVector h;
  double measured = 0.0;     // ||T (g h)||_p
  double audit_bound = 0.0;  // piece_term + tail_term
  double piece_term = 0.0;   // sum_k |a_k| ||T h_k||_p
  double tail_term = 0.0;    // ||T||_p^upper ||g - g0||_inf ||h||_p
  double norm_upper = 0.0;
  double sup_error = 0.0;
  bool target_met = false;   // measured < epsilon
  std::vector<Lemma1Piece> pieces;
  std::uint64_t evaluations = 0;
};

/// Builds a mean-zero sign h on A that T composed with multiplication by g
/// maps to a small vector: g is replaced by its block means g0, a small sign
/// is found on each piece A cap B_k, and the pieces are combined. Reports the
/// measured value and the piecewise bound it is guaranteed to respect.
Lemma1Witness lemma1_witness(const OperatorMatrix& t, const LpVector& g_mult, const PartitionMap& part,
                             std::span<const std::size_t> support, const Exponent& p, double epsilon,
                             const SignSearchOptions& options = {});

/// Which cells a narrowness profile searches on, per grid.
struct SupportRule {
  enum class Kind { All, Dyadic };
  Kind kind = Kind::All;
  int level = 0;
  std::size_t index = 0;

  /// "all" or "dyadic:<level>:<index>" (cells with midpoint in
  /// [index / 2^level, (index + 1) / 2^level)).
  static SupportRule parse(std::string_view text);
  std::vector<std::size_t> cells(const Grid& grid) const;
  std::string to_string() const;
};

struct ProfileRow {
  std::size_t n = 0;
  double best_value = 0.0;
  std::uint64_t sign_hash = 0;
  std::uint64_t evaluations = 0;
};

using OperatorFamily = std::function<OperatorMatrix(const GridPtr&)>;

/// Best sign value on the rule's support at each grid size.
std::vector<ProfileRow> narrowness_profile(const OperatorFamily& family, std::span<const std::size_t> sizes,
                                           const Exponent& p, const SupportRule& rule,
                                           const SignSearchOptions& options = {});

}  // namespace nlab
