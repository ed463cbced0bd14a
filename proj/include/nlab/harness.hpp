#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nlab/franchetti.hpp"
#include "nlab/norm_engine.hpp"
#include "nlab/operator_zoo.hpp"

namespace nlab {

/// One operator family from a zoo specification string.
///
/// Grammar (entries separated by ','):
///   entry   := [scale '*'] atom
///   atom    := 'mean' | 'identity' | 'zero'
///            | 'condexp:m=' int          conditional expectation, m equal blocks
///            | 'kernel:' name            name in {st, exp, min, one, zero}
///            | 'rankone:' name           name in {ones, ramp}
///   scale   := real number
struct ZooEntry {
  std::string label;
  double m_eff = 1.0;    // intrinsic coarse scale used by the tolerance rule
  bool control = false;  // non-narrow control, excluded from pass/fail
  std::function<OperatorMatrix(const GridPtr&)> build;
};

ZooEntry parse_zoo_entry(std::string_view text);
std::vector<ZooEntry> parse_zoo(std::string_view text);

/// tolerance = base + per_block * m_eff / n, written "<base>+<per_block>*m/n".
struct ToleranceRule {
  double base = 0.05;
  double per_block = 16.0;

  static ToleranceRule parse(std::string_view text);
  double operator()(double m_eff, std::size_t n) const { return base + per_block * m_eff / static_cast<double>(n); }
  std::string to_string() const;
};

struct TheoremCheck {
  std::string operator_label;
  double p = 1.0;
  Scalar gamma;
  std::size_t n = 0;
  NormEstimate lhs_norm;  // ||I - T||
  NormEstimate delta;     // inf ||(gamma I - T) u||
  RhsEstimate rhs;        // ||I - gamma E||
  double margin = 0.0;
  double tolerance = 0.0;
  double m_eff = 1.0;
  bool control = false;
  bool pass = false;
};

struct TheoremRunOptions {
  std::uint64_t seed = 0;
  ToleranceRule tolerance;
  int restarts = 32;
};

/// One row per (operator, p, gamma). Rows are computed concurrently with
/// seeds derived from (seed, job index) and returned in row order.
std::vector<TheoremCheck> theorem_check(const std::vector<ZooEntry>& zoo, const std::vector<double>& p_list,
                                        const std::vector<Scalar>& gamma_list, std::size_t n,
                                        const TheoremRunOptions& options = {});

struct DaugavetRow {
  std::size_t m = 0;
  double c = 0.0;
  std::size_t n = 0;
  double norm_i_minus_t = 0.0;  // ||I - T||_1
  double norm_t = 0.0;          // ||T||_1
  double discrepancy = 0.0;     // | ||I - T||_1 - (1 + ||T||_1) |
  double budget = 0.0;          // 2 c m / n
  bool pass = false;
};

/// T = c E^G with m equal blocks, p = 1, exact column sums.
std::vector<DaugavetRow> daugavet_check(const std::vector<std::size_t>& m_list, const std::vector<double>& c_list,
                                        const std::vector<std::size_t>& n_list);

std::vector<CpResult> cp_table(const std::vector<double>& p_list);

struct ConvergenceRow {
  double p = 1.0;
  std::size_t n = 0;
  double rhs = 0.0;
  BoundKind kind = BoundKind::Exact;
  double cp = 0.0;
  double gap = 0.0;  // cp - rhs
  bool nondecreasing = true;
};

struct ConvergenceSummary {
  std::vector<ConvergenceRow> rows;
  bool monotone = true;
  bool final_gap_ok = true;
  double gap_threshold = 1e-2;
};

/// ||I - E||_p on n = 2^1 .. 2^levels with witnesses carried between levels.
ConvergenceSummary convergence_run(const std::vector<double>& p_list, int levels, std::uint64_t seed = 0,
                                   double gap_threshold = 1e-2);

}  // namespace nlab
