#include "nlab/harness.hpp"

#include <cmath>
#include <map>
#include <optional>

#include "nlab/util.hpp"

namespace nlab {

namespace {

// Seed salts keep the three job families on disjoint streams.
constexpr std::uint64_t kLhsSalt = 0x6c6873;
constexpr std::uint64_t kDeltaSalt = 0x64656c;
constexpr std::uint64_t kRhsSalt = 0x726873;

}  // namespace

std::vector<TheoremCheck> theorem_check(const std::vector<ZooEntry>& zoo, const std::vector<double>& p_list,
                                        const std::vector<Scalar>& gamma_list, std::size_t n,
                                        const TheoremRunOptions& options) {
  if (zoo.empty() || p_list.empty() || gamma_list.empty()) throw Error("theorem_check needs operators, exponents and gammas");
  std::vector<Exponent> exps;
  for (double p : p_list) exps.emplace_back(p);
  const auto grid = make_equal_grid(n);
  std::vector<OperatorMatrix> ops;
  for (const auto& z : zoo) ops.push_back(z.build(grid));

  const int n_ops = static_cast<int>(ops.size());
  const int n_p = static_cast<int>(exps.size());
  const int n_g = static_cast<int>(gamma_list.size());

  auto solver = [&](std::uint64_t salt, std::uint64_t job) {
    SolverOptions o;
    o.seed = mix_seed(mix_seed(options.seed, salt), job);
    o.restarts = options.restarts;
    return o;
  };

  // ||I - T|| per (operator, p) and ||I - gamma E|| per (gamma, p) are shared by rows.
  std::vector<NormEstimate> lhs(static_cast<std::size_t>(n_ops * n_p));
#pragma omp parallel for schedule(dynamic, 1)
  for (int job = 0; job < n_ops * n_p; ++job) {
    const auto& t = ops[static_cast<std::size_t>(job / n_p)];
    lhs[static_cast<std::size_t>(job)] =
        op_norm_p(complement(t), exps[static_cast<std::size_t>(job % n_p)], solver(kLhsSalt, static_cast<std::uint64_t>(job)));
  }
  std::vector<RhsEstimate> rhs(static_cast<std::size_t>(n_g * n_p));
#pragma omp parallel for schedule(dynamic, 1)
  for (int job = 0; job < n_g * n_p; ++job) {
    RhsOptions o;
    o.seed = mix_seed(mix_seed(options.seed, kRhsSalt), static_cast<std::uint64_t>(job));
    rhs[static_cast<std::size_t>(job)] =
        rhs_norm(gamma_list[static_cast<std::size_t>(job / n_p)], exps[static_cast<std::size_t>(job % n_p)], grid, o);
  }

  const int rows = n_ops * n_p * n_g;
  std::vector<TheoremCheck> out(static_cast<std::size_t>(rows));
#pragma omp parallel for schedule(dynamic, 1)
  for (int row = 0; row < rows; ++row) {
    const int oi = row / (n_p * n_g);
    const int pi = (row / n_g) % n_p;
    const int gi = row % n_g;
    const auto& entry = zoo[static_cast<std::size_t>(oi)];
    const Scalar gamma = gamma_list[static_cast<std::size_t>(gi)];
    TheoremCheck& c = out[static_cast<std::size_t>(row)];
    c.operator_label = entry.label;
    c.p = p_list[static_cast<std::size_t>(pi)];
    c.gamma = gamma;
    c.n = n;
    c.lhs_norm = lhs[static_cast<std::size_t>(oi * n_p + pi)];
    c.delta = min_modulus(gamma_shift(ops[static_cast<std::size_t>(oi)], gamma), exps[static_cast<std::size_t>(pi)],
                          solver(kDeltaSalt, static_cast<std::uint64_t>(row)));
    c.rhs = rhs[static_cast<std::size_t>(gi * n_p + pi)];
    c.margin = c.lhs_norm.value + c.delta.value - c.rhs.value.value;
    c.m_eff = entry.m_eff;
    c.tolerance = options.tolerance(entry.m_eff, n);
    c.control = entry.control;
    c.pass = c.margin >= -c.tolerance;
  }
  return out;
}

std::vector<DaugavetRow> daugavet_check(const std::vector<std::size_t>& m_list, const std::vector<double>& c_list,
                                        const std::vector<std::size_t>& n_list) {
  std::vector<DaugavetRow> out;
  for (auto n : n_list) {
    const auto grid = make_equal_grid(n);
    for (auto m : m_list) {
      const auto ce = conditional_expectation(PartitionMap::equal_blocks(grid, m));
      for (double c : c_list) {
        const auto t = scaled(ce, c);
        DaugavetRow r;
        r.m = m;
        r.c = c;
        r.n = n;
        r.norm_i_minus_t = column_sum_norm(complement(t));
        r.norm_t = column_sum_norm(t);
        r.discrepancy = std::abs(r.norm_i_minus_t - (1.0 + r.norm_t));
        r.budget = 2.0 * std::abs(c) * static_cast<double>(m) / static_cast<double>(n);
        r.pass = r.discrepancy <= r.budget + 1e-12;
        out.push_back(r);
      }
    }
  }
  return out;
}

std::vector<CpResult> cp_table(const std::vector<double>& p_list) {
  std::vector<CpResult> out;
  for (double p : p_list) out.push_back(cp_constant(Exponent(p)));
  return out;
}

ConvergenceSummary convergence_run(const std::vector<double>& p_list, int levels, std::uint64_t seed,
                                   double gap_threshold) {
  if (levels < 1 || levels > 16) throw Error("convergence levels must be in 1..16");
  ConvergenceSummary summary;
  summary.gap_threshold = gap_threshold;
  for (std::size_t pi = 0; pi < p_list.size(); ++pi) {
    const Exponent p(p_list[pi]);
    const double cp = cp_constant(p).value;
    std::optional<LpVector> carried;
    double previous = -1.0;
    ConvergenceRow last;
    for (int k = 1; k <= levels; ++k) {
      const std::size_t n = std::size_t{1} << k;
      const auto grid = make_equal_grid(n);
      RhsOptions o;
      o.seed = mix_seed(mix_seed(seed, pi), static_cast<std::uint64_t>(k));
      if (carried) o.warm_start.push_back(embed(*carried, grid, dyadic_refinement_map(n / 2)));
      const auto est = rhs_norm(Scalar{1.0, 0.0}, p, grid, o);
      ConvergenceRow row;
      row.p = p.value();
      row.n = n;
      row.rhs = est.value.value;
      row.kind = est.value.kind;
      row.cp = cp;
      row.gap = cp - row.rhs;
      row.nondecreasing = row.rhs >= previous - 1e-12;
      summary.monotone = summary.monotone && row.nondecreasing;
      previous = row.rhs;
      carried = est.value.witness;
      summary.rows.push_back(row);
      last = row;
    }
    summary.final_gap_ok = summary.final_gap_ok && last.gap <= gap_threshold;
  }
  return summary;
}

}  // namespace nlab
