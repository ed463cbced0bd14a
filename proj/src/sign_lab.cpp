#include "nlab/sign_lab.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "nlab/kernels.hpp"
#include "nlab/norm_engine.hpp"
#include "nlab/util.hpp"

namespace nlab {

namespace {

constexpr std::size_t kExhaustiveLimit = 20;
constexpr std::size_t kExhaustiveHardLimit = 24;
constexpr int kAnnealRestarts = 8;

struct Restricted {
  std::size_t rows = 0;
  std::vector<std::size_t> cells;
  std::vector<Scalar> columns;  // column-major rows x |A|
  std::vector<double> cell_weights;
};

Restricted restrict_to(const OperatorMatrix& t, const std::vector<std::size_t>& cells) {
  Restricted r;
  r.rows = t.size();
  r.cells = cells;
  r.columns.resize(r.rows * cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t i = 0; i < r.rows; ++i) {
      r.columns[c * r.rows + i] = t.entries()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cells[c]));
    }
    r.cell_weights.push_back(t.grid()->weight(cells[c]));
  }
  return r;
}

double pow_value(const std::vector<Scalar>& y, std::span<const double> w, double p) {
  return lp_norm_pow(std::span<const Scalar>(y), w, p);
}

SignVector to_sign(const GridPtr& grid, const std::vector<std::size_t>& cells, const std::vector<std::int8_t>& signs) {
  std::vector<std::int8_t> values(grid->size(), 0);
  // Canonical representative of {g, -g}: first support cell positive.
  const std::int8_t flip = signs.empty() || signs.front() > 0 ? 1 : -1;
  for (std::size_t c = 0; c < cells.size(); ++c) values[cells[c]] = static_cast<std::int8_t>(signs[c] * flip);
  return {grid, std::move(values)};
}

struct AnnealResult {
  bool feasible = false;
  std::vector<std::int8_t> signs;
  double value_pow = std::numeric_limits<double>::infinity();
  std::uint64_t evaluations = 0;
};

bool lex_less(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void canonical(std::vector<std::int8_t>& s) {
  if (!s.empty() && s.front() < 0) {
    for (auto& v : s) v = static_cast<std::int8_t>(-v);
  }
}

AnnealResult anneal(const Restricted& r, std::span<const double> row_weights, double p, double eta,
                    std::uint64_t budget, std::uint64_t seed) {
  AnnealResult out;
  const std::size_t k = r.cells.size();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r.cell_weights[a] > r.cell_weights[b]; });

  // Greedy balanced start, then single flips while they shrink |residual|.
  std::vector<std::int8_t> g(k);
  double residual = 0.0;
  for (auto c : order) {
    g[c] = residual <= 0.0 ? 1 : -1;
    residual += g[c] * r.cell_weights[c];
  }
  for (std::size_t guard = 0; std::abs(residual) > eta && guard < k; ++guard) {
    std::size_t best_c = k;
    double best_res = std::abs(residual);
    for (std::size_t c = 0; c < k; ++c) {
      const double nr = residual - 2.0 * g[c] * r.cell_weights[c];
      if (std::abs(nr) < best_res) {
        best_res = std::abs(nr);
        best_c = c;
      }
    }
    if (best_c == k) break;
    residual -= 2.0 * g[best_c] * r.cell_weights[best_c];
    g[best_c] = static_cast<std::int8_t>(-g[best_c]);
  }
  if (std::abs(residual) > eta) return out;

  auto image = [&](const std::vector<std::int8_t>& signs) {
    std::vector<Scalar> y(r.rows, Scalar{});
    for (std::size_t c = 0; c < k; ++c) {
      const Scalar* col = r.columns.data() + c * r.rows;
      for (std::size_t i = 0; i < r.rows; ++i) y[i] += static_cast<double>(signs[c]) * col[i];
    }
    return y;
  };
  std::vector<Scalar> y = image(g);
  double value = pow_value(y, row_weights, p);
  ++out.evaluations;
  out.feasible = true;
  out.signs = g;
  canonical(out.signs);
  out.value_pow = value;

  const bool equal = std::all_of(r.cell_weights.begin(), r.cell_weights.end(),
                                 [&](double w) { return w == r.cell_weights.front(); });
  const double t0 = std::max(0.05 * value, 1e-12);
  const double t_end = t0 * 1e-9;
  const double cooling = std::pow(t_end / t0, 1.0 / static_cast<double>(std::max<std::uint64_t>(budget, 2)));
  double temperature = t0;
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::uniform_int_distribution<std::size_t> move_size(1, std::min<std::size_t>(4, k));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Scalar> trial(r.rows);
  std::vector<std::size_t> flip;
  std::uint64_t accepted = 0;
  std::uint64_t proposals = 0;
  const std::uint64_t max_proposals = 20 * budget + 1000;
  while (out.evaluations < budget && proposals < max_proposals) {
    ++proposals;
    // Equal weights: swap a (+1, -1) pair, which keeps the residual. Otherwise
    // flip 1..4 random cells and keep the move only if |residual| <= eta.
    flip.clear();
    if (equal) {
      const std::size_t i = pick(rng), j = pick(rng);
      if (g[i] == g[j]) continue;
      flip = {i, j};
    } else {
      const std::size_t m = move_size(rng);
      while (flip.size() < m) {
        const std::size_t c = pick(rng);
        if (std::find(flip.begin(), flip.end(), c) == flip.end()) flip.push_back(c);
      }
    }
    double nr = residual;
    for (auto c : flip) nr -= 2.0 * g[c] * r.cell_weights[c];
    if (std::abs(nr) > eta) continue;
    trial = y;
    for (auto c : flip) {
      const Scalar* col = r.columns.data() + c * r.rows;
      const double d = -2.0 * static_cast<double>(g[c]);
      for (std::size_t row = 0; row < r.rows; ++row) trial[row] += d * col[row];
    }
    const double tv = pow_value(trial, row_weights, p);
    ++out.evaluations;
    temperature *= cooling;
    if (tv <= value || unif(rng) < std::exp(-(tv - value) / temperature)) {
      for (auto c : flip) g[c] = static_cast<std::int8_t>(-g[c]);
      residual = nr;
      std::swap(y, trial);
      value = tv;
      if (++accepted % 1024 == 0) {
        y = image(g);
        value = pow_value(y, row_weights, p);
      }
      if (value <= out.value_pow + 1e-12 * (1.0 + out.value_pow)) {
        const double fresh = pow_value(image(g), row_weights, p);
        auto cand = g;
        canonical(cand);
        if (fresh < out.value_pow || (fresh == out.value_pow && lex_less(cand, out.signs))) {
          out.value_pow = fresh;
          out.signs = std::move(cand);
        }
      }
    }
  }
  return out;
}

std::vector<std::size_t> validated_support(std::span<const std::size_t> support, const Grid& grid) {
  if (support.empty()) throw Error("sign support A must be nonempty");
  std::set<std::size_t> unique(support.begin(), support.end());
  if (unique.size() != support.size()) throw Error("sign support lists a cell twice");
  if (*unique.rbegin() >= grid.size()) throw Error("sign support cell out of range");
  return {unique.begin(), unique.end()};
}

}  // namespace

double default_eta(const Grid& grid) { return 0.5 * grid.min_weight(); }

SignSearchResult find_mean_zero_sign(const OperatorMatrix& t, std::span<const std::size_t> support,
                                     const Exponent& p, const SignSearchOptions& options) {
  const auto cells = validated_support(support, *t.grid());
  const double eta = options.eta.value_or(default_eta(*t.grid()));
  if (eta < 0.0) throw Error("mean-zero tolerance must be nonnegative");
  const std::size_t k = cells.size();
  bool exhaustive = false;
  switch (options.mode) {
    case SearchMode::Auto: exhaustive = k <= kExhaustiveLimit; break;
    case SearchMode::Exhaustive:
      if (k > kExhaustiveHardLimit) throw Error("exhaustive sign search supports at most 24 cells");
      exhaustive = true;
      break;
    case SearchMode::Randomized: exhaustive = false; break;
  }
  const Restricted r = restrict_to(t, cells);
  const auto row_weights = t.grid()->weights();
  const bool equal = std::all_of(r.cell_weights.begin(), r.cell_weights.end(),
                                 [&](double w) { return w == r.cell_weights.front(); });
  if (equal && k % 2 == 1 && eta < r.cell_weights.front()) {
    throw InfeasibleSign("no sign on an odd number of equal cells has |residual| <= eta");
  }

  std::vector<std::int8_t> signs;
  std::uint64_t evaluations = 0;
  if (exhaustive) {
    kernels::SignEnumProblem problem{r.rows, k, r.columns, row_weights, r.cell_weights, p.value(), eta};
    auto res = kernels::parallel::enumerate_signs(problem);
    if (!res.feasible) throw InfeasibleSign("no sign on the support has |residual| <= eta");
    signs = std::move(res.signs);
    evaluations = res.evaluations;
  } else {
    const int restarts = static_cast<int>(std::min<std::uint64_t>(kAnnealRestarts, std::max<std::uint64_t>(options.budget, 1)));
    const std::uint64_t per_restart = std::max<std::uint64_t>(options.budget / static_cast<std::uint64_t>(restarts), 1);
    std::vector<AnnealResult> runs(static_cast<std::size_t>(restarts));
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < restarts; ++i) {
      runs[static_cast<std::size_t>(i)] =
          anneal(r, row_weights, p.value(), eta, per_restart, mix_seed(options.seed, static_cast<std::uint64_t>(i)));
    }
    const AnnealResult* best = nullptr;
    for (const auto& run : runs) {
      evaluations += run.evaluations;
      if (!run.feasible) continue;
      if (best == nullptr || run.value_pow < best->value_pow ||
          (run.value_pow == best->value_pow && lex_less(run.signs, best->signs))) {
        best = &run;
      }
    }
    if (best == nullptr) throw InfeasibleSign("randomized search found no sign with |residual| <= eta");
    signs = best->signs;
  }
  SignVector g = to_sign(t.grid(), cells, signs);
  const double value = lp_norm(apply(t, g.to_lp_vector()), p);
  return {std::move(g), value, evaluations, exhaustive};
}

SignVector combine_signs(std::span<const SignVector> parts, const GridPtr& grid) {
  std::vector<std::int8_t> values(grid->size(), 0);
  for (const auto& part : parts) {
    require_same_grid(*part.grid(), *grid, "combine_signs");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (part[i] == 0) continue;
      if (values[i] != 0) throw Error("combine_signs: supports overlap at cell " + std::to_string(i));
      values[i] = part[i];
    }
  }
  return {grid, std::move(values)};
}

Lemma1Witness lemma1_witness(const OperatorMatrix& t, const LpVector& g_mult, const PartitionMap& part,
                             std::span<const std::size_t> support, const Exponent& p, double epsilon,
                             const SignSearchOptions& options) {
  require_same_grid(*t.grid(), *g_mult.grid(), "lemma1_witness");
  require_same_grid(*t.grid(), *part.grid(), "lemma1_witness");
  const auto cells = validated_support(support, *t.grid());
  const LpVector g0 = simple_approximation(g_mult, part);

  Lemma1Witness out{SignVector::zero(t.grid()), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, false, {}, 0};
  for (std::size_t i = 0; i < g_mult.size(); ++i) out.sup_error = std::max(out.sup_error, std::abs(g_mult[i] - g0[i]));

  std::vector<std::vector<std::size_t>> pieces(part.block_count());
  for (auto c : cells) pieces[part.block_of(c)].push_back(c);
  std::vector<SignVector> signs;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (pieces[k].empty()) continue;
    SignSearchOptions o = options;
    o.seed = mix_seed(options.seed, k);
    auto found = find_mean_zero_sign(t, pieces[k], p, o);
    const Scalar mean = g0[pieces[k].front()];
    out.pieces.push_back({k, mean, found.value});
    out.piece_term += std::abs(mean) * found.value;
    out.evaluations += found.evaluations;
    signs.push_back(std::move(found.sign));
  }
  out.h = combine_signs(signs, t.grid());
  const LpVector h = out.h.to_lp_vector();
  LpVector gh(t.grid(), g_mult.coeffs().cwiseProduct(h.coeffs()));
  out.measured = lp_norm(apply(t, gh), p);
  out.norm_upper = op_norm_upper_bound(t, p).value;
  out.tail_term = out.norm_upper * out.sup_error * lp_norm(h, p);
  out.audit_bound = out.piece_term + out.tail_term;
  out.target_met = out.measured < epsilon;
  return out;
}

SupportRule SupportRule::parse(std::string_view text) {
  if (text == "all") return {};
  const auto parts = split(text, ':');
  if (parts.size() == 3 && parts[0] == "dyadic") {
    SupportRule r;
    r.kind = Kind::Dyadic;
    try {
      r.level = std::stoi(parts[1]);
      r.index = static_cast<std::size_t>(std::stoul(parts[2]));
    } catch (const std::exception&) {
      throw Error("bad support rule '" + std::string(text) + "'");
    }
    if (r.level < 0 || r.level > 30 || r.index >= (std::size_t{1} << r.level)) {
      throw Error("dyadic support index out of range in '" + std::string(text) + "'");
    }
    return r;
  }
  throw Error("unknown support rule '" + std::string(text) + "' (all | dyadic:<level>:<index>)");
}

std::vector<std::size_t> SupportRule::cells(const Grid& grid) const {
  std::vector<std::size_t> out;
  const double width = std::ldexp(1.0, -level);
  const double lo = static_cast<double>(index) * width, hi = lo + width;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double mid = grid.midpoint(i);
    if (kind == Kind::All || (mid >= lo && mid < hi)) out.push_back(i);
  }
  return out;
}

std::string SupportRule::to_string() const {
  if (kind == Kind::All) return "all";
  return "dyadic:" + std::to_string(level) + ":" + std::to_string(index);
}

std::vector<ProfileRow> narrowness_profile(const OperatorFamily& family, std::span<const std::size_t> sizes,
                                           const Exponent& p, const SupportRule& rule,
                                           const SignSearchOptions& options) {
  std::vector<ProfileRow> rows;
  for (std::size_t level = 0; level < sizes.size(); ++level) {
    const auto grid = make_equal_grid(sizes[level]);
    const OperatorMatrix t = family(grid);
    const auto cells = rule.cells(*grid);
    if (cells.empty()) throw Error("support rule selects no cell at n = " + std::to_string(sizes[level]));
    SignSearchOptions o = options;
    o.seed = mix_seed(options.seed, level);
    const auto found = find_mean_zero_sign(t, cells, p, o);
    rows.push_back({sizes[level], found.value, found.sign.hash(), found.evaluations});
  }
  return rows;
}

}  // namespace nlab
