#include "nlab/norm_engine.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nlab/franchetti.hpp"
#include "nlab/kernels.hpp"
#include "nlab/util.hpp"

namespace nlab {

namespace {

using kernels::DenseOp;

template <class S>
double abs_of(const S& x) {
  return std::abs(x);
}

template <class S>
S unit_phase(const S& x) {
  const double a = std::abs(x);
  if (a == 0.0) return S{};
  return x / a;
}

template <class S>
double plain_norm(const std::vector<S>& x, double p) {
  double scale = 0.0;
  for (const auto& v : x) scale = std::max(scale, abs_of(v));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (const auto& v : x) sum += std::pow(abs_of(v) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

// J_p(y): the unit vector of the dual space norming y, i.e.
// ||J||_{p'} = 1 and <J, y> = ||y||_p.
template <class S>
void dual_map(const std::vector<S>& y, double p, std::vector<S>& out) {
  out.resize(y.size());
  double scale = 0.0;
  for (const auto& v : y) scale = std::max(scale, abs_of(v));
  if (scale == 0.0) {
    std::fill(out.begin(), out.end(), S{});
    return;
  }
  double sum = 0.0;
  for (const auto& v : y) sum += std::pow(abs_of(v) / scale, p);
  const double factor = std::pow(sum, -(p - 1.0) / p);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double t = abs_of(y[i]) / scale;
    out[i] = unit_phase(y[i]) * (std::pow(t, p - 1.0) * factor);
  }
}

template <class S>
double real_inner(const std::vector<S>& a, const std::vector<S>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if constexpr (std::is_same_v<S, double>) {
      s += a[i] * b[i];
    } else {
      s += (std::conj(a[i]) * b[i]).real();
    }
  }
  return s;
}

template <class S>
void normalize(std::vector<S>& x, double p) {
  const double nx = plain_norm(x, p);
  if (nx > 0.0) {
    for (auto& v : x) v /= nx;
  }
}

template <class S>
struct Run {
  double value = 0.0;
  std::vector<S> x;
};

template <class S>
Run<S> power_run(const DenseOp<S>& a, std::vector<S> x, double p, int max_iterations, double tol) {
  const double q = p / (p - 1.0);
  normalize(x, p);
  std::vector<S> y(a.n), dy(a.n), z(a.n);
  kernels::parallel::matvec<S>(a, x, y);
  double value = plain_norm(y, p);
  Run<S> best{value, x};
  int stale = 0;
  for (int it = 0; it < max_iterations && value > 0.0 && stale < 50; ++it) {
    dual_map(y, p, dy);
    kernels::parallel::adjoint_matvec<S>(a, dy, z);
    const double zq = plain_norm(z, q);
    if (zq <= real_inner(z, x) * (1.0 + 1e-15)) break;  // stationary
    dual_map(z, q, x);
    kernels::parallel::matvec<S>(a, x, y);
    const double next = plain_norm(y, p);
    stale = next > best.value * (1.0 + tol) ? 0 : stale + 1;
    if (next > best.value) best = {next, x};
    if (std::abs(next - value) < tol) break;
    value = next;
  }
  return best;
}

// Projected gradient descent of ||A x||_p on the unit p-sphere with
// geometric step adaptation.
template <class S>
Run<S> descent_run(const DenseOp<S>& a, std::vector<S> x, double p, int max_iterations) {
  normalize(x, p);
  std::vector<S> y(a.n), jy(a.n), jx(a.n), g(a.n), trial(a.n), ty(a.n);
  kernels::parallel::matvec<S>(a, x, y);
  double f = plain_norm(y, p);
  double step = 1.0;
  int stalls = 0;
  for (int it = 0; it < max_iterations && f > 0.0; ++it) {
    dual_map(y, p, jy);
    kernels::parallel::adjoint_matvec<S>(a, jy, g);
    dual_map(x, p, jx);
    for (std::size_t i = 0; i < a.n; ++i) g[i] -= f * jx[i];
    const double gnorm = plain_norm(g, 2.0);
    if (gnorm == 0.0) break;
    bool accepted = false;
    while (step > 1e-16) {
      for (std::size_t i = 0; i < a.n; ++i) trial[i] = x[i] - (step / gnorm) * g[i];
      normalize(trial, p);
      kernels::parallel::matvec<S>(a, trial, ty);
      const double ft = plain_norm(ty, p);
      if (ft < f) {
        stalls = (f - ft) < 1e-14 * f ? stalls + 1 : 0;
        std::swap(x, trial);
        std::swap(y, ty);
        f = ft;
        step = std::min(step * 2.0, 1.0);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || stalls >= 5) break;
  }
  return {f, x};
}

std::vector<double> scaling(const Grid& g, double p) {
  std::vector<double> d(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) d[i] = std::pow(g.weight(i), 1.0 / p);
  return d;
}

// D T D^{-1} with D = diag(w^{1/p}): the same operator acting on plain l^p.
CMatrix similarity(const OperatorMatrix& t, const std::vector<double>& d) {
  CMatrix a = t.entries();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      a(i, j) *= d[static_cast<std::size_t>(i)] / d[static_cast<std::size_t>(j)];
    }
  }
  return a;
}

LpVector from_plain(const GridPtr& grid, const CVector& x, const std::vector<double>& d, const Exponent& p) {
  CVector v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = x[i] / d[static_cast<std::size_t>(i)];
  LpVector out(grid, std::move(v));
  const double nv = lp_norm(out, p);
  return nv > 0.0 ? out * (1.0 / nv) : out;
}

template <class S>
CVector to_cvector(const std::vector<S>& x) {
  CVector v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
  return v;
}

struct Spectral {
  double smax = 0.0;
  double smin = 0.0;
  CVector vmax;
  CVector vmin;
};

Spectral spectral(const OperatorMatrix& t) {
  const auto d = scaling(*t.grid(), 2.0);
  const CMatrix a = similarity(t, d);
  Spectral s;
  const auto n = a.cols();
  if (t.is_real()) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a.real(), Eigen::ComputeThinV);
    s.smax = svd.singularValues()[0];
    s.smin = svd.singularValues()[n - 1];
    s.vmax = svd.matrixV().col(0).cast<Scalar>();
    s.vmin = svd.matrixV().col(n - 1).cast<Scalar>();
  } else {
    Eigen::BDCSVD<CMatrix> svd(a, Eigen::ComputeThinV);
    s.smax = svd.singularValues()[0];
    s.smin = svd.singularValues()[n - 1];
    s.vmax = svd.matrixV().col(0);
    s.vmin = svd.matrixV().col(n - 1);
  }
  // D^{-1} maps the plain singular vector back to cell coefficients.
  for (Eigen::Index i = 0; i < n; ++i) {
    s.vmax[i] /= d[static_cast<std::size_t>(i)];
    s.vmin[i] /= d[static_cast<std::size_t>(i)];
  }
  return s;
}

LpVector unit(const GridPtr& grid, CVector v, const Exponent& p) {
  LpVector out(grid, std::move(v));
  const double nv = lp_norm(out, p);
  return nv > 0.0 ? out * (1.0 / nv) : out;
}

// Structured starting vectors in cell coordinates: constants, two-valued
// vectors at the C_p split, an oscillating vector and coordinate indicators.
std::vector<CVector> structured_starts(const OperatorMatrix& t, const Exponent& p) {
  const Grid& g = *t.grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  std::vector<CVector> starts;
  starts.push_back(CVector::Ones(n));
  if (n >= 2 && !p.is_one()) {
    const double alpha = cp_constant(p).alpha_star;
    for (double frac : {alpha, 1.0 - alpha}) {
      auto k = static_cast<Eigen::Index>(std::lround(frac * static_cast<double>(n)));
      k = std::clamp<Eigen::Index>(k, 1, n - 1);
      const double af = static_cast<double>(k) / static_cast<double>(n);
      const double a = std::pow((1.0 - af) / af, 1.0 / (p.value() - 1.0));
      CVector head = CVector::Constant(n, -1.0);
      head.head(k).setConstant(a);
      starts.push_back(head);
      CVector tail = CVector::Constant(n, -1.0);
      tail.tail(k).setConstant(a);
      starts.push_back(tail);
    }
  }
  CVector alternating(n), ramp(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    alternating[i] = (i % 2 == 0) ? 1.0 : -1.0;
    ramp[i] = g.midpoint(static_cast<std::size_t>(i)) - 0.5;
  }
  if (n >= 2) starts.push_back(alternating);
  if (n >= 2) starts.push_back(ramp);
  // Indicator of the column with the largest weighted column sum.
  Eigen::Index best_col = 0;
  double best = -1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += g.weight(static_cast<std::size_t>(i)) * std::abs(t.entries()(i, j));
    s /= g.weight(static_cast<std::size_t>(j));
    if (s > best) {
      best = s;
      best_col = j;
    }
  }
  for (Eigen::Index j : {best_col, Eigen::Index{0}, n / 2, n - 1}) {
    CVector e = CVector::Zero(n);
    e[j] = 1.0;
    starts.push_back(e);
  }
  return starts;
}

std::vector<CVector> random_starts(std::size_t count, Eigen::Index n, bool complex_field, std::uint64_t seed) {
  std::vector<CVector> out;
  for (std::size_t r = 0; r < count; ++r) {
    std::mt19937_64 rng(mix_seed(seed, r));
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = complex_field ? normal(rng) : 0.0;
      v[i] = Scalar(re, im);
    }
    out.push_back(v);
  }
  return out;
}

bool is_real_vector(const CVector& v) { return (v.imag().array() == 0.0).all(); }

struct Candidate {
  double value = 0.0;
  LpVector witness;
};

// Runs a solver from every start (concurrently) and returns the witnesses in
// start order. Real starts on a real operator stay in real arithmetic.
template <class Solver>
std::vector<Candidate> multistart(const OperatorMatrix& op_for_values, const CMatrix& plain, const std::vector<double>& d,
                                  const std::vector<CVector>& starts, const Exponent& p, bool real_op, Solver solve) {
  DenseOp<double> real_dense;
  if (real_op) real_dense = kernels::make_dense<double>(plain);
  const DenseOp<Scalar> complex_dense = kernels::make_dense<Scalar>(plain);
  std::vector<CVector> results(starts.size());
  const auto count = static_cast<std::ptrdiff_t>(starts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t r = 0; r < count; ++r) {
    const CVector& s = starts[static_cast<std::size_t>(r)];
    CVector x0(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) x0[i] = s[i] * d[static_cast<std::size_t>(i)];
    if (real_op && is_real_vector(x0)) {
      std::vector<double> x(static_cast<std::size_t>(x0.size()));
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = x0[static_cast<Eigen::Index>(i)].real();
      results[static_cast<std::size_t>(r)] = to_cvector(solve(real_dense, std::move(x)).x);
    } else {
      std::vector<Scalar> x(x0.data(), x0.data() + x0.size());
      results[static_cast<std::size_t>(r)] = to_cvector(solve(complex_dense, std::move(x)).x);
    }
  }
  std::vector<Candidate> out;
  out.reserve(results.size());
  for (const auto& x : results) {
    auto w = from_plain(op_for_values.grid(), x, d, p);
    const double v = lp_norm(w, p) > 0.0 ? rayleigh_value(op_for_values, w, p) : 0.0;
    out.push_back({v, std::move(w)});
  }
  return out;
}

// Best candidate by value; ties go to the lexicographically smallest
// rounded witness.
const Candidate& pick(const std::vector<Candidate>& cands, bool maximize) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    const double v = cands[i].value, b = cands[best].value;
    const bool better = maximize ? v > b : v < b;
    if (better || (v == b && rounded_lex_less(cands[i].witness.span(), cands[best].witness.span()))) best = i;
  }
  return cands[best];
}

std::vector<CVector> assemble_starts(const OperatorMatrix& t, const Exponent& p, const SolverOptions& o, std::size_t total) {
  std::vector<CVector> starts;
  for (const auto& c : o.candidates) {
    require_same_grid(*c.grid(), *t.grid(), "solver candidate");
    starts.push_back(c.coeffs());
  }
  const std::size_t budget = std::max(total, starts.size());
  for (auto& s : structured_starts(t, p)) {
    if (starts.size() >= budget) break;
    starts.push_back(std::move(s));
  }
  const bool complex_field = o.field == Field::Complex;
  auto randoms = random_starts(budget - starts.size(), static_cast<Eigen::Index>(t.size()), complex_field, o.seed);
  for (auto& s : randoms) starts.push_back(std::move(s));
  return starts;
}

void check_field(const OperatorMatrix& t, const SolverOptions& o) {
  if (o.field == Field::Real && !t.is_real()) throw Error("real-field search needs a real operator");
}

NormEstimate exact_column_sum(const OperatorMatrix& t, const SolverOptions& o) {
  const Grid& g = *t.grid();
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::Index best_col = 0;
  double best = -1.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) s += g.weight(static_cast<std::size_t>(i)) * std::abs(t.entries()(i, j));
    s /= g.weight(static_cast<std::size_t>(j));
    if (s > best) {
      best = s;
      best_col = j;
    }
  }
  CVector e = CVector::Zero(n);
  e[best_col] = 1.0 / g.weight(static_cast<std::size_t>(best_col));
  return {best, BoundKind::Exact, LpVector(t.grid(), e), "exact:colsum", o.seed};
}

NormEstimate exact_spectral_max(const OperatorMatrix& t, const Exponent& p, const SolverOptions& o) {
  auto s = spectral(t);
  return {s.smax, BoundKind::Exact, unit(t.grid(), s.vmax, p), "exact:svd", o.seed};
}

NormEstimate power_estimate(const OperatorMatrix& t, const Exponent& p, const SolverOptions& o) {
  check_field(t, o);
  const auto d = scaling(*t.grid(), p.value());
  const CMatrix plain = similarity(t, d);
  const auto starts = assemble_starts(t, p, o, static_cast<std::size_t>(std::max(o.restarts, 1)));
  const double pv = p.value();
  auto cands = multistart(t, plain, d, starts, p, t.is_real(), [&](const auto& a, auto x) {
    return power_run(a, std::move(x), pv, o.max_iterations, o.tolerance);
  });
  const auto& best = pick(cands, true);
  return {best.value, BoundKind::LowerBound, best.witness, "power", o.seed};
}

}  // namespace

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Exact: return "exact";
    case BoundKind::LowerBound: return "lower_bound";
    case BoundKind::UpperBound: return "upper_bound";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "auto") return Strategy::Auto;
  if (name == "exact") return Strategy::Exact;
  if (name == "power") return Strategy::Power;
  if (name == "descent") return Strategy::Descent;
  if (name == "brute") return Strategy::Brute;
  throw Error("unknown solver strategy '" + std::string(name) + "' (auto, exact, power, descent, brute)");
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Auto: return "auto";
    case Strategy::Exact: return "exact";
    case Strategy::Power: return "power";
    case Strategy::Descent: return "descent";
    case Strategy::Brute: return "brute";
  }
  return "?";
}

double rayleigh_value(const OperatorMatrix& t, const LpVector& w, const Exponent& p) {
  const double nw = lp_norm(w, p);
  if (nw == 0.0) throw Error("rayleigh_value of the zero vector");
  return lp_norm(apply(t, w), p) / nw;
}

double column_sum_norm(const OperatorMatrix& t) { return exact_column_sum(t, {}).value; }

double row_sum_norm(const OperatorMatrix& t) {
  return t.entries().cwiseAbs().rowwise().sum().maxCoeff();
}

NormEstimate op_norm_p(const OperatorMatrix& t, const Exponent& p, const SolverOptions& o) {
  switch (o.strategy) {
    case Strategy::Auto:
    case Strategy::Exact:
      if (p.is_one()) return exact_column_sum(t, o);
      if (p.is_two()) return exact_spectral_max(t, p, o);
      if (o.strategy == Strategy::Exact) throw Error("exact operator norm is available only at p = 1 and p = 2");
      return power_estimate(t, p, o);
    case Strategy::Power:
      if (p.is_one()) return exact_column_sum(t, o);
      return power_estimate(t, p, o);
    case Strategy::Descent:
      throw Error("the descent strategy minimises; use power, exact or brute for operator norms");
    case Strategy::Brute: {
      auto e = brute_force_norm(t, p, Extremum::Max, o.brute_resolution, o.brute_zoom_rounds);
      e.seed = o.seed;
      return e;
    }
  }
  throw Error("unknown strategy");
}

NormEstimate min_modulus(const OperatorMatrix& t, const Exponent& p, const SolverOptions& o) {
  if (o.strategy == Strategy::Brute) {
    auto e = brute_force_norm(t, p, Extremum::Min, o.brute_resolution, o.brute_zoom_rounds);
    e.seed = o.seed;
    return e;
  }
  check_field(t, o);
  const auto s = spectral(t);
  const auto n = static_cast<Eigen::Index>(t.size());
  if (s.smax == 0.0 || s.smin <= 1e-11 * s.smax) {
    LpVector w = s.smax == 0.0 ? unit(t.grid(), CVector::Ones(n), p) : unit(t.grid(), s.vmin, p);
    const double residual = lp_norm(apply(t, w), p);
    if (residual <= 1e-9) return {0.0, BoundKind::Exact, w, "exact:kernel", o.seed};
    return {residual, BoundKind::UpperBound, w, "kernel", o.seed};
  }
  const bool exact_ok = o.strategy == Strategy::Auto || o.strategy == Strategy::Exact;
  if (exact_ok && p.is_two()) return {s.smin, BoundKind::Exact, unit(t.grid(), s.vmin, p), "exact:svd", o.seed};

  Eigen::PartialPivLU<CMatrix> lu(t.entries());
  const CMatrix inverse = lu.inverse();
  if (exact_ok && p.is_one()) {
    // inf ||T u||_1 = 1 / ||T^{-1}||_1, attained at T^{-1} of a point mass.
    const auto inv_op = OperatorMatrix(t.grid(), inverse, "inverse");
    const auto col = exact_column_sum(inv_op, o);
    LpVector u = unit(t.grid(), inverse * col.witness->coeffs(), p);
    return {1.0 / col.value, BoundKind::Exact, u, "exact:inverse-colsum", o.seed};
  }
  if (o.strategy == Strategy::Exact) throw Error("exact minimal modulus is available only at p = 1, p = 2 or on a kernel");

  check_field(t, o);
  const auto d = scaling(*t.grid(), p.value());
  const double pv = p.value();

  // Inverse power iteration: inf ||T u|| = 1 / ||T^{-1}||.
  const OperatorMatrix inv_op(t.grid(), inverse, "inverse");
  const CMatrix inv_plain = similarity(inv_op, d);
  SolverOptions inv_opts = o;
  inv_opts.candidates.clear();
  const auto inv_starts = assemble_starts(inv_op, p, inv_opts, static_cast<std::size_t>(std::max(o.restarts, 1)));
  // Under Auto this only seeds the descent, so a short run is enough; slow
  // linear convergence on clustered spectra would otherwise dominate.
  const int inv_iterations = o.strategy == Strategy::Power ? o.max_iterations : std::min(o.max_iterations, 500);
  auto inv_cands = multistart(inv_op, inv_plain, d, inv_starts, p, inv_op.is_real(), [&](const auto& a, auto x) {
    return power_run(a, std::move(x), pv, inv_iterations, o.tolerance);
  });
  std::vector<Candidate> cands;
  for (const auto& c : inv_cands) {
    LpVector u = unit(t.grid(), inverse * c.witness.coeffs(), p);
    cands.push_back({rayleigh_value(t, u, p), std::move(u)});
  }
  if (o.strategy == Strategy::Power) {
    const auto& best = pick(cands, false);
    return {best.value, BoundKind::UpperBound, best.witness, "inverse-power", o.seed};
  }

  // Projected descent from the best inverse-power points, user candidates,
  // structured and random starts.
  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cands[a].value < cands[b].value; });
  const auto budget = static_cast<std::size_t>(std::max(o.descent_restarts, 1));
  std::vector<CVector> starts;
  for (const auto& c : o.candidates) {
    require_same_grid(*c.grid(), *t.grid(), "solver candidate");
    starts.push_back(c.coeffs());
  }
  for (std::size_t i = 0; i < order.size() && starts.size() < budget / 2 + o.candidates.size(); ++i) {
    starts.push_back(cands[order[i]].witness.coeffs());
  }
  SolverOptions rest = o;
  rest.candidates.clear();
  rest.seed = mix_seed(o.seed, 0xd5);
  const std::size_t remaining = budget > starts.size() ? budget - starts.size() : 0;
  for (auto& s : assemble_starts(t, p, rest, remaining)) {
    if (remaining == 0) break;
    starts.push_back(std::move(s));
  }
  const CMatrix plain = similarity(t, d);
  auto polished = multistart(t, plain, d, starts, p, t.is_real(), [&](const auto& a, auto x) {
    return descent_run(a, std::move(x), pv, o.descent_iterations);
  });
  for (auto& c : polished) cands.push_back(std::move(c));
  const auto& best = pick(cands, false);
  return {best.value, BoundKind::UpperBound, best.witness, "descent", o.seed};
}

NormEstimate op_norm_upper_bound(const OperatorMatrix& t, const Exponent& p) {
  const double n1 = column_sum_norm(t);
  if (p.is_one()) return {n1, BoundKind::Exact, std::nullopt, "exact:colsum", 0};
  const double n2 = spectral(t).smax;
  if (p.is_two()) return {n2, BoundKind::Exact, std::nullopt, "exact:svd", 0};
  const double ninf = row_sum_norm(t);
  const double pv = p.value();
  double bound = std::pow(n1, 1.0 / pv) * std::pow(ninf, 1.0 - 1.0 / pv);
  if (pv < 2.0) {
    const double theta = 2.0 / pv - 1.0;
    bound = std::min(bound, std::pow(n1, theta) * std::pow(n2, 1.0 - theta));
  } else {
    const double theta = 2.0 / pv;
    bound = std::min(bound, std::pow(n2, theta) * std::pow(ninf, 1.0 - theta));
  }
  return {bound, BoundKind::UpperBound, std::nullopt, "riesz-thorin", 0};
}

}  // namespace nlab
