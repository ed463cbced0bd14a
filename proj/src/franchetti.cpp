#include "nlab/franchetti.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "nlab/kernels.hpp"
#include "nlab/util.hpp"

namespace nlab {

namespace {

constexpr double kScanStep = 1e-4;
constexpr double kGoldenWidth = 1e-12;
constexpr int kMeshMagnitudes = 2000;
constexpr int kMeshPhases = 64;
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

// log(a^x + b^x) with 0^x = 0 for x > 0.
double log_power_sum(double a, double b, double x) {
  const double la = a > 0.0 ? x * std::log(a) : -std::numeric_limits<double>::infinity();
  const double lb = b > 0.0 ? x * std::log(b) : -std::numeric_limits<double>::infinity();
  const double hi = std::max(la, lb), lo = std::min(la, lb);
  if (std::isinf(lo)) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

// Golden-section maximisation of f on [lo, hi]; returns the abscissa.
template <class F>
double golden_max(F f, double lo, double hi, double width) {
  double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > width) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

double mesh_magnitude(int j) { return std::pow(10.0, -2.0 + 4.0 * j / kMeshMagnitudes); }

OperatorMatrix complement_of_mean(const GridPtr& grid, Scalar gamma) {
  CMatrix m = -gamma * mean_operator(grid).entries();
  m.diagonal().array() += 1.0;
  return {grid, std::move(m), "I-(" + format_complex(gamma) + ")E"};
}

}  // namespace

double cp_objective(double alpha, const Exponent& p) {
  if (p.is_one()) throw Error("cp_objective is undefined at p = 1 (C_1 = 2 by definition)");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("cp_objective needs 0 <= alpha <= 1");
  const double pv = p.value();
  const double l1 = log_power_sum(alpha, 1.0 - alpha, pv - 1.0);
  const double l2 = log_power_sum(alpha, 1.0 - alpha, 1.0 / (pv - 1.0));
  return std::exp(l1 / pv + (1.0 - 1.0 / pv) * l2);
}

CpResult cp_constant(const Exponent& p) {
  if (p.is_one()) return {1.0, 2.0, 0.0, "closed_form"};
  if (p.is_two()) return {2.0, 1.0, 0.0, "closed_form"};
  const int steps = static_cast<int>(std::lround(0.5 / kScanStep));
  int best_i = 0;
  double best = cp_objective(0.0, p);
  for (int i = 1; i <= steps; ++i) {
    const double v = cp_objective(i * kScanStep, p);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = std::max(0, best_i - 1) * kScanStep;
  const double hi = std::min(steps, best_i + 1) * kScanStep;
  const double refined = golden_max([&](double a) { return cp_objective(a, p); }, lo, hi, kGoldenWidth);
  double alpha = best_i * kScanStep;
  double value = best;
  const double rv = cp_objective(refined, p);
  if (rv > value) {
    alpha = refined;
    value = rv;
  }
  return {p.value(), value, alpha, "scan+golden"};
}

std::vector<Scalar> two_valued_mesh(Scalar gamma) {
  std::vector<Scalar> mesh;
  if (gamma.imag() == 0.0) {
    mesh.reserve(2 * kMeshMagnitudes + 1);
    for (int j = kMeshMagnitudes; j >= 1; --j) mesh.emplace_back(-mesh_magnitude(j), 0.0);
    mesh.emplace_back(0.0, 0.0);
    for (int j = 1; j <= kMeshMagnitudes; ++j) mesh.emplace_back(mesh_magnitude(j), 0.0);
  } else {
    mesh.reserve(static_cast<std::size_t>(kMeshMagnitudes) * kMeshPhases + 1);
    mesh.emplace_back(0.0, 0.0);
    for (int l = 0; l < kMeshPhases; ++l) {
      const double theta = 2.0 * std::numbers::pi * l / kMeshPhases;
      for (int j = 1; j <= kMeshMagnitudes; ++j) mesh.push_back(std::polar(mesh_magnitude(j), theta));
    }
  }
  return mesh;
}

LpVector two_valued_vector(const GridPtr& grid, std::size_t k, Scalar a, const Exponent& p) {
  const auto n = static_cast<Eigen::Index>(grid->size());
  CVector c = CVector::Ones(n);
  c.head(static_cast<Eigen::Index>(k)).setConstant(a);
  LpVector v(grid, std::move(c));
  const double nv = lp_norm(v, p);
  return nv > 0.0 ? v * (1.0 / nv) : v;
}

RhsEstimate rhs_norm(Scalar gamma, const Exponent& p, const GridPtr& grid, const RhsOptions& options) {
  if (!grid->is_equal_weight()) throw Error("rhs_norm needs an equal-weight grid");
  const std::size_t n = grid->size();
  const OperatorMatrix op = complement_of_mean(grid, gamma);

  SolverOptions so;
  so.seed = options.seed;
  so.restarts = options.restarts;
  if (p.is_one() || p.is_two()) {
    return {gamma, p.value(), n, op_norm_p(op, p, so)};
  }

  // Exhaustive two-valued scan, then a local golden refinement of the ratio.
  const auto mesh = two_valued_mesh(gamma);
  kernels::TwoValuedProblem problem{n, gamma, p.value(), mesh};
  const auto scan = kernels::parallel::scan_two_valued(problem);
  const double alpha = static_cast<double>(scan.k) / static_cast<double>(n);
  Scalar a = mesh[scan.mesh_index];
  double best = scan.value;
  auto ratio = [&](Scalar z) { return kernels::two_valued_ratio(alpha, z, gamma, p.value()); };
  if (std::abs(a) > 0.0) {
    const double log_r = std::log(std::abs(a));
    const double dr = 4.0 * std::log(10.0) / kMeshMagnitudes;
    const double phase = std::arg(a);
    const double lr = golden_max([&](double x) { return ratio(std::polar(std::exp(x), phase)); }, log_r - dr, log_r + dr, 1e-12);
    Scalar refined = std::polar(std::exp(lr), phase);
    if (gamma.imag() != 0.0) {
      const double dt = 2.0 * std::numbers::pi / kMeshPhases;
      const double th = golden_max([&](double x) { return ratio(std::polar(std::exp(lr), x)); }, phase - dt, phase + dt, 1e-12);
      refined = std::polar(std::exp(lr), th);
    }
    if (ratio(refined) > best) {
      best = ratio(refined);
      a = refined;
    }
  }
  so.candidates = options.warm_start;
  so.candidates.push_back(two_valued_vector(grid, scan.k, a, p));
  so.restarts = std::max<int>(options.restarts, static_cast<int>(so.candidates.size()));
  auto est = op_norm_p(op, p, so);
  est.solver = "power+two-valued";
  return {gamma, p.value(), n, std::move(est)};
}

}  // namespace nlab
