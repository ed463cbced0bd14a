#include "nlab/kernels.hpp"

#include <omp.h>

#include <bit>
#include <cmath>
#include <limits>

#include "nlab/lp_vector.hpp"

namespace nlab::kernels {

namespace {

constexpr std::size_t kParallelThreshold = 64;

template <class S>
S to_scalar(const Scalar& z);
template <>
double to_scalar<double>(const Scalar& z) { return z.real(); }
template <>
Scalar to_scalar<Scalar>(const Scalar& z) { return z; }

template <class S>
S conj_of(const S& x) {
  if constexpr (std::is_same_v<S, double>) {
    return x;
  } else {
    return std::conj(x);
  }
}

template <class S>
inline S row_dot(const S* row, const S* x, std::size_t n) {
  S sum{};
  for (std::size_t j = 0; j < n; ++j) sum += row[j] * x[j];
  return sum;
}

// p-th power of the ratio ||(I - gamma E) f||_p / ||f||_p for the two-valued f.
inline double ratio_pow(double alpha, Scalar a, Scalar gamma, double p) {
  const double beta = 1.0 - alpha;
  const double den = alpha * std::pow(std::abs(a), p) + beta;
  if (den == 0.0) return 0.0;
  const Scalar mean = alpha * a + beta;
  const Scalar gm = gamma * mean;
  const double num = alpha * std::pow(std::abs(a - gm), p) + beta * std::pow(std::abs(1.0 - gm), p);
  return num / den;
}

struct ScanCell {
  std::size_t mesh_index = 0;
  double best = -1.0;
};

inline ScanCell scan_one_k(const TwoValuedProblem& pr, std::size_t k) {
  const double alpha = static_cast<double>(k) / static_cast<double>(pr.n);
  ScanCell cell;
  for (std::size_t m = 0; m < pr.mesh.size(); ++m) {
    const double r = ratio_pow(alpha, pr.mesh[m], pr.gamma, pr.p);
    if (r > cell.best) {
      cell.best = r;
      cell.mesh_index = m;
    }
  }
  return cell;
}

inline double weighted_pow_sum(const Scalar* y, const double* w, std::size_t n, double p) {
  double s = 0.0;
  if (p == 1.0) {
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::abs(y[i]);
  } else if (p == 2.0) {
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(y[i]);
  } else {
    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::pow(std::abs(y[i]), p);
  }
  return s;
}

struct EnumState {
  bool feasible = false;
  double value_pow = std::numeric_limits<double>::infinity();
  std::uint64_t key = 0;
  std::uint32_t mask = 0;
  std::uint64_t evaluations = 0;
};

inline int sign_of(std::uint32_t mask, std::size_t cell) {
  if (cell == 0) return 1;
  return (mask >> (cell - 1)) & 1U ? 1 : -1;
}

inline std::uint64_t lex_key(std::uint32_t mask, std::size_t k) {
  std::uint64_t key = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (sign_of(mask, c) > 0) key |= std::uint64_t{1} << (k - 1 - c);
  }
  return key;
}

void fresh_image(const SignEnumProblem& pr, std::uint32_t mask, std::vector<Scalar>& y, double& residual) {
  std::fill(y.begin(), y.end(), Scalar{});
  residual = 0.0;
  for (std::size_t c = 0; c < pr.k; ++c) {
    const double s = sign_of(mask, c);
    const Scalar* col = pr.columns.data() + c * pr.rows;
    for (std::size_t i = 0; i < pr.rows; ++i) y[i] += s * col[i];
    residual += s * pr.cell_weights[c];
  }
}

inline bool better(double v, std::uint64_t key, const EnumState& best) {
  return !best.feasible || v < best.value_pow || (v == best.value_pow && key < best.key);
}

// Gray-code walk over the low `low_bits` free bits with the remaining bits
// fixed to `prefix`.
EnumState enumerate_chunk(const SignEnumProblem& pr, std::uint32_t prefix, unsigned low_bits) {
  EnumState best;
  std::vector<Scalar> y(pr.rows), fresh(pr.rows);
  std::uint32_t mask = prefix << low_bits;
  double residual = 0.0;
  fresh_image(pr, mask, y, residual);
  const double* w = pr.row_weights.data();
  const std::uint64_t steps = std::uint64_t{1} << low_bits;
  for (std::uint64_t i = 0; i < steps; ++i) {
    if (i > 0) {
      const unsigned bit = static_cast<unsigned>(std::countr_zero(i));
      mask ^= 1U << bit;
      const std::size_t cell = bit + 1;
      const double s = 2.0 * sign_of(mask, cell);
      const Scalar* col = pr.columns.data() + cell * pr.rows;
      for (std::size_t r = 0; r < pr.rows; ++r) y[r] += s * col[r];
      residual += s * pr.cell_weights[cell];
    }
    if (std::abs(residual) > pr.eta) continue;
    ++best.evaluations;
    const double v = weighted_pow_sum(y.data(), w, pr.rows, pr.p);
    if (best.feasible && v > best.value_pow + 1e-9 * (1.0 + best.value_pow)) continue;
    double fresh_residual = 0.0;
    fresh_image(pr, mask, fresh, fresh_residual);
    const double vf = weighted_pow_sum(fresh.data(), w, pr.rows, pr.p);
    const std::uint64_t key = lex_key(mask, pr.k);
    if (better(vf, key, best)) {
      best.feasible = true;
      best.value_pow = vf;
      best.key = key;
      best.mask = mask;
    }
  }
  return best;
}

SignEnumResult finish(const SignEnumProblem& pr, const EnumState& s) {
  SignEnumResult out;
  out.feasible = s.feasible;
  out.evaluations = s.evaluations;
  if (!s.feasible) return out;
  out.signs.resize(pr.k);
  for (std::size_t c = 0; c < pr.k; ++c) out.signs[c] = static_cast<std::int8_t>(sign_of(s.mask, c));
  out.value = std::pow(s.value_pow, 1.0 / pr.p);
  return out;
}

void merge_into(EnumState& total, const EnumState& part) {
  total.evaluations += part.evaluations;
  if (part.feasible && better(part.value_pow, part.key, total)) {
    const auto evals = total.evaluations;
    total = part;
    total.evaluations = evals;
  }
}

void check_enum(const SignEnumProblem& pr) {
  if (pr.k == 0 || pr.k > 24) throw Error("exhaustive sign enumeration supports 1..24 support cells");
}

struct SphereBest {
  double value = 0.0;
  std::uint64_t index = 0;
  bool found = false;
};

std::uint64_t sphere_count(const SphereSampleProblem& pr, std::uint64_t& per_face) {
  const std::size_t n = static_cast<std::size_t>(pr.t->rows());
  per_face = 1;
  for (std::size_t i = 1; i < n; ++i) per_face *= pr.resolution;
  return per_face * n;
}

void sphere_point(const SphereSampleProblem& pr, std::uint64_t idx, std::uint64_t per_face, Eigen::VectorXcd& x) {
  const std::size_t n = static_cast<std::size_t>(x.size());
  const std::size_t face = static_cast<std::size_t>(idx / per_face);
  std::uint64_t r = idx % per_face;
  const double step = 2.0 / static_cast<double>(pr.resolution - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == face) {
      x[static_cast<Eigen::Index>(i)] = 1.0;
      continue;
    }
    const auto d = r % pr.resolution;
    r /= pr.resolution;
    x[static_cast<Eigen::Index>(i)] = -1.0 + step * static_cast<double>(d);
  }
}

inline bool sphere_better(const SphereSampleProblem& pr, double v, const SphereBest& b) {
  return !b.found || (pr.maximize ? v > b.value : v < b.value);
}

SphereBest sphere_range(const SphereSampleProblem& pr, std::uint64_t begin, std::uint64_t end, std::uint64_t per_face) {
  SphereBest best;
  const auto n = pr.t->rows();
  Eigen::VectorXcd x(n), y(n);
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    sphere_point(pr, idx, per_face, x);
    y.noalias() = (*pr.t) * x;
    const double v = lp_norm(std::span<const Scalar>(y.data(), static_cast<std::size_t>(n)), pr.weights, pr.p) /
                     lp_norm(std::span<const Scalar>(x.data(), static_cast<std::size_t>(n)), pr.weights, pr.p);
    if (sphere_better(pr, v, best)) {
      best.value = v;
      best.index = idx;
      best.found = true;
    }
  }
  return best;
}

SphereSampleResult sphere_result(const SphereSampleProblem& pr, const SphereBest& b, std::uint64_t total,
                                 std::uint64_t per_face) {
  SphereSampleResult out;
  out.value = b.value;
  out.evaluations = total;
  Eigen::VectorXcd x(pr.t->rows());
  sphere_point(pr, b.index, per_face, x);
  out.direction = x.real();
  return out;
}

void check_sphere(const SphereSampleProblem& pr) {
  if (pr.t == nullptr || pr.t->rows() == 0) throw Error("sphere sampling needs an operator");
  if (pr.resolution < 2) throw Error("sphere sampling resolution must be at least 2");
}

}  // namespace

template <class S>
DenseOp<S> make_dense(const CMatrix& m) {
  DenseOp<S> op;
  op.n = static_cast<std::size_t>(m.rows());
  op.a.resize(op.n * op.n);
  op.ah.resize(op.n * op.n);
  for (std::size_t i = 0; i < op.n; ++i) {
    for (std::size_t j = 0; j < op.n; ++j) {
      const S v = to_scalar<S>(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      op.a[i * op.n + j] = v;
      op.ah[j * op.n + i] = conj_of(v);
    }
  }
  return op;
}

template DenseOp<double> make_dense<double>(const CMatrix&);
template DenseOp<Scalar> make_dense<Scalar>(const CMatrix&);

double two_valued_ratio(double alpha, Scalar a, Scalar gamma, double p) {
  return std::pow(ratio_pow(alpha, a, gamma, p), 1.0 / p);
}

namespace serial {

template <class S>
void matvec(const DenseOp<S>& op, std::span<const S> x, std::span<S> y) {
  for (std::size_t i = 0; i < op.n; ++i) y[i] = row_dot(op.a.data() + i * op.n, x.data(), op.n);
}

template <class S>
void adjoint_matvec(const DenseOp<S>& op, std::span<const S> x, std::span<S> y) {
  for (std::size_t i = 0; i < op.n; ++i) y[i] = row_dot(op.ah.data() + i * op.n, x.data(), op.n);
}

template void matvec<double>(const DenseOp<double>&, std::span<const double>, std::span<double>);
template void matvec<Scalar>(const DenseOp<Scalar>&, std::span<const Scalar>, std::span<Scalar>);
template void adjoint_matvec<double>(const DenseOp<double>&, std::span<const double>, std::span<double>);
template void adjoint_matvec<Scalar>(const DenseOp<Scalar>&, std::span<const Scalar>, std::span<Scalar>);

TwoValuedBest scan_two_valued(const TwoValuedProblem& pr) {
  TwoValuedBest best;
  double best_pow = -1.0;
  for (std::size_t k = 0; k <= pr.n; ++k) {
    const double alpha = static_cast<double>(k) / static_cast<double>(pr.n);
    for (std::size_t m = 0; m < pr.mesh.size(); ++m) {
      const double r = ratio_pow(alpha, pr.mesh[m], pr.gamma, pr.p);
      if (r > best_pow) {
        best_pow = r;
        best.k = k;
        best.mesh_index = m;
      }
    }
  }
  best.value = std::pow(std::max(best_pow, 0.0), 1.0 / pr.p);
  return best;
}

SignEnumResult enumerate_signs(const SignEnumProblem& pr) {
  check_enum(pr);
  return finish(pr, enumerate_chunk(pr, 0, static_cast<unsigned>(pr.k - 1)));
}

SphereSampleResult sample_sphere(const SphereSampleProblem& pr) {
  check_sphere(pr);
  std::uint64_t per_face = 0;
  const auto total = sphere_count(pr, per_face);
  return sphere_result(pr, sphere_range(pr, 0, total, per_face), total, per_face);
}

}  // namespace serial

namespace parallel {

template <class S>
void matvec(const DenseOp<S>& op, std::span<const S> x, std::span<S> y) {
  const auto n = static_cast<std::ptrdiff_t>(op.n);
#pragma omp parallel for schedule(static) if (op.n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = row_dot(op.a.data() + static_cast<std::size_t>(i) * op.n, x.data(), op.n);
  }
}

template <class S>
void adjoint_matvec(const DenseOp<S>& op, std::span<const S> x, std::span<S> y) {
  const auto n = static_cast<std::ptrdiff_t>(op.n);
#pragma omp parallel for schedule(static) if (op.n >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = row_dot(op.ah.data() + static_cast<std::size_t>(i) * op.n, x.data(), op.n);
  }
}

template void matvec<double>(const DenseOp<double>&, std::span<const double>, std::span<double>);
template void matvec<Scalar>(const DenseOp<Scalar>&, std::span<const Scalar>, std::span<Scalar>);
template void adjoint_matvec<double>(const DenseOp<double>&, std::span<const double>, std::span<double>);
template void adjoint_matvec<Scalar>(const DenseOp<Scalar>&, std::span<const Scalar>, std::span<Scalar>);

TwoValuedBest scan_two_valued(const TwoValuedProblem& pr) {
  std::vector<ScanCell> cells(pr.n + 1);
  const auto count = static_cast<std::ptrdiff_t>(pr.n + 1);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < count; ++k) cells[static_cast<std::size_t>(k)] = scan_one_k(pr, static_cast<std::size_t>(k));
  TwoValuedBest best;
  double best_pow = -1.0;
  for (std::size_t k = 0; k <= pr.n; ++k) {
    if (cells[k].best > best_pow) {
      best_pow = cells[k].best;
      best.k = k;
      best.mesh_index = cells[k].mesh_index;
    }
  }
  best.value = std::pow(std::max(best_pow, 0.0), 1.0 / pr.p);
  return best;
}

SignEnumResult enumerate_signs(const SignEnumProblem& pr) {
  check_enum(pr);
  const unsigned free_bits = static_cast<unsigned>(pr.k - 1);
  const unsigned high = std::min(free_bits, 6U);
  const unsigned low = free_bits - high;
  const auto chunks = static_cast<std::ptrdiff_t>(1) << high;
  std::vector<EnumState> parts(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic, 1) if (free_bits >= 10)
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    parts[static_cast<std::size_t>(c)] = enumerate_chunk(pr, static_cast<std::uint32_t>(c), low);
  }
  EnumState total;
  for (const auto& part : parts) merge_into(total, part);
  return finish(pr, total);
}

SphereSampleResult sample_sphere(const SphereSampleProblem& pr) {
  check_sphere(pr);
  std::uint64_t per_face = 0;
  const auto total = sphere_count(pr, per_face);
  constexpr std::ptrdiff_t kChunks = 64;
  std::vector<SphereBest> parts(kChunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t c = 0; c < kChunks; ++c) {
    const auto begin = total * static_cast<std::uint64_t>(c) / kChunks;
    const auto end = total * static_cast<std::uint64_t>(c + 1) / kChunks;
    parts[static_cast<std::size_t>(c)] = sphere_range(pr, begin, end, per_face);
  }
  SphereBest best;
  for (const auto& part : parts) {
    if (part.found && sphere_better(pr, part.value, best)) best = part;
  }
  return sphere_result(pr, best, total, per_face);
}

}  // namespace parallel

}  // namespace nlab::kernels
