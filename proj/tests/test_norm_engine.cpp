#include "doctest.h"

#include <cmath>
#include <random>

#include "nlab/norm_engine.hpp"
#include "oracles.hpp"

using namespace nlab;

namespace {

OperatorMatrix random_real(const GridPtr& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const long n = static_cast<long>(g->size());
  CMatrix m(n, n);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) m(i, j) = nd(rng);
  }
  return {g, m, "random"};
}

void check_witness(const OperatorMatrix& t, const Exponent& p, const NormEstimate& e, bool maximise) {
  REQUIRE(e.witness.has_value());
  const double nw = lp_norm(*e.witness, p);
  const double tw = lp_norm(apply(t, *e.witness), p);
  if (maximise) {
    CHECK(std::abs(tw / nw - e.value) <= 1e-9);
  } else {
    CHECK(std::abs(nw - 1.0) <= 1e-12);
    CHECK(std::abs(tw - e.value) <= 1e-9);
  }
}

}  // namespace

TEST_CASE("mean operator has norm one at constants") {
  auto g = make_equal_grid(8);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const auto e = op_norm_p(mean_operator(g), Exponent(p));
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
    check_witness(mean_operator(g), Exponent(p), e, true);
  }
}

TEST_CASE("complement of a conditional expectation at p = 1") {
  auto g = make_equal_grid(16);
  const auto t = complement(conditional_expectation(PartitionMap::equal_blocks(g, 4)));
  const auto e = op_norm_p(t, Exponent(1.0));
  CHECK(e.kind == BoundKind::Exact);
  CHECK(e.value == doctest::Approx(1.5).epsilon(1e-14));
  check_witness(t, Exponent(1.0), e, true);
}

TEST_CASE("complement of E at p = 2") {
  for (std::size_t n : {2u, 5u, 16u}) {
    const auto e = op_norm_p(complement(mean_operator(make_equal_grid(n))), Exponent(2.0));
    CHECK(e.kind == BoundKind::Exact);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("minimal modulus examples") {
  auto g = make_equal_grid(8);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const auto k = min_modulus(complement(mean_operator(g)), Exponent(p));
    CHECK(k.value == 0.0);
    CHECK(k.kind == BoundKind::Exact);
    check_witness(complement(mean_operator(g)), Exponent(p), k, false);
    const auto s = min_modulus(scaled(identity(g), Scalar(0, 3)), Exponent(p));
    CHECK(s.value == doctest::Approx(3.0).epsilon(1e-9));
  }
  const auto two = min_modulus(gamma_shift(mean_operator(g), 2.0), Exponent(2.0));
  CHECK(two.kind == BoundKind::Exact);
  CHECK(two.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("general p minimal modulus is an upper bound") {
  auto g = make_equal_grid(8);
  const auto t = gamma_shift(mean_operator(g), 0.5);
  const auto e = min_modulus(t, Exponent(3.0));
  CHECK(e.kind == BoundKind::UpperBound);
  check_witness(t, Exponent(3.0), e, false);
}

TEST_CASE("strategy handling") {
  auto g = make_equal_grid(4);
  CHECK_THROWS_AS(parse_strategy("newton"), Error);
  CHECK(parse_strategy("power") == Strategy::Power);
  SolverOptions o;
  o.strategy = Strategy::Exact;
  CHECK_THROWS_AS(op_norm_p(mean_operator(g), Exponent(3.0), o), Error);
  o.strategy = Strategy::Descent;
  CHECK_THROWS_AS(op_norm_p(mean_operator(g), Exponent(3.0), o), Error);
  o.strategy = Strategy::Brute;
  CHECK(op_norm_p(mean_operator(g), Exponent(3.0), o).solver == "brute");
  CHECK_THROWS_AS(op_norm_p(mean_operator(make_equal_grid(7)), Exponent(3.0), o), Error);
}

TEST_CASE("exact routines match independent oracles") {
  auto g = std::make_shared<const Grid>(std::vector<double>{0.1, 0.2, 0.3, 0.4});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto t = random_real(g, s);
    const auto [smin, smax] = oracle::spectral(t);
    CHECK(op_norm_p(t, Exponent(2.0)).value == doctest::Approx(smax).epsilon(1e-10));
    CHECK(min_modulus(t, Exponent(2.0)).value == doctest::Approx(smin).epsilon(1e-8));
    CHECK(op_norm_p(t, Exponent(1.0)).value == doctest::Approx(oracle::column_sum(t)).epsilon(1e-13));
    CHECK(min_modulus(t, Exponent(1.0)).value == doctest::Approx(oracle::inverse_column_sum(t)).epsilon(1e-9));
  }
}

TEST_CASE("power iteration never exceeds the brute force maximum by more than resolution") {
  auto g = make_equal_grid(3);
  SolverOptions o;
  o.field = Field::Real;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto t = random_real(g, 100 + s);
    for (double p : {1.5, 3.0}) {
      o.seed = s;
      const auto heur = op_norm_p(t, Exponent(p), o);
      const auto brute = brute_force_norm(t, Exponent(p), Extremum::Max);
      CHECK(heur.value >= brute.value - 1e-3);
      CHECK(heur.value <= op_norm_upper_bound(t, Exponent(p)).value + 1e-12);
      check_witness(t, Exponent(p), heur, true);
      check_witness(t, Exponent(p), brute, true);
    }
  }
}

TEST_CASE("brute force oracle examples") {
  auto g2 = make_equal_grid(2);
  for (double p : {1.5, 3.0}) {
    CHECK(brute_force_norm(identity(g2), Exponent(p), Extremum::Max).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(brute_force_norm(identity(g2), Exponent(p), Extremum::Min).value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(brute_force_norm(complement(mean_operator(g2)), Exponent(p), Extremum::Max).value == doctest::Approx(1.0).epsilon(1e-6));
  }
  CHECK(brute_force_norm(mean_operator(g2), Exponent(3.0), Extremum::Max).value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(brute_force_norm(identity(make_equal_grid(7)), Exponent(2.0), Extremum::Max), Error);
}

TEST_CASE("scale equivariance") {
  auto g = make_equal_grid(6);
  const auto t = kernel_operator(g, [](double s, double u) { return std::exp(-std::abs(s - u)); }, "exp");
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    SolverOptions o;
    o.seed = 11;
    const double base = op_norm_p(t, Exponent(p), o).value;
    CHECK(op_norm_p(scaled(t, Scalar(0, -2.5)), Exponent(p), o).value == doctest::Approx(2.5 * base).epsilon(1e-9));
  }
}

TEST_CASE("candidates are honoured") {
  auto g = make_equal_grid(4);
  const auto t = complement(mean_operator(g));
  SolverOptions o;
  o.restarts = 1;
  CVector c(4);
  c << 1, -1, 1, -1;
  o.candidates.emplace_back(g, c);
  CHECK(op_norm_p(t, Exponent(3.0), o).value >= 1.0 - 1e-12);
}

TEST_CASE("fixed seeds are reproducible") {
  auto g = make_equal_grid(12);
  const auto t = kernel_operator(g, [](double s, double u) { return std::min(s, u); }, "min");
  SolverOptions o;
  o.seed = 5;
  const auto a = op_norm_p(t, Exponent(1.5), o);
  const auto b = op_norm_p(t, Exponent(1.5), o);
  CHECK(a.value == b.value);
  CHECK(a.witness->coeffs() == b.witness->coeffs());
  const auto c = min_modulus(gamma_shift(t, 0.3), Exponent(3.0), o);
  const auto d = min_modulus(gamma_shift(t, 0.3), Exponent(3.0), o);
  CHECK(c.value == d.value);
}

TEST_CASE("rayleigh value") {
  auto g = make_equal_grid(4);
  CHECK(rayleigh_value(identity(g), LpVector::ones(g) * 3.0, Exponent(3.0)) == doctest::Approx(1.0));
}
