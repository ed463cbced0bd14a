#include "doctest.h"

#include "nlab/harness.hpp"
#include "nlab/report.hpp"

using namespace nlab;

TEST_CASE("zero operator row") {
  const auto zoo = parse_zoo("zero");
  for (double p : {1.0, 1.5, 3.0}) {
    const auto rows = theorem_check(zoo, {p}, {Scalar(1.0)}, 16);
    REQUIRE(rows.size() == 1);
    const auto& r = rows.front();
    CHECK(r.lhs_norm.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.delta.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.rhs.value.value <= 2.0);
    CHECK(r.margin >= 0.0);
    CHECK(r.pass);
  }
}

TEST_CASE("block conditional expectation at p = 1") {
  // Closed form: ||I - E^G||_1 = 2 - 2/b, ||I - E||_1 = 2 - 2/n on the grid.
  const auto rows = theorem_check(parse_zoo("condexp:m=4"), {1.0}, {Scalar(1.0)}, 256);
  const auto& r = rows.front();
  CHECK(r.lhs_norm.value == doctest::Approx(1.96875).epsilon(1e-14));
  CHECK(r.delta.value == 0.0);
  CHECK(r.rhs.value.value == doctest::Approx(1.9921875).epsilon(1e-14));
  CHECK(r.margin == doctest::Approx(-0.0234375).epsilon(1e-12));
  CHECK(r.tolerance == doctest::Approx(0.05 + 16.0 * 4 / 256));
  CHECK(r.pass);
}

TEST_CASE("margin is stored as the sum of its parts and rows come back in order") {
  const auto rows = theorem_check(parse_zoo("mean,kernel:exp,identity"), {1.0, 2.0}, {Scalar(0.0), Scalar(1, 0.5)}, 16);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0].operator_label == "mean");
  CHECK(rows[3].gamma == Scalar(1, 0.5));
  CHECK(rows[4].operator_label == "kernel:exp");
  CHECK(rows[11].control);
  for (const auto& r : rows) {
    CHECK(r.margin == r.lhs_norm.value + r.delta.value - r.rhs.value.value);
    CHECK(r.pass == (r.margin >= -r.tolerance));
  }
}

TEST_CASE("theorem rows are reproducible") {
  TheoremRunOptions o;
  o.seed = 17;
  const auto zoo = parse_zoo("kernel:st,condexp:m=2");
  const auto a = theorem_check(zoo, {1.5, 3.0}, {Scalar(0.5)}, 32, o);
  const auto b = theorem_check(zoo, {1.5, 3.0}, {Scalar(0.5)}, 32, o);
  CHECK(report::theorem_csv(a) == report::theorem_csv(b));
}

TEST_CASE("daugavet rows") {
  const auto rows = daugavet_check({4}, {1.0, 0.0, 0.5}, {16, 1024});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].norm_i_minus_t == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(rows[0].discrepancy == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rows[1].discrepancy == 0.0);
  CHECK(rows[3].discrepancy == doctest::Approx(0.0078125).epsilon(1e-15));
  for (const auto& r : rows) {
    CHECK(r.pass);
    CHECK(std::abs(r.discrepancy - r.budget) <= 1e-12);
  }
}

TEST_CASE("cp table") {
  const auto rows = cp_table({1.0, 2.0, 1.5, 3.0});
  CHECK(rows[0].value == 2.0);
  CHECK(std::abs(rows[1].value - 1.0) <= 1e-12);
  CHECK(std::abs(rows[2].value - rows[3].value) <= 1e-10);
  CHECK(report::cp_table_csv(rows).rfind("p,C_p,alpha_star\n1,2,0\n", 0) == 0);
}

TEST_CASE("convergence examples") {
  const auto s = convergence_run({2.0, 3.0}, 5);
  REQUIRE(s.rows.size() == 10);
  for (int i = 0; i < 5; ++i) {
    CHECK(s.rows[static_cast<std::size_t>(i)].rhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.rows[static_cast<std::size_t>(i)].gap) <= 1e-12);
  }
  CHECK(s.rows[5].n == 2);
  CHECK(s.rows[5].rhs == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(s.monotone);
  CHECK(s.final_gap_ok);
  CHECK_THROWS_AS(convergence_run({3.0}, 0), Error);
}

TEST_CASE("json envelope") {
  const auto rows = cp_table({3.0});
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) arr.push_back(report::to_json(r));
  const auto j = report::envelope("cp-table", {{"p", "3"}}, 4, arr);
  CHECK(j["schema"] == report::kSchema);
  CHECK(j["rows"][0]["C_p"] == report::num(rows[0].value));
  CHECK(j.begin().key() == "schema");
}
