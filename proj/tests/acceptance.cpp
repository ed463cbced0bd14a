// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nlab/franchetti.hpp"
#include "nlab/harness.hpp"
#include "nlab/norm_engine.hpp"
#include "nlab/report.hpp"
#include "nlab/sign_lab.hpp"
#include "nlab/util.hpp"
#include "oracles.hpp"

using namespace nlab;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Verdict criterion1() {
  Verdict v;
  v.require(cp_constant(Exponent(1.0)).value == 2.0, "C_1 != 2");
  v.require(std::abs(cp_constant(Exponent(2.0)).value - 1.0) <= 1e-12, "C_2 off");
  double worst = 0.0;
  for (double p : {1.2, 1.5, 3.0, 6.0}) {
    const double golden = cp_constant(Exponent(p)).value;
    const double scan = oracle::cp_grid_scan(p, 1e-6);
    worst = std::max(worst, std::abs(golden - scan));
    v.require(std::abs(golden - scan) <= 1e-9, "golden vs scan at p=" + fmt("%g", p));
    const double dual = cp_constant(Exponent(p / (p - 1.0))).value;
    v.require(std::abs(golden - dual) <= 1e-10, "duality at p=" + fmt("%g", p));
  }
  if (v.pass) v.detail = "max |golden - scan| = " + fmt("%.2e", worst);
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto s = convergence_run({1.5, 2.0, 3.0}, 10, 0, 1e-2);
  v.require(s.monotone, "not nondecreasing");
  v.require(s.final_gap_ok, "final gap above 1e-2");
  std::string gaps;
  for (const auto& r : s.rows) {
    if (r.n == 1024) gaps += " p=" + fmt("%g", r.p) + ":" + fmt("%.2e", r.gap);
  }
  if (v.pass) v.detail = "gap at n=1024" + gaps;
  return v;
}

Verdict criterion3() {
  Verdict v;
  const auto zoo = parse_zoo("mean,condexp:m=2,condexp:m=4,condexp:m=8,kernel:st,kernel:exp,rankone:ones");
  const std::vector<Scalar> gammas{Scalar(0.0), Scalar(0.5), Scalar(1.0), Scalar(1.0, 0.5)};
  const auto rows = theorem_check(zoo, {1.0, 1.5, 2.0, 3.0}, gammas, 256);
  double worst = INFINITY, equality = 0.0;
  for (const auto& r : rows) {
    v.require(r.pass, r.operator_label + " p=" + fmt("%g", r.p) + " gamma=" + format_complex(r.gamma) + " margin " +
                          fmt("%.3g", r.margin));
    worst = std::min(worst, r.margin + r.tolerance);
    if (r.operator_label == "mean" && r.gamma == Scalar(1.0)) {
      equality = std::max(equality, std::abs(r.margin));
      v.require(std::abs(r.margin) <= 0.02, "equality row p=" + fmt("%g", r.p) + " |margin| " + fmt("%.3g", r.margin));
    }
  }
  if (v.pass) {
    v.detail = std::to_string(rows.size()) + " rows, min slack " + fmt("%.3g", worst) + ", max equality |margin| " +
               fmt("%.2e", equality);
  }
  return v;
}

Verdict criterion4() {
  Verdict v;
  double worst = 0.0;
  for (const auto& r : daugavet_check({4}, {0.5, 1.0}, {16, 256, 1024})) {
    const double closed = 2.0 * r.c * 4.0 / static_cast<double>(r.n);
    worst = std::max(worst, std::abs(r.discrepancy - closed));
    v.require(std::abs(r.discrepancy - closed) <= 1e-12, "n=" + std::to_string(r.n) + " c=" + fmt("%g", r.c));
  }
  if (v.pass) v.detail = "max deviation " + fmt("%.1e", worst);
  return v;
}

Verdict criterion5() {
  Verdict v;
  auto g = make_equal_grid(4);
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> nd;
  double exact_worst = 0.0, heur_worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    CMatrix m(4, 4);
    for (long i = 0; i < 4; ++i) {
      for (long j = 0; j < 4; ++j) m(i, j) = nd(rng);
    }
    const OperatorMatrix t(g, m, "random");
    const auto [smin, smax] = oracle::spectral(t);
    const double e[4] = {op_norm_p(t, Exponent(1.0)).value - oracle::column_sum(t),
                         min_modulus(t, Exponent(1.0)).value - oracle::inverse_column_sum(t),
                         op_norm_p(t, Exponent(2.0)).value - smax, min_modulus(t, Exponent(2.0)).value - smin};
    for (double d : e) exact_worst = std::max(exact_worst, std::abs(d));
    SolverOptions o;
    o.field = Field::Real;
    o.seed = static_cast<std::uint64_t>(s);
    for (double p : {1.5, 3.0}) {
      const Exponent ep(p);
      const double hmax = op_norm_p(t, ep, o).value - brute_force_norm(t, ep, Extremum::Max).value;
      const double hmin = min_modulus(t, ep, o).value - brute_force_norm(t, ep, Extremum::Min).value;
      heur_worst = std::max({heur_worst, std::abs(hmax), std::abs(hmin)});
    }
  }
  v.require(exact_worst <= 1e-8, "exact routines off by " + fmt("%.2e", exact_worst));
  v.require(heur_worst <= 1e-3, "heuristics off brute force by " + fmt("%.2e", heur_worst));
  if (v.pass) v.detail = "exact " + fmt("%.1e", exact_worst) + ", heuristic vs brute " + fmt("%.1e", heur_worst);
  return v;
}

Verdict criterion6() {
  Verdict v;
  SignSearchOptions ex;
  ex.mode = SearchMode::Exhaustive;
  std::vector<std::size_t> all16(16);
  std::iota(all16.begin(), all16.end(), std::size_t{0});
  auto g16 = make_equal_grid(16);
  v.require(find_mean_zero_sign(mean_operator(g16), all16, Exponent(3.0), ex).value == 0.0, "E on 16 cells");
  const std::vector<std::size_t> six{1, 2, 3, 5, 8, 13};
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const double got = find_mean_zero_sign(identity(g16), six, Exponent(p), ex).value;
    v.require(std::abs(got - std::pow(6.0 / 16.0, 1.0 / p)) <= 1e-15, "identity p=" + fmt("%g", p));
  }
  const auto ce = conditional_expectation(PartitionMap::equal_blocks(g16, 4));
  const std::vector<std::size_t> block{8, 9, 10, 11};
  v.require(find_mean_zero_sign(ce, block, Exponent(2.0), ex).value == 0.0, "one block of E^G");

  // lemma1 audit over seeded instances
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  double worst = -INFINITY;
  for (int s = 0; s < 100; ++s) {
    const std::size_t n = std::size_t{8} << (s % 3);  // 8, 16, 32
    const std::size_t m = std::size_t{1} << (s % 4);  // 1, 2, 4, 8
    auto g = make_equal_grid(n);
    CMatrix tm(static_cast<long>(n), static_cast<long>(n));
    for (long i = 0; i < tm.rows(); ++i) {
      for (long j = 0; j < tm.cols(); ++j) tm(i, j) = Scalar(nd(rng), s % 2 ? nd(rng) : 0.0) / static_cast<double>(n);
    }
    CVector gm(static_cast<long>(n));
    for (auto& x : gm) x = Scalar(nd(rng), nd(rng));
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 3 != 0) support.push_back(i);
    }
    if (support.empty()) support.push_back(0);
    SignSearchOptions o;
    o.eta = 1.0 / static_cast<double>(n);  // admits odd pieces
    o.seed = static_cast<std::uint64_t>(s);
    o.budget = 5000;
    const auto w = lemma1_witness(OperatorMatrix(g, tm, "random"), LpVector(g, gm), PartitionMap::equal_blocks(g, m),
                                  support, Exponent(s % 2 ? 3.0 : 1.5), 1e-3, o);
    worst = std::max(worst, w.measured - w.audit_bound);
  }
  v.require(worst <= 1e-12, "lemma1 measured exceeds audit bound by " + fmt("%.2e", worst));

  const std::vector<std::size_t> sizes{4, 16};
  const auto st = narrowness_profile(
      [](const GridPtr& g) { return kernel_operator(g, [](double s, double t) { return s * t; }, "kernel:st"); }, sizes,
      Exponent(2.0), SupportRule::parse("dyadic:1:0"), ex);
  v.require(st[1].best_value < st[0].best_value, "st profile not decreasing");
  const std::vector<std::size_t> id_sizes{4, 8, 16};
  for (const auto& r : narrowness_profile([](const GridPtr& g) { return identity(g); }, id_sizes, Exponent(2.0), {}, ex)) {
    v.require(std::abs(r.best_value - 1.0) <= 1e-15, "identity profile at n=" + std::to_string(r.n));
  }
  if (v.pass) {
    v.detail = "lemma1 max(measured - bound) " + fmt("%.2e", worst) + ", st profile " + fmt("%.4g", st[0].best_value) +
               " -> " + fmt("%.4g", st[1].best_value);
  }
  return v;
}

std::string capture(const std::string& args, int* code) {
  const std::string cmd = std::string(NLAB_CLI_PATH) + " " + args;
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return out;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

Verdict criterion7() {
  Verdict v;
  const std::vector<std::string> commands{
      "cp-table --seed 3",
      "cp-table --format json",
      "norm --zoo mean,kernel:st,kernel:exp --p 1,1.5,3 --n 32 --seed 5 --format json",
      "minmod --zoo kernel:min,condexp:m=4 --gamma 0.5,1+0.5i --p 1.5,3 --n 32 --seed 5",
      "verify-theorem --zoo mean,condexp:m=4,kernel:st,identity --p 1.5,3 --gamma 0.5,1+0.5i --n 64 --seed 11 --format json",
      "daugavet",
      "narrowness --zoo kernel:exp --n 4,16,32 --p 3 --budget 4000 --seed 21",
      "convergence --p 1.5,3 --levels 6 --seed 2 --format json",
  };
  for (const auto& c : commands) {
    int c1 = -1, c2 = -1;
    const auto a = capture(c, &c1);
    const auto b = capture(c, &c2);
    v.require(!a.empty() && c1 >= 0 && c1 <= 1, "'" + c + "' did not run");
    v.require(c1 == c2 && fnv1a(a) == fnv1a(b), "'" + c + "' differs between runs");
  }
  if (v.pass) v.detail = std::to_string(commands.size()) + " commands byte-identical across repeated runs";
  return v;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  Verdict (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7};
  bool all = true;
  for (int i = 0; i < 7; ++i) {
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("criterion %d %s (%.1fs): %s\n", i + 1, v.pass ? "PASS" : "FAIL", secs, v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
