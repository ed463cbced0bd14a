// nlab: command-line front end for the norm and sign experiments.
//
// Every option may also come from a --config file of key=value lines
// (keys are the long option names without dashes); flags given on the
// command line win. Exit status: 0 all checks pass, 1 a check failed,
// 2 usage or configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "nlab/franchetti.hpp"
#include "nlab/harness.hpp"
#include "nlab/norm_engine.hpp"
#include "nlab/report.hpp"
#include "nlab/sign_lab.hpp"
#include "nlab/util.hpp"

namespace {

using nlohmann::ordered_json;
using namespace nlab;

constexpr const char* kZooHelp =
    "Operator zoo, comma separated. Entry: [scale*]atom with atom one of\n"
    "  mean | identity | zero | condexp:m=<int> | kernel:{st,exp,min,one,zero} | rankone:{ones,ramp}\n"
    "identity is reported as a non-narrow control.";

struct Args {
  std::string p, gamma, n, zoo, strategy = "auto", tolerance_rule, format = "csv", out, a_rule = "all", m, scale;
  std::string mode = "auto";
  std::uint64_t seed = 0;
  std::uint64_t budget = 50000;
  int levels = 10;
  int restarts = 32;
};

std::vector<double> doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || used == 0) throw Error(std::string("bad value '") + s + "' for --" + what);
    out.push_back(v);
  }
  if (out.empty()) throw Error(std::string("--") + what + " is empty");
  return out;
}

std::vector<std::size_t> sizes(const std::string& text, const char* what) {
  std::vector<std::size_t> out;
  for (double v : doubles(text, what)) {
    if (v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
      throw Error(std::string("--") + what + " expects positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<Scalar> complexes(const std::string& text) {
  std::vector<Scalar> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_complex(s));
  if (out.empty()) throw Error("--gamma is empty");
  return out;
}

std::string or_default(const std::string& v, const char* fallback) { return v.empty() ? fallback : v; }

SearchMode parse_mode(const std::string& s) {
  if (s == "auto") return SearchMode::Auto;
  if (s == "exhaustive") return SearchMode::Exhaustive;
  if (s == "randomized") return SearchMode::Randomized;
  throw Error("--mode must be auto, exhaustive or randomized");
}

struct Output {
  std::string csv;
  ordered_json rows = ordered_json::array();
  ordered_json params = ordered_json::object();
  bool ok = true;
};

std::string estimate_header() { return "operator,p,n,value,kind,solver,witness_hash\n"; }

std::string estimate_line(const std::string& label, double p, std::size_t n, const NormEstimate& e) {
  return label + "," + report::num(p) + "," + std::to_string(n) + "," + report::num(e.value) + "," +
         std::string(to_string(e.kind)) + "," + e.solver + "," + report::witness_hash(e) + "\n";
}

Output run_cp_table(const Args& a) {
  Output o;
  const auto ps = doubles(or_default(a.p, "1,1.2,1.5,2,3,6"), "p");
  const auto rows = cp_table(ps);
  o.params["p"] = or_default(a.p, "1,1.2,1.5,2,3,6");
  o.csv = report::cp_table_csv(rows);
  for (const auto& r : rows) o.rows.push_back(report::to_json(r));
  return o;
}

Output run_norm(const Args& a, bool minimal) {
  Output o;
  const auto zoo = parse_zoo(or_default(a.zoo, "mean"));
  const auto ps = doubles(or_default(a.p, "2"), "p");
  const auto ns = sizes(or_default(a.n, "16"), "n");
  std::vector<Scalar> gammas;
  if (minimal && !a.gamma.empty()) gammas = complexes(a.gamma);
  SolverOptions base;
  base.strategy = parse_strategy(a.strategy);
  base.restarts = a.restarts;
  o.params["zoo"] = or_default(a.zoo, "mean");
  o.params["p"] = or_default(a.p, "2");
  o.params["n"] = or_default(a.n, "16");
  if (minimal) o.params["gamma"] = a.gamma;
  o.params["strategy"] = a.strategy;
  o.params["restarts"] = a.restarts;
  o.csv = minimal ? "operator,gamma,p,n,value,kind,solver,witness_hash\n" : estimate_header();
  std::uint64_t job = 0;
  for (auto n : ns) {
    const auto grid = make_equal_grid(n);
    for (const auto& z : zoo) {
      const auto t = z.build(grid);
      for (double pv : ps) {
        const Exponent p(pv);
        SolverOptions opt = base;
        opt.seed = mix_seed(a.seed, job++);
        if (!minimal) {
          const auto e = op_norm_p(t, p, opt);
          o.csv += estimate_line(z.label, pv, n, e);
          auto j = report::to_json(e);
          j["operator"] = z.label;
          j["p"] = report::num(pv);
          j["n"] = n;
          o.rows.push_back(j);
          continue;
        }
        const auto shifts = gammas.empty() ? std::vector<std::optional<Scalar>>{std::nullopt}
                                           : std::vector<std::optional<Scalar>>(gammas.begin(), gammas.end());
        for (const auto& g : shifts) {
          const auto e = min_modulus(g ? gamma_shift(t, *g) : t, p, opt);
          const std::string gs = g ? format_complex(*g) : "";
          o.csv += z.label + "," + gs + "," + estimate_line("", pv, n, e).substr(1);
          auto j = report::to_json(e);
          j["operator"] = z.label;
          j["gamma"] = gs;
          j["p"] = report::num(pv);
          j["n"] = n;
          o.rows.push_back(j);
        }
      }
    }
  }
  return o;
}

Output run_theorem(const Args& a) {
  Output o;
  const std::string zoo_text =
      or_default(a.zoo, "mean,condexp:m=2,condexp:m=4,condexp:m=8,kernel:st,kernel:exp,rankone:ones,identity");
  const auto zoo = parse_zoo(zoo_text);  // unknown entries fail before any computation
  const auto ps = doubles(or_default(a.p, "1,1.5,2,3"), "p");
  const auto gammas = complexes(or_default(a.gamma, "0,0.5,1,1+0.5i"));
  const auto ns = sizes(or_default(a.n, "256"), "n");
  if (ns.size() != 1) throw Error("verify-theorem takes a single --n");
  TheoremRunOptions opt;
  opt.seed = a.seed;
  opt.restarts = a.restarts;
  if (!a.tolerance_rule.empty()) opt.tolerance = ToleranceRule::parse(a.tolerance_rule);
  o.params["zoo"] = zoo_text;
  o.params["p"] = or_default(a.p, "1,1.5,2,3");
  o.params["gamma"] = or_default(a.gamma, "0,0.5,1,1+0.5i");
  o.params["n"] = ns.front();
  o.params["tolerance_rule"] = opt.tolerance.to_string();
  o.params["restarts"] = a.restarts;
  const auto rows = theorem_check(zoo, ps, gammas, ns.front(), opt);
  o.csv = report::theorem_csv(rows);
  for (const auto& r : rows) {
    o.rows.push_back(report::to_json(r));
    if (!r.control && !r.pass) o.ok = false;
  }
  return o;
}

Output run_daugavet(const Args& a) {
  Output o;
  const auto ms = sizes(or_default(a.m, "4"), "m");
  const auto cs = doubles(or_default(a.scale, "0.5,1"), "scale");
  const auto ns = sizes(or_default(a.n, "16,256,1024"), "n");
  o.params["m"] = or_default(a.m, "4");
  o.params["scale"] = or_default(a.scale, "0.5,1");
  o.params["n"] = or_default(a.n, "16,256,1024");
  const auto rows = daugavet_check(ms, cs, ns);
  o.csv = report::daugavet_csv(rows);
  for (const auto& r : rows) {
    o.rows.push_back(report::to_json(r));
    o.ok = o.ok && r.pass;
  }
  return o;
}

Output run_narrowness(const Args& a) {
  Output o;
  const auto zoo = parse_zoo(or_default(a.zoo, "kernel:st"));
  if (zoo.size() != 1) throw Error("narrowness takes a single --zoo entry");
  const auto ps = doubles(or_default(a.p, "2"), "p");
  if (ps.size() != 1) throw Error("narrowness takes a single --p");
  const auto ns = sizes(or_default(a.n, "4,8,16"), "n");
  const auto rule = SupportRule::parse(a.a_rule);
  SignSearchOptions opt;
  opt.budget = a.budget;
  opt.seed = a.seed;
  opt.mode = parse_mode(a.mode);
  o.params["zoo"] = zoo.front().label;
  o.params["p"] = report::num(ps.front());
  o.params["n"] = or_default(a.n, "4,8,16");
  o.params["a_rule"] = rule.to_string();
  o.params["budget"] = a.budget;
  o.params["mode"] = a.mode;
  const auto rows = narrowness_profile(zoo.front().build, ns, Exponent(ps.front()), rule, opt);
  o.csv = report::profile_csv(rows);
  for (const auto& r : rows) o.rows.push_back(report::to_json(r));
  return o;
}

Output run_convergence(const Args& a) {
  Output o;
  const auto ps = doubles(or_default(a.p, "1.5,2,3"), "p");
  o.params["p"] = or_default(a.p, "1.5,2,3");
  o.params["levels"] = a.levels;
  const auto summary = convergence_run(ps, a.levels, a.seed);
  o.params["gap_threshold"] = report::num(summary.gap_threshold);
  o.csv = report::convergence_csv(summary.rows);
  for (const auto& r : summary.rows) o.rows.push_back(report::to_json(r));
  o.ok = summary.monotone && summary.final_gap_ok;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-norm and mean-zero sign experiments on weighted grids."};
  app.set_config("--config", "", "key=value file; command-line flags override it");
  // Lists such as p=1.5,3 stay one value, parsed like the flag.
  app.get_config_formatter_base()->arrayDelimiter(';');
  app.require_subcommand(1);
  app.fallthrough();
  Args a;
  app.add_option("--p", a.p, "Exponent(s) p >= 1, comma separated");
  app.add_option("--gamma", a.gamma, "Complex shift(s) as a+bi, comma separated");
  app.add_option("--n", a.n, "Grid size(s), comma separated");
  app.add_option("--zoo", a.zoo, kZooHelp);
  app.add_option("--seed", a.seed, "Master seed");
  app.add_option("--budget", a.budget, "Objective evaluations for randomized sign search");
  app.add_option("--tolerance-rule", a.tolerance_rule, "<base>+<c>*m/n (default 0.05+16*m/n)");
  app.add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", a.out, "Write to this file instead of stdout");
  app.add_option("--strategy", a.strategy, "auto, exact, power, descent, brute");
  app.add_option("--levels", a.levels, "Dyadic levels for convergence")->check(CLI::Range(1, 16));
  app.add_option("--m", a.m, "Block counts for daugavet");
  app.add_option("--scale", a.scale, "Scales c for daugavet");
  app.add_option("--restarts", a.restarts, "Restarts for heuristic norm solvers")->check(CLI::Range(1, 4096));
  app.add_option("--a-rule", a.a_rule, "Sign support rule: all | dyadic:<level>:<index>");
  app.add_option("--mode", a.mode, "Sign search: auto, exhaustive, randomized");

  auto* cp = app.add_subcommand("cp-table", "Table of C_p with the maximising alpha");
  auto* norm = app.add_subcommand("norm", "Operator norm ||T||_p of zoo operators");
  auto* minmod = app.add_subcommand("minmod", "Minimal modulus of T, or of gamma I - T with --gamma");
  auto* theorem = app.add_subcommand("verify-theorem", "||I-T|| + min modulus of (gamma I - T) against ||I - gamma E||");
  auto* daug = app.add_subcommand("daugavet", "||I - cE^G||_1 against 1 + ||cE^G||_1");
  auto* narrow = app.add_subcommand("narrowness", "Best mean-zero sign value per grid size");
  auto* conv = app.add_subcommand("convergence", "||I - E||_p under dyadic refinement against C_p");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const CLI::App* cmd = app.get_subcommands().front();
  Output o;
  try {
    if (cmd == cp) o = run_cp_table(a);
    else if (cmd == norm) o = run_norm(a, false);
    else if (cmd == minmod) o = run_norm(a, true);
    else if (cmd == theorem) o = run_theorem(a);
    else if (cmd == daug) o = run_daugavet(a);
    else if (cmd == narrow) o = run_narrowness(a);
    else if (cmd == conv) o = run_convergence(a);
  } catch (const nlab::Error& e) {
    std::cerr << "nlab " << cmd->get_name() << ": " << e.what() << "\n";
    return 2;
  }

  std::string text = o.csv;
  if (a.format == "json") text = report::envelope(cmd->get_name(), o.params, a.seed, o.rows).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f || !(f << text)) {
      std::cerr << "nlab: cannot write " << a.out << "\n";
      return 2;
    }
  }
  return o.ok ? 0 : 1;
}
