#include "nlab/report.hpp"

#include <cstdio>
#include <sstream>

#include "nlab/util.hpp"

namespace nlab::report {

using nlohmann::ordered_json;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string witness_hash(const NormEstimate& e) {
  if (!e.witness) return "";
  return hex64(coefficient_hash(e.witness->span()));
}

namespace {

const char* yes_no(bool b) { return b ? "true" : "false"; }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string cp_table_csv(const std::vector<CpResult>& rows) {
  std::ostringstream os;
  os << "p,C_p,alpha_star\n";
  for (const auto& r : rows) os << num(r.p) << ',' << num(r.value) << ',' << num(r.alpha_star) << '\n';
  return os.str();
}

std::string theorem_csv(const std::vector<TheoremCheck>& rows) {
  std::ostringstream os;
  os << "operator,p,gamma,n,lhs,lhs_kind,delta,delta_kind,rhs,rhs_kind,margin,tolerance,m_eff,control,pass\n";
  for (const auto& r : rows) {
    os << quoted(r.operator_label) << ',' << num(r.p) << ',' << format_complex(r.gamma) << ',' << r.n << ','
       << num(r.lhs_norm.value) << ',' << to_string(r.lhs_norm.kind) << ',' << num(r.delta.value) << ','
       << to_string(r.delta.kind) << ',' << num(r.rhs.value.value) << ',' << to_string(r.rhs.value.kind) << ','
       << num(r.margin) << ',' << num(r.tolerance) << ',' << num(r.m_eff) << ',' << yes_no(r.control) << ','
       << yes_no(r.pass) << '\n';
  }
  return os.str();
}

std::string daugavet_csv(const std::vector<DaugavetRow>& rows) {
  std::ostringstream os;
  os << "m,c,n,norm_i_minus_t,norm_t,discrepancy,budget,pass\n";
  for (const auto& r : rows) {
    os << r.m << ',' << num(r.c) << ',' << r.n << ',' << num(r.norm_i_minus_t) << ',' << num(r.norm_t) << ','
       << num(r.discrepancy) << ',' << num(r.budget) << ',' << yes_no(r.pass) << '\n';
  }
  return os.str();
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "p,n,rhs,kind,C_p,gap,nondecreasing\n";
  for (const auto& r : rows) {
    os << num(r.p) << ',' << r.n << ',' << num(r.rhs) << ',' << to_string(r.kind) << ',' << num(r.cp) << ','
       << num(r.gap) << ',' << yes_no(r.nondecreasing) << '\n';
  }
  return os.str();
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
  std::ostringstream os;
  os << "n,best_value,sign_hash,evaluations\n";
  for (const auto& r : rows) os << r.n << ',' << num(r.best_value) << ',' << hex64(r.sign_hash) << ',' << r.evaluations << '\n';
  return os.str();
}

// Numbers go through num() as strings so JSON and CSV print identical digits.
ordered_json to_json(const NormEstimate& e) {
  return {{"value", num(e.value)},
          {"kind", std::string(to_string(e.kind))},
          {"solver", e.solver},
          {"seed", e.seed},
          {"witness_hash", witness_hash(e)}};
}

ordered_json to_json(const CpResult& r) {
  return {{"p", num(r.p)}, {"C_p", num(r.value)}, {"alpha_star", num(r.alpha_star)}, {"method", r.method}};
}

ordered_json to_json(const TheoremCheck& r) {
  ordered_json rhs = to_json(r.rhs.value);
  rhs["grid_n"] = r.rhs.grid_n;
  return {{"operator", r.operator_label},
          {"p", num(r.p)},
          {"gamma", format_complex(r.gamma)},
          {"n", r.n},
          {"lhs", to_json(r.lhs_norm)},
          {"delta", to_json(r.delta)},
          {"rhs", rhs},
          {"margin", num(r.margin)},
          {"tolerance", num(r.tolerance)},
          {"m_eff", num(r.m_eff)},
          {"control", r.control},
          {"pass", r.pass}};
}

ordered_json to_json(const DaugavetRow& r) {
  return {{"m", r.m},
          {"c", num(r.c)},
          {"n", r.n},
          {"norm_i_minus_t", num(r.norm_i_minus_t)},
          {"norm_t", num(r.norm_t)},
          {"discrepancy", num(r.discrepancy)},
          {"budget", num(r.budget)},
          {"pass", r.pass}};
}

ordered_json to_json(const ConvergenceRow& r) {
  return {{"p", num(r.p)},
          {"n", r.n},
          {"rhs", num(r.rhs)},
          {"kind", std::string(to_string(r.kind))},
          {"C_p", num(r.cp)},
          {"gap", num(r.gap)},
          {"nondecreasing", r.nondecreasing}};
}

ordered_json to_json(const ProfileRow& r) {
  return {{"n", r.n}, {"best_value", num(r.best_value)}, {"sign_hash", hex64(r.sign_hash)}, {"evaluations", r.evaluations}};
}

ordered_json envelope(const std::string& command, const ordered_json& params, std::uint64_t seed, ordered_json rows) {
  return {{"schema", kSchema}, {"command", command}, {"params", params}, {"seed", seed}, {"rows", std::move(rows)}};
}

}  // namespace nlab::report
