#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "nlab/franchetti.hpp"
#include "nlab/harness.hpp"
#include "nlab/norm_engine.hpp"
#include "nlab/sign_lab.hpp"

namespace nlab::report {

inline constexpr const char* kSchema = "nlab.report/1";

/// %.12g formatting used by every CSV column.
std::string num(double x);

std::string witness_hash(const NormEstimate& e);

std::string cp_table_csv(const std::vector<CpResult>& rows);
std::string theorem_csv(const std::vector<TheoremCheck>& rows);
std::string daugavet_csv(const std::vector<DaugavetRow>& rows);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string profile_csv(const std::vector<ProfileRow>& rows);

nlohmann::ordered_json to_json(const NormEstimate& e);
nlohmann::ordered_json to_json(const CpResult& r);
nlohmann::ordered_json to_json(const TheoremCheck& r);
nlohmann::ordered_json to_json(const DaugavetRow& r);
nlohmann::ordered_json to_json(const ConvergenceRow& r);
nlohmann::ordered_json to_json(const ProfileRow& r);

/// {"schema", "command", "params", "seed", "rows"}.
nlohmann::ordered_json envelope(const std::string& command, const nlohmann::ordered_json& params,
                                std::uint64_t seed, nlohmann::ordered_json rows);

}  // namespace nlab::report
