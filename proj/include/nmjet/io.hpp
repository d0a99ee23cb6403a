#pragma once

#include <string>

#include <json.hpp>

#include "nmjet/ce_complex.hpp"
#include "nmjet/estimates.hpp"
#include "nmjet/jetgroup.hpp"
#include "nmjet/nashmoser.hpp"
#include "nmjet/scenario.hpp"

namespace nmjet {

using json = nlohmann::json;

/// {"nvars", "degcap", "terms": [{"alpha": [...], "coeff": c}, ...]}; zero terms omitted.
json jet_to_json(const Jet& f);
Jet jet_from_json(const json& j);

/// {"nvars", "degcap", "chi": [jet, ...]}.
json jetmap_to_json(const JetMap& m);
JetMap jetmap_from_json(const json& j);

/// {"algebra": name, "components": [jet, ...]}.
json momentum_map_to_json(const MomentumMap& mu);
MomentumMap momentum_map_from_json(const json& j, LieAlgebraPtr algebra);

/// {"dim": m, "c": [[[...]]]} with c[i][j][p].
LieAlgebra algebra_from_json(const json& j, const std::string& name = "custom");
json algebra_to_json(const LieAlgebra& g);

json config_to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected with BadInput.
RunConfig config_from_json(const json& j);

json schedule_to_json(const Schedule& s);
json report_to_json(const Report& r, const RunConfig& cfg);

inline constexpr const char* kCsvHeader = "d,t_d,r_d,rho_d,res_l,res_hi,equiv_drift,radius_shrink";
/// Per-step table with kCsvHeader; radius_shrink is the ledger radius after the step.
std::string report_to_csv(const Report& r);

json blocks_to_json(const HomotopySet& hs);
json fit_to_json(const FitResult& f);

json error_to_json(const std::string& code, const std::string& message);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nmjet
