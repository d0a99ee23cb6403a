#include "nmjet/io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "nmjet/errors.hpp"

namespace nmjet {

json jet_to_json(const Jet& f) {
  json terms = json::array();
  const MonomialBasis& b = f.basis();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (f[i] == 0.0) continue;
    const auto e = b.exponent(i);
    terms.push_back({{"alpha", std::vector<int>(e.begin(), e.end())}, {"coeff", f[i]}});
  }
  return {{"nvars", f.nvars()}, {"degcap", f.degcap()}, {"terms", terms}};
}

Jet jet_from_json(const json& j) {
  try {
    const int n = j.at("nvars").get<int>();
    const int cap = j.at("degcap").get<int>();
    if (n < 1 || cap < 0) throw Error(ErrorCode::BadInput, "jet needs nvars >= 1 and degcap >= 0");
    Jet f(n, cap);
    for (const auto& t : j.at("terms")) {
      const auto alpha = t.at("alpha").get<std::vector<int>>();
      if (static_cast<int>(alpha.size()) != n)
        throw Error(ErrorCode::DimensionMismatch, "exponent arity differs from nvars");
      for (int a : alpha)
        if (a < 0) throw Error(ErrorCode::BadInput, "negative exponent");
      const double c = t.at("coeff").get<double>();
      if (!std::isfinite(c)) throw Error(ErrorCode::BadInput, "non-finite coefficient");
      f.set_coeff(alpha, f.coeff(alpha) + c);
    }
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed jet: ") + e.what());
  }
}

json jetmap_to_json(const JetMap& m) {
  json chi = json::array();
  for (const Jet& c : m.displacement()) chi.push_back(jet_to_json(c));
  return {{"nvars", m.nvars()}, {"degcap", m.degcap()}, {"chi", chi}};
}

JetMap jetmap_from_json(const json& j) {
  try {
    std::vector<Jet> chi;
    for (const auto& c : j.at("chi")) chi.push_back(jet_from_json(c));
    return JetMap::from_displacement(std::move(chi));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed map: ") + e.what());
  }
}

json momentum_map_to_json(const MomentumMap& mu) {
  json comps = json::array();
  for (const Jet& c : mu.components) comps.push_back(jet_to_json(c));
  return {{"algebra", mu.algebra ? mu.algebra->name() : ""}, {"components", comps}};
}

MomentumMap momentum_map_from_json(const json& j, LieAlgebraPtr algebra) {
  try {
    MomentumMap mu{std::move(algebra), {}};
    const json& comps = j.is_array() ? j : j.at("components");
    for (const auto& c : comps) mu.components.push_back(jet_from_json(c));
    if (mu.size() != mu.algebra->dim())
      throw Error(ErrorCode::DimensionMismatch, "momentum map needs one component per basis element");
    return mu;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed momentum map: ") + e.what());
  }
}

LieAlgebra algebra_from_json(const json& j, const std::string& name) {
  try {
    const int m = j.at("dim").get<int>();
    if (m < 1) throw Error(ErrorCode::BadInput, "dim must be positive");
    const auto c = j.at("c").get<std::vector<std::vector<std::vector<double>>>>();
    if (static_cast<int>(c.size()) != m) throw Error(ErrorCode::DimensionMismatch, "c has wrong shape");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(m) * m * m);
    for (const auto& row : c) {
      if (static_cast<int>(row.size()) != m) throw Error(ErrorCode::DimensionMismatch, "c has wrong shape");
      for (const auto& col : row) {
        if (static_cast<int>(col.size()) != m) throw Error(ErrorCode::DimensionMismatch, "c has wrong shape");
        flat.insert(flat.end(), col.begin(), col.end());
      }
    }
    return validate_structure(m, std::move(flat), name);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, std::string("malformed structure constants: ") + e.what());
  }
}

json algebra_to_json(const LieAlgebra& g) {
  const int m = g.dim();
  json c = json::array();
  for (int i = 0; i < m; ++i) {
    json row = json::array();
    for (int j = 0; j < m; ++j) {
      json col = json::array();
      for (int p = 0; p < m; ++p) col.push_back(g.c(i, j, p));
      row.push_back(col);
    }
    c.push_back(row);
  }
  return {{"dim", m}, {"c", c}};
}

json config_to_json(const RunConfig& cfg) {
  const NashMoserConfig& e = cfg.engine;
  return {{"algebra", cfg.algebra},
          {"degcap", cfg.degcap},
          {"epsilon", cfg.epsilon},
          {"generator", cfg.generator},
          {"mu_file", cfg.mu_file},
          {"seed", cfg.seed},
          {"out_dir", cfg.out_dir},
          {"parallel", cfg.parallel},
          {"R", e.R},
          {"t0", e.t0},
          {"l_practical", e.l_practical},
          {"max_steps", e.max_steps},
          {"target_residual", e.target_residual},
          {"c", e.c},
          {"delta", e.delta},
          {"tau", e.tau},
          {"monitor_C", e.monitor_C},
          {"strict_monitors", e.strict_monitors},
          {"alpha", e.alpha},
          {"beta", e.beta},
          {"equivariance_tol", e.equivariance_tol},
          {"stagnation_steps", e.stagnation_steps}};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::BadInput, "config must be a JSON object");
  RunConfig cfg;
  NashMoserConfig& e = cfg.engine;
  static const std::set<std::string> known{
      "algebra", "degcap", "epsilon", "generator", "mu_file", "seed", "out_dir", "parallel",
      "R", "t0", "l_practical", "max_steps", "target_residual", "c", "delta", "tau",
      "monitor_C", "strict_monitors", "alpha", "beta", "equivariance_tol", "stagnation_steps"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw Error(ErrorCode::BadInput, "unknown config key '" + key + "'");
  try {
    auto get = [&](const char* key, auto& target) {
      if (j.contains(key)) target = j.at(key).get<std::decay_t<decltype(target)>>();
    };
    get("algebra", cfg.algebra);
    get("degcap", cfg.degcap);
    get("epsilon", cfg.epsilon);
    get("generator", cfg.generator);
    get("mu_file", cfg.mu_file);
    get("seed", cfg.seed);
    get("out_dir", cfg.out_dir);
    get("parallel", cfg.parallel);
    get("R", e.R);
    get("t0", e.t0);
    get("l_practical", e.l_practical);
    get("max_steps", e.max_steps);
    get("target_residual", e.target_residual);
    get("c", e.c);
    get("delta", e.delta);
    get("tau", e.tau);
    get("monitor_C", e.monitor_C);
    get("strict_monitors", e.strict_monitors);
    get("alpha", e.alpha);
    get("beta", e.beta);
    get("equivariance_tol", e.equivariance_tol);
    get("stagnation_steps", e.stagnation_steps);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::BadInput, std::string("bad config value: ") + ex.what());
  }
  return cfg;
}

json schedule_to_json(const Schedule& s) {
  const Schedule::Check c = s.check();
  return {{"n", s.n},
          {"s", s.s},
          {"A", s.A},
          {"epsilon", s.epsilon},
          {"epsilon_sup", s.epsilon_sup},
          {"l", s.l},
          {"l_practical", s.l_practical},
          {"delta", s.delta},
          {"tau", s.tau},
          {"t0", s.t0},
          {"R", s.R},
          {"c", s.c},
          {"max_steps", s.max_steps},
          {"target_residual", s.target_residual},
          {"conditions",
           {{"A_large", c.a_large},
            {"eps_A", c.eps_a},
            {"eps_delta", c.eps_delta},
            {"l_large", c.l_large},
            {"l_eps", c.l_eps},
            {"l_A", c.l_a}}}};
}

json report_to_json(const Report& r, const RunConfig& cfg) {
  json steps = json::array();
  for (const StepRecord& s : r.steps) {
    json monitors = json::array();
    for (const Monitor& m : s.monitors)
      monitors.push_back({{"name", m.name}, {"value", m.value}, {"bound", m.bound}, {"ok", m.ok()}});
    steps.push_back({{"d", s.d},
                     {"t", s.t},
                     {"r", s.r},
                     {"rho", s.rho},
                     {"smoothing_active", s.smoothing_active},
                     {"smoothing_degree", s.smoothing_degree},
                     {"res_l", s.res_l},
                     {"res_hi", s.res_hi},
                     {"equiv_drift", s.equiv_drift},
                     {"radius", s.radius},
                     {"psi_consistency", s.psi_consistency},
                     {"schedule_error", s.schedule_error},
                     {"monitors", monitors}});
  }
  json shrink = json::array();
  for (const ShrinkEvent& e : r.shrink_log)
    shrink.push_back({{"op", e.op}, {"from", e.from}, {"to", e.to}, {"norm", e.norm}});
  return {{"config", config_to_json(cfg)},
          {"schedule", schedule_to_json(r.schedule)},
          {"converged", r.converged},
          {"steps_taken", r.steps_taken},
          {"initial_res_l", r.initial_res_l},
          {"initial_res_hi", r.initial_res_hi},
          {"final_residual", r.final_residual},
          {"final_radius", r.final_radius},
          {"psi_poisson_defect", r.psi_poisson_defect},
          {"psi_roundtrip", r.psi_roundtrip},
          {"equiv_drift", r.equiv_drift},
          {"steps", steps},
          {"shrink_log", shrink},
          {"psi", jetmap_to_json(r.psi)},
          {"psi_inv", jetmap_to_json(r.psi_inv)}};
}

std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os << kCsvHeader << "\n" << std::setprecision(17);
  for (const StepRecord& s : r.steps)
    os << s.d << "," << s.t << "," << s.r << "," << s.rho << "," << s.res_l << "," << s.res_hi << ","
       << s.equiv_drift << "," << s.radius << "\n";
  return os.str();
}

json blocks_to_json(const HomotopySet& hs) {
  json blocks = json::array();
  for (const DegreeBlock& b : hs.blocks()) {
    const BlockDiagnostics& d = b.diagnostics;
    blocks.push_back({{"degree", d.degree},
                      {"dims", {d.dim_c0, d.dim_c1, d.dim_c2, d.dim_c3}},
                      {"ranks", {d.rank_d0, d.rank_d1, d.rank_d2}},
                      {"cohomology", {d.h0, d.h1, d.h2}},
                      {"d1d0_residual", d.d1d0_residual},
                      {"d2d1_residual", d.d2d1_residual},
                      {"homotopy_c1_residual", d.homotopy_c1_residual},
                      {"homotopy_c2_residual", d.homotopy_c2_residual},
                      {"laplacian1_min_eig", d.laplacian1_min_eig},
                      {"laplacian2_min_eig", d.laplacian2_min_eig}});
  }
  return {{"degcap", hs.degcap()}, {"nvars", hs.nvars()}, {"blocks", blocks}};
}

json fit_to_json(const FitResult& f) {
  json j = {{"law", f.law},         {"params", f.params},       {"constant", f.constant},
            {"samples", f.samples}, {"unbounded", f.unbounded}, {"ok", f.ok()}};
  if (std::isfinite(f.threshold)) j["threshold"] = f.threshold;
  return j;
}

json error_to_json(const std::string& code, const std::string& message) {
  return {{"error", code}, {"message", message}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadInput, "invalid JSON in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::BadInput, "cannot write " + path);
  out << text;
}

}  // namespace nmjet
