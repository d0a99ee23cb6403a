#include "nmjet/scenario.hpp"

#include <filesystem>
#include <random>
#include <regex>

#include "nmjet/errors.hpp"
#include "nmjet/estimates.hpp"
#include "nmjet/io.hpp"

namespace nmjet {

LieAlgebraPtr load_algebra(const std::string& spec) {
  if (spec == "so3" || spec == "su2") return std::make_shared<const LieAlgebra>(builtin(spec));
  if (!spec.empty() && std::filesystem::is_regular_file(spec))
    return std::make_shared<const LieAlgebra>(orthonormalize(algebra_from_json(read_json_file(spec), spec)));
  return std::make_shared<const LieAlgebra>(builtin(spec));  // throws UnknownAlgebra
}

Jet parse_monomial(const std::string& text, int nvars, int degcap) {
  static const std::regex factor(R"(\s*x(\d+)(?:\^(\d+))?\s*)");
  std::vector<int> alpha(nvars, 0);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t star = text.find('*', pos);
    const std::string part = text.substr(pos, star == std::string::npos ? std::string::npos : star - pos);
    std::smatch m;
    if (!std::regex_match(part, m, factor))
      throw Error(ErrorCode::BadInput, "cannot parse generator factor '" + part + "'");
    const int var = std::stoi(m[1].str());
    const int power = m[2].matched ? std::stoi(m[2].str()) : 1;
    if (var < 1 || var > nvars) throw Error(ErrorCode::IndexOutOfRange, "variable x" + m[1].str());
    alpha[var - 1] += power;
    if (star == std::string::npos) break;
    pos = star + 1;
  }
  return Jet::monomial(nvars, degcap, alpha);
}

Scenario generate_scenario(const RunConfig& cfg) {
  if (cfg.degcap < 3) throw Error(ErrorCode::BadInput, "degree cap must be at least 3");
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon))
    throw Error(ErrorCode::BadInput, "epsilon must be a finite nonnegative number");
  if (!(cfg.engine.R > 0.0 && cfg.engine.R <= 1.0)) throw Error(ErrorCode::BadInput, "R must lie in (0, 1]");
  const LieAlgebraPtr algebra = load_algebra(cfg.algebra);
  const Exec exec = cfg.parallel ? Exec::parallel : Exec::serial;
  Scenario sc{make_problem(algebra, cfg.degcap, exec), Jet(algebra->dim(), cfg.degcap),
              JetMap::identity(algebra->dim(), cfg.degcap), 0.0};
  Problem& p = sc.problem;
  const int n = p.pi.dim();

  if (!cfg.mu_file.empty()) {
    p.mu = momentum_map_from_json(read_json_file(cfg.mu_file), algebra);
    for (Jet& c : p.mu.components) c = c.with_degcap(cfg.degcap);
    require_momentum_map(p.mu, p.pi, cfg.engine.equivariance_tol);
  } else {
    std::mt19937_64 rng(cfg.seed);
    sc.generator = cfg.generator == "random" ? random_generator(rng, n, cfg.degcap)
                                             : parse_monomial(cfg.generator, n, cfg.degcap);
    if (sc.generator.lowest_degree() < 2)
      throw Error(ErrorCode::BadInput, "generator must have no constant or linear part");
    sc.psi_true = time1_flow(cfg.epsilon * sc.generator, p.pi);
    p.mu = pullback(p.lambda, sc.psi_true);
    const double eq = equivariance_residual(p.mu, p.pi);
    if (eq > 1e-9)
      throw Error(ErrorCode::NotMomentumMap, "generated momentum map has equivariance residual " + std::to_string(eq));
  }
  const auto diff = difference(p.mu, p.lambda);
  sc.ground_truth = ck_norm(std::span<const Jet>(diff), {3, 1.0});
  return sc;
}

}  // namespace nmjet
