#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nmjet/jetgroup.hpp"
#include "nmjet/nashmoser.hpp"

namespace nmjet {

/// Everything a run needs; serialized inline into reports.
struct RunConfig {
  std::string algebra = "so3";   // builtin name or path to {"dim", "c"} JSON
  int degcap = 6;
  double epsilon = 1e-2;
  std::string generator = "random";  // "random", or a monomial such as "x1*x2*x3"
  std::string mu_file;               // explicit momentum map JSON; overrides the generator
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  bool parallel = false;
  NashMoserConfig engine;
};

/// Builtin name, or a structure-constants file; the result is orthonormalized.
LieAlgebraPtr load_algebra(const std::string& spec);

/// Parses a product of variables like "x1*x2^2*x3" (1-based) into a jet.
Jet parse_monomial(const std::string& text, int nvars, int degcap);

struct Scenario {
  Problem problem;
  Jet generator;
  JetMap psi_true{1, 1};
  double ground_truth = 0.0;  // ||mu - lambda||_{3,1}
};

/// Pi = linear Poisson structure, lambda = identity momentum map,
/// psi_true = time-1 flow of eps g, mu = lambda o psi_true. The random generator
/// is drawn from a single mt19937_64 seeded with cfg.seed.
Scenario generate_scenario(const RunConfig& cfg);

}  // namespace nmjet
