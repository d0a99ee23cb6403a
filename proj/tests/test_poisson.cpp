#include <doctest.h>

#include <cmath>
#include <random>

#include "nmjet/ce_complex.hpp"
#include "nmjet/errors.hpp"
#include "nmjet/jetgroup.hpp"
#include "nmjet/poisson.hpp"
#include "nmjet/verify.hpp"

using namespace nmjet;

namespace {

constexpr int D = 6;
Jet x(int i) { return Jet::variable(3, D, i); }

struct Raw {
  LieAlgebraPtr alg = std::make_shared<const LieAlgebra>(raw_so3());
  PoissonBivector pi = linear_poisson(*alg, D);
  MomentumMap lambda = identity_momentum_map(alg, D);
};

}  // namespace

TEST_CASE("linear Poisson brackets of coordinates") {
  Raw r;
  CHECK((bracket(x(0), x(1), r.pi) - x(2)).is_zero());
  CHECK((bracket(x(1), x(2), r.pi) - x(0)).is_zero());
  CHECK((bracket(x(2), x(0), r.pi) - x(1)).is_zero());
  CHECK((bracket(x(1), x(0), r.pi) + x(2)).is_zero());
  CHECK(r.pi.is_linear());
  CHECK(jacobi_residual(r.pi) == 0.0);
  CHECK(jacobi_residual(linear_poisson(builtin("so3"), D)) == 0.0);
}

TEST_CASE("Hamiltonian vector field sign convention") {
  // X_g(F) = {g, F}: for g = x3 the components are {x3, x1} = x2, {x3, x2} = -x1.
  Raw r;
  const auto X = hamiltonian_vf(x(2), r.pi);
  CHECK((X[0] - x(1)).is_zero());
  CHECK((X[1] + x(0)).is_zero());
  CHECK(X[2].is_zero());
}

TEST_CASE("bracket identities on random triples") {
  Raw r;
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const Jet f = random_jet(rng, 3, D, 1, 3), g = random_jet(rng, 3, D, 1, 3), h = random_jet(rng, 3, D, 1, 3);
    const auto br = [&](const Jet& a, const Jet& b) { return bracket(a, b, r.pi); };
    CHECK((br(f, g) + br(g, f)).max_abs_coeff() < 1e-13);
    CHECK((br(2.0 * f - g, h) - 2.0 * br(f, h) + br(g, h)).max_abs_coeff() < 1e-12);
    CHECK((br(f, g * h) - br(f, g) * h - g * br(f, h)).max_abs_coeff() < 1e-12);
    CHECK((br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))).max_abs_coeff() < 1e-12);
  }
}

TEST_CASE("Casimir is central") {
  Raw r;
  const Jet cas = x(0) * x(0) + x(1) * x(1) + x(2) * x(2);
  for (int i = 0; i < 3; ++i) CHECK(bracket(cas, x(i), r.pi).is_zero());
}

TEST_CASE("equivariance residual") {
  Raw r;
  CHECK(equivariance_residual(r.lambda, r.pi) == 0.0);
  MomentumMap bad = r.lambda;
  bad.components[0] = 2.0 * x(0);
  // {2x1, x2} - x3 = x3, {2x1, x3} + x2 = -x2, {x2, x3} - 2x1 = -x1: all unit coefficients.
  CHECK(equivariance_residual(bad, r.pi) == doctest::Approx(1.0));
  CHECK_THROWS_AS(require_momentum_map(bad, r.pi), Error);
  const MomentumMap moved = pullback(r.lambda, time1_flow(0.1 * x(0) * x(1) * x(2), r.pi));
  CHECK(equivariance_residual(moved, r.pi) < 1e-9);
}

TEST_CASE("quadratic error identity and its norm bound") {
  const auto alg = std::make_shared<const LieAlgebra>(builtin("so3"));
  const PoissonBivector pi = linear_poisson(*alg, D);
  const MomentumMap lambda = identity_momentum_map(alg, D);
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const Jet g = (0.01 + 0.2 * (t % 5)) * random_jet(rng, 3, D, 2, 3);
    const MomentumMap mu = pullback(lambda, time1_flow(g, pi));
    const auto f = difference(mu, lambda);
    const Cochain df = delta(Cochain::from_components(alg, f), lambda, pi);
    for (std::size_t i = 0; i < df.size(); ++i) {
      const auto& tu = df.tuple(i);
      CHECK((df.value(i) + bracket(f[tu[0]], f[tu[1]], pi)).max_abs_coeff() < 1e-12);
    }
    // Each {f_i, f_j} has n(n-1) terms Pi_ab d_a f_i d_b f_j; the C^k norm of a
    // triple product picks up a Leibniz factor of at most 3^k.
    for (int k = 0; k <= 2; ++k)
      for (double r : {0.5, 1.0}) {
        const double fn = ck_norm(std::span<const Jet>(f), {k + 1, r});
        CHECK(df.norm({k, r}) <= 6.0 * std::pow(3.0, k) * bivector_norm(pi, {k, r}) * fn * fn * (1 + 1e-12));
      }
  }
}

TEST_CASE("bivector and momentum map errors") {
  PoissonBivector pi(3, D);
  CHECK_THROWS_AS(pi.set_entry(1, 1, x(0)), Error);
  CHECK_THROWS_AS(pi.entry(0, 3), Error);
  pi.set_entry(0, 1, x(2));
  CHECK((pi.entry(1, 0) + x(2)).is_zero());
  CHECK(pi.is_linear());
  pi.set_entry(0, 2, x(0) * x(1));
  CHECK_FALSE(pi.is_linear());
}
