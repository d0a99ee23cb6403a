#include <doctest.h>

#include <random>

#include "nmjet/ce_complex.hpp"
#include "nmjet/errors.hpp"
#include "nmjet/nashmoser.hpp"
#include "nmjet/verify.hpp"

using namespace nmjet;

namespace {

constexpr int D = 6;
Jet x(int i) { return Jet::variable(3, D, i); }

Cochain random_cochain(std::mt19937_64& rng, const LieAlgebraPtr& alg, int q) {
  Cochain c(alg, q, 3, D);
  for (std::size_t i = 0; i < c.size(); ++i) c.value(i) = random_jet(rng, 3, D, 0, D);
  return c;
}

double distance(const Cochain& a, const Cochain& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, (a.value(i) - b.value(i)).max_abs_coeff());
  return w;
}

const Problem& so3_problem() {
  static const Problem p = make_problem(std::make_shared<const LieAlgebra>(builtin("so3")), D);
  return p;
}

}  // namespace

TEST_CASE("tuples and alternating evaluation") {
  CHECK(increasing_tuples(3, 2) == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(increasing_tuples(3, 3).size() == 1);
  CHECK(increasing_tuples(3, 0).size() == 1);
  const auto alg = std::make_shared<const LieAlgebra>(raw_so3());
  Cochain c(alg, 2, 3, D);
  c.value(c.index_of(std::vector<int>{0, 2})) = x(1);
  CHECK((c.evaluate(std::vector<int>{2, 0}) + x(1)).is_zero());
  CHECK(c.evaluate(std::vector<int>{1, 1}).is_zero());
}

TEST_CASE("differential by hand on raw so3") {
  const auto alg = std::make_shared<const LieAlgebra>(raw_so3());
  const PoissonBivector pi = linear_poisson(*alg, D);
  const MomentumMap lambda = identity_momentum_map(alg, D);
  // (delta f)(xi_i) = {x_i, f}; for f = x1: (0, -x3, x2).
  const Cochain d = delta(Cochain::from_function(alg, x(0)), lambda, pi);
  CHECK(d.value(0).is_zero());
  CHECK((d.value(1) + x(2)).is_zero());
  CHECK((d.value(2) - x(1)).is_zero());
  // The identity 1-cochain alpha(xi_i) = x_i has (delta alpha)(xi_0, xi_1) = {x0,x1} - {x1,x0} - x2 = x2.
  const Cochain a = Cochain::from_components(alg, {x(0), x(1), x(2)});
  const Cochain da = delta(a, lambda, pi);
  CHECK((da.value(0) - x(2)).is_zero());
  CHECK_THROWS_AS(delta(Cochain(alg, 3, 3, D), lambda, pi), Error);
}

TEST_CASE("delta squares to zero symbolically") {
  const auto& p = so3_problem();
  std::mt19937_64 rng(31);
  for (int q = 0; q <= 1; ++q)
    for (int t = 0; t < 5; ++t) {
      const Cochain c = random_cochain(rng, p.lambda.algebra, q);
      const Cochain dd = delta(delta(c, p.lambda, p.pi), p.lambda, p.pi);
      for (const Jet& v : dd.values()) CHECK(v.max_abs_coeff() < 1e-12);
    }
}

TEST_CASE("degree blocks: ranks, identities, invariants") {
  const auto& p = so3_problem();
  for (const DegreeBlock& b : p.hs.blocks()) {
    const BlockDiagnostics& g = b.diagnostics;
    CAPTURE(b.degree);
    CHECK(b.monomials == static_cast<std::size_t>((b.degree + 1) * (b.degree + 2) / 2));
    CHECK(g.d1d0_residual <= 1e-12);
    CHECK(g.d2d1_residual <= 1e-12);
    CHECK(g.homotopy_c1_residual <= 1e-10);
    CHECK(g.homotopy_c2_residual <= 1e-10);
    CHECK(g.h1 == 0);
    CHECK(g.h2 == 0);
    CHECK(g.rank_d0 + g.rank_d1 == static_cast<int>(g.dim_c1));
    // Invariant polynomials of SO(3) are powers of |x|^2.
    CHECK(g.h0 == (b.degree % 2 == 0 ? 1 : 0));
  }
  CHECK(p.hs.block(0).d0.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("h0 recovers functions orthogonal to the invariants") {
  const auto& p = so3_problem();
  const auto alg = p.lambda.algebra;
  // x1 x2 is orthogonal to |x|^2 in L2(B_1) by odd symmetry.
  const Cochain f = Cochain::from_function(alg, x(0) * x(1));
  const Cochain back = p.hs.apply_h(p.hs.apply_delta(f));
  CHECK(distance(back, f) < 1e-10);
  const Jet cas = x(0) * x(0) + x(1) * x(1) + x(2) * x(2);
  const Cochain dcas = p.hs.apply_delta(Cochain::from_function(alg, cas));
  for (const Jet& v : dcas.values()) CHECK(v.max_abs_coeff() < 1e-14);
  CHECK(p.hs.apply_h(p.hs.apply_delta(Cochain::from_function(alg, cas))).value(0).max_abs_coeff() < 1e-14);
}

TEST_CASE("block operators match the symbolic differential") {
  const auto& p = so3_problem();
  std::mt19937_64 rng(37);
  for (int q = 0; q <= 2; ++q) {
    const Cochain c = random_cochain(rng, p.lambda.algebra, q);
    CHECK(distance(delta(c, p.lambda, p.pi), p.hs.apply_delta(c)) < 1e-12);
  }
  CHECK_THROWS_AS(p.hs.apply_h(Cochain(p.lambda.algebra, 0, 3, D)), Error);
}

TEST_CASE("correction solves the linearized equation") {
  // For a closed 1-cochain f (delta f = 0) the homotopy gives f = delta h0 f.
  const auto& p = so3_problem();
  std::mt19937_64 rng(41);
  const Cochain g = random_cochain(rng, p.lambda.algebra, 0);
  const Cochain f = p.hs.apply_delta(g);
  const Jet h = p.hs.correction(f.values());
  CHECK(distance(p.hs.apply_delta(Cochain::from_function(p.lambda.algebra, h)), f) < 1e-10);
}

TEST_CASE("Casimir operator on linear functions") {
  const auto raw = std::make_shared<const LieAlgebra>(raw_so3());
  const PoissonBivector pi = linear_poisson(*raw, D);
  const MomentumMap lambda = identity_momentum_map(raw, D);
  Eigen::MatrixXd cas = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < 3; ++i) cas += rho_block(i, 1, lambda, pi) * rho_block(i, 1, lambda, pi);
  CHECK((cas + 2.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("nonlinear data is rejected") {
  const auto alg = std::make_shared<const LieAlgebra>(builtin("so3"));
  PoissonBivector pi = linear_poisson(*alg, D);
  pi.set_entry(0, 1, x(0) * x(1));
  CHECK_THROWS_AS(HomotopySet::build(identity_momentum_map(alg, D), pi, D), Error);
}

TEST_CASE("parallel block assembly matches serial") {
  const auto alg = std::make_shared<const LieAlgebra>(builtin("so3"));
  const PoissonBivector pi = linear_poisson(*alg, D);
  const MomentumMap lambda = identity_momentum_map(alg, D);
  const HomotopySet a = HomotopySet::build(lambda, pi, D, Exec::serial);
  const HomotopySet b = HomotopySet::build(lambda, pi, D, Exec::parallel);
  for (int d = 0; d <= D; ++d) {
    CHECK(a.block(d).h0 == b.block(d).h0);
    CHECK(a.block(d).h1 == b.block(d).h1);
  }
}

TEST_CASE("homotopy norm bounds") {
  CHECK(derivative_shift(3) == 2);
  CHECK(derivative_shift(4) == 3);
  const HomotopyBoundReport r = homotopy_norm_bound(so3_problem().hs, 50, 3);
  CHECK(r.shift == 2);
  CHECK(r.entries.size() == 18);
  for (const auto& e : r.entries) {
    CHECK(e.unbounded == 0);
    CHECK(std::isfinite(e.constant));
  }
  CHECK(std::isfinite(r.radius_spread(0, 1)));
}
