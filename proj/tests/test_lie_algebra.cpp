#include <doctest.h>

#include <cmath>
#include <random>

#include "nmjet/errors.hpp"
#include "nmjet/lie_algebra.hpp"
#include "nmjet/verify.hpp"

using namespace nmjet;

namespace {

std::vector<double> constants_from(std::initializer_list<std::tuple<int, int, int, double>> entries) {
  std::vector<double> c(27, 0.0);
  for (auto [i, j, k, v] : entries) {
    c[(i * 3 + j) * 3 + k] = v;
    c[(j * 3 + i) * 3 + k] = -v;
  }
  return c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::BadInput;
}

}  // namespace

TEST_CASE("raw so3 has Killing form -2 Id") {
  const LieAlgebra g = raw_so3();
  // K_ii = sum_{k,l} eps_ikl eps_ilk = -2 by hand.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(g.killing()(i, j) == doctest::Approx(i == j ? -2.0 : 0.0));
  CHECK_FALSE(g.orthonormal());
}

TEST_CASE("builtin so3 is orthonormal with constants eps/sqrt2") {
  const LieAlgebra g = builtin("so3");
  CHECK(g.dim() == 3);
  CHECK(g.orthonormal());
  CHECK(g.c(0, 1, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(g.c(1, 0, 2) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(g.c(0, 1, 0) == 0.0);
  CHECK(total_antisymmetry_defect(g) < 1e-15);
  CHECK((g.killing() + Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("su2 is isomorphic to so3") {
  const LieAlgebra a = builtin("so3"), b = builtin("su2");
  CHECK((a.killing() - b.killing()).cwiseAbs().maxCoeff() < 1e-12);
  // Both are orthonormal compact 3-dim algebras: |c_ijk| = |eps_ijk| / sqrt 2.
  for (std::size_t i = 0; i < 27; ++i) CHECK(std::abs(b.constants()[i]) == doctest::Approx(std::abs(a.constants()[i])));
}

TEST_CASE("validation errors") {
  CHECK(code_of([] { builtin("so17"); }) == ErrorCode::UnknownAlgebra);
  std::vector<double> asym(27, 0.0);
  asym[(0 * 3 + 1) * 3 + 2] = 1.0;  // [e0,e1] = e2 without [e1,e0] = -e2
  CHECK(code_of([&] { validate_structure(3, asym); }) == ErrorCode::NotAntisymmetric);
  // [e0,e1] = e1, [e1,e2] = e0: cyclic sum on (e0,e1,e2) is -e0.
  const auto bad_jacobi = constants_from({{0, 1, 1, 1.0}, {1, 2, 0, 1.0}});
  CHECK(jacobi_residual(3, bad_jacobi).residual == doctest::Approx(1.0));
  CHECK(code_of([&] { validate_structure(3, bad_jacobi); }) == ErrorCode::JacobiViolation);
  // sl2 = span(h, e, f) satisfies Jacobi but is not compact.
  const auto sl2 = constants_from({{0, 1, 1, 2.0}, {0, 2, 2, -2.0}, {1, 2, 0, 1.0}});
  CHECK(jacobi_residual(3, sl2).residual == 0.0);
  CHECK(code_of([&] { validate_structure(3, sl2); }) == ErrorCode::KillingNotNegativeDefinite);
  // Abelian algebras have K = 0.
  CHECK(code_of([] { validate_structure(3, std::vector<double>(27, 0.0)); }) == ErrorCode::KillingNotNegativeDefinite);
  CHECK(code_of([] { validate_structure(3, std::vector<double>(5, 0.0)); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("orthonormalize preserves brackets and is idempotent") {
  // Scale the raw basis: e'_i = 3 e_i gives c' = 3 eps and K' = -18 Id.
  std::vector<double> c = raw_so3().constants();
  for (double& v : c) v *= 3.0;
  const LieAlgebra scaled = validate_structure(3, c);
  CHECK(scaled.killing()(0, 0) == doctest::Approx(-18.0));
  const LieAlgebra o = orthonormalize(scaled);
  const Eigen::MatrixXd t = orthonormal_basis_change(scaled);
  CHECK((t - Eigen::MatrixXd::Identity(3, 3) / std::sqrt(18.0)).cwiseAbs().maxCoeff() < 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(3), y(3);
    for (int i = 0; i < 3; ++i) x[i] = u(rng), y[i] = u(rng);
    CHECK(((t * o.bracket(x, y)) - scaled.bracket(t * x, t * y)).cwiseAbs().maxCoeff() < 1e-14);
  }
  const LieAlgebra twice = orthonormalize(o);
  CHECK(twice.constants() == o.constants());
}

TEST_CASE("bracket of coordinate vectors") {
  const LieAlgebra g = raw_so3();
  Eigen::VectorXd e0 = Eigen::VectorXd::Unit(3, 0), e1 = Eigen::VectorXd::Unit(3, 1);
  CHECK((g.bracket(e0, e1) - Eigen::VectorXd::Unit(3, 2)).norm() == 0.0);
  CHECK((g.bracket(e1, e0) + Eigen::VectorXd::Unit(3, 2)).norm() == 0.0);
}
