#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "nmjet/errors.hpp"
#include "nmjet/jet.hpp"
#include "nmjet/jetspace.hpp"

using namespace nmjet;

namespace {

Jet x(int i, int D = 6) { return Jet::variable(3, D, i); }
Jet one(int D = 6) { return Jet::constant(3, D, 1.0); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::BadInput;
}

}  // namespace

TEST_CASE("monomial basis layout") {
  const auto b = MonomialBasis::get(3, 6);
  CHECK(b->size() == 84);  // C(9,3)
  for (int d = 0; d <= 6; ++d) CHECK(b->degree_size(d) == static_cast<std::size_t>((d + 1) * (d + 2) / 2));
  const std::array<int, 3> a{2, 0, 1};
  const std::size_t idx = b->index_of(a);
  CHECK(b->degree(idx) == 3);
  CHECK(std::vector<int>(b->exponent(idx).begin(), b->exponent(idx).end()) == std::vector<int>{2, 0, 1});
  const std::array<int, 3> big{4, 3, 0};
  CHECK(b->index_of(big) == MonomialBasis::npos);
}

TEST_CASE("jet arithmetic and truncation") {
  CHECK(((x(0) + x(1) * x(1)) + (-(x(1) * x(1))) - x(0)).is_zero());
  // x1^2 * x1^2 truncates to zero at cap 3.
  CHECK((x(0, 3) * x(0, 3) * x(0, 3) * x(0, 3)).is_zero());
  const Jet prod = (one(4) + x(0, 4)) * (one(4) - x(0, 4));
  CHECK((prod - (one(4) - x(0, 4) * x(0, 4))).is_zero());
  const std::array<int, 3> a110{1, 1, 0};
  CHECK(((x(0) + x(1)) * (x(0) + x(1))).coeff(a110) == 2.0);
  const std::array<double, 3> p{0.5, -1.0, 2.0};
  CHECK((x(0) * x(1) + 3.0 * x(2)).evaluate(p) == doctest::Approx(-0.5 + 6.0));
  CHECK(code_of([] { Jet(3, 4) + Jet(2, 4); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("partial derivatives") {
  CHECK((partial(x(0) * x(0) * x(1), 0) - 2.0 * x(0) * x(1)).is_zero());
  CHECK(partial(x(0), 1).is_zero());
  CHECK(code_of([] { partial(x(0), 3); }) == ErrorCode::IndexOutOfRange);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const Jet f = random_jet(rng, 3, 6, 0, 6);
    CHECK((partial(partial(f, 0), 1) - partial(partial(f, 1), 0)).max_abs_coeff() == 0.0);
  }
}

TEST_CASE("ck_norm hand values") {
  CHECK(ck_norm(x(0), {0, 0.5}) == doctest::Approx(0.5));
  CHECK(ck_norm(x(0), {1, 0.5}) == doctest::Approx(1.0));
  const Jet f = 3.0 * x(0) * x(0) * x(1);
  CHECK(ck_norm(f, {0, 1.0}) == doctest::Approx(3.0));
  CHECK(ck_norm(f, {1, 1.0}) == doctest::Approx(6.0));
  // x1^2 + 2 x2 at r = 0.5: sum |c| r^|b| = 0.25 + 1; derivatives 2x1 -> 1, 2 -> 2.
  const Jet g = x(0) * x(0) + 2.0 * x(1);
  CHECK(ck_norm(g, {0, 0.5}) == doctest::Approx(1.25));
  CHECK(ck_norm(g, {1, 0.5}) == doctest::Approx(2.0));
  CHECK(ck_norm(g, {2, 0.5}) == doctest::Approx(2.0));
  CHECK(code_of([] { ck_norm(x(0), {0, 1.5}); }) == ErrorCode::BadInput);
}

TEST_CASE("ball integrals against Monte Carlo") {
  const std::array<int, 3> sq{2, 0, 0}, zero{0, 0, 0}, quart{2, 2, 0};
  CHECK(ball_monomial_integral(zero, 1.0) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  CHECK(ball_monomial_integral(sq, 1.0) == doctest::Approx(4.0 * std::numbers::pi / 15.0));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 400000;
  double s2 = 0.0, s22 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    if (a * a + b * b + c * c > 1.0) continue;
    s2 += a * a;
    s22 += a * a * b * b;
  }
  CHECK(std::abs(8.0 * s2 / n - ball_monomial_integral(sq, 1.0)) < 1e-2);
  CHECK(std::abs(8.0 * s22 / n - ball_monomial_integral(quart, 1.0)) < 1e-2);
  // Scaling: int_{B_r} z^g = r^{|g|+n} int_{B_1} z^g.
  CHECK(ball_monomial_integral(sq, 0.5) == doctest::Approx(std::pow(0.5, 5) * ball_monomial_integral(sq, 1.0)));
}

TEST_CASE("sobolev inner product") {
  const double pi = std::numbers::pi;
  CHECK(sobolev_inner(one(), one(), 0, 1.0) == doctest::Approx(4.0 * pi / 3.0));
  CHECK(sobolev_inner(x(0), x(0), 0, 1.0) == doctest::Approx(4.0 * pi / 15.0));
  // k = 1 adds int |d_1 x1|^2 = volume.
  CHECK(sobolev_inner(x(0), x(0), 1, 1.0) == doctest::Approx(4.0 * pi / 15.0 + 4.0 * pi / 3.0));
  for (int k = 0; k <= 3; ++k) CHECK(sobolev_inner(x(0), x(1), k, 0.7) == 0.0);
  std::mt19937_64 rng(2);
  const Jet f = random_jet(rng, 3, 6, 0, 6), g = random_jet(rng, 3, 6, 0, 6);
  CHECK(sobolev_inner(f, g, 2, 0.8) == doctest::Approx(sobolev_inner(g, f, 2, 0.8)));
  CHECK(sobolev_inner(f, f, 2, 0.8) > 0.0);
}

TEST_CASE("smoothing by degree truncation") {
  const Jet f = one() + x(0) + x(0) * x(0) * x(0) * x(0) * x(0);
  CHECK((smooth(f, 3.0) - (one() + x(0))).is_zero());
  CHECK((smooth(f, 6.0) - f).is_zero());
  CHECK((smooth(f, 9.5) - f).is_zero());
  CHECK(code_of([&] { smooth(f, 1.0); }) == ErrorCode::BadSmoothingParameter);
}

TEST_CASE("interpolation residual") {
  CHECK(interpolation_residual(Jet(3, 6), 4, 2, 0, 0.5) == 1.0);
  CHECK(code_of([] { interpolation_residual(x(0), 1, 2, 0, 1.0); }) == ErrorCode::BadOrders);
  CHECK(code_of([] { interpolation_residual(x(0), 3, 1, 2, 1.0); }) == ErrorCode::BadOrders);
  // With k = 0 norms every order agrees on a single monomial, so the ratio is 1.
  CHECK(interpolation_residual(x(0) * x(0), 0, 0, 0, 0.5) == doctest::Approx(1.0));
  // x1^2 at r=1: norms 1, 2, 2 for orders 0, 1, 2, so (2)^2 / (1 * 2) = 2.
  CHECK(interpolation_residual(x(0) * x(0), 2, 1, 0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("trial generators are reproducible and independent") {
  auto a = trial_rng(7, 3), b = trial_rng(7, 3), c = trial_rng(7, 4);
  const auto va = a(), vb = b(), vc = c();
  CHECK(va == vb);
  CHECK(va != vc);
}
