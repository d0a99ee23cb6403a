#include "nmjet/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "nmjet/ce_complex.hpp"
#include "nmjet/errors.hpp"
#include "nmjet/jetgroup.hpp"
#include "nmjet/jetspace.hpp"
#include "nmjet/lie_algebra.hpp"
#include "nmjet/nashmoser.hpp"
#include "nmjet/poisson.hpp"
#include "nmjet/scenario.hpp"

namespace nmjet {

bool SuiteResult::passed() const { return failures() == 0; }

std::size_t SuiteResult::failures() const {
  std::size_t n = 0;
  for (const Check& c : checks) n += c.passed ? 0 : 1;
  return n;
}

LieAlgebra raw_so3() {
  std::vector<double> c(27, 0.0);
  const auto set = [&](int i, int j, int k, double v) { c[(i * 3 + j) * 3 + k] = v; };
  const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  for (const auto& t : cyc) {
    set(t[0], t[1], t[2], 1.0);
    set(t[1], t[0], t[2], -1.0);
  }
  return validate_structure(3, std::move(c), "so3_raw");
}

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Outcome at_most(double value, double bound) {
  return {value <= bound, "value " + num(value) + " <= " + num(bound)};
}
Outcome below(double value, double bound) {
  return {value < bound, "value " + num(value) + " < " + num(bound)};
}
Outcome at_least(double value, double bound) {
  return {value >= bound, "value " + num(value) + " >= " + num(bound)};
}
Outcome holds(bool ok, std::string detail = {}) { return {ok, std::move(detail)}; }

template <class F>
Outcome throws_code(ErrorCode expected, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    return {e.code() == expected, "raised " + std::string(to_string(e.code()))};
  }
  return {false, "no error raised"};
}

class Recorder {
 public:
  explicit Recorder(SuiteResult& s) : s_(s) {}

  void check(const std::string& name, const std::function<Outcome()>& body) {
    Check c{name, false, {}};
    try {
      Outcome o = body();
      c.passed = o.ok;
      c.detail = std::move(o.detail);
    } catch (const std::exception& e) {
      c.detail = std::string("unexpected exception: ") + e.what();
    }
    s_.checks.push_back(std::move(c));
  }

  /// One check per law family: every cell needs a finite constant, no
  /// unbounded samples, and its threshold if it has one.
  void fits(const std::string& name, const std::function<std::vector<FitResult>()>& sweep) {
    check(name, [&] {
      const std::vector<FitResult> fs = sweep();
      bool ok = !fs.empty();
      double worst = 0.0;
      std::size_t unbounded = 0;
      std::string failing;
      for (const FitResult& f : fs) {
        s_.fits.push_back(f);
        worst = std::max(worst, f.constant);
        unbounded += f.unbounded;
        if (!f.ok()) {
          ok = false;
          failing += "; " + f.law + "(" + f.params + ") C=" + num(f.constant) +
                     (std::isfinite(f.threshold) ? " > " + num(f.threshold) : "") +
                     (f.unbounded ? " unbounded=" + std::to_string(f.unbounded) : "");
        }
      }
      return Outcome{ok, std::to_string(fs.size()) + " cells, max C " + num(worst) + ", unbounded " +
                             std::to_string(unbounded) + failing};
    });
  }

  SuiteResult& suite() { return s_; }

 private:
  SuiteResult& s_;
};

SweepOptions sweep_options(const VerifyOptions& o) {
  SweepOptions s;
  s.trials = o.trials;
  s.seed = o.seed;
  s.exec = o.exec;
  s.nvars = 3;
  s.degcap = o.degcap;
  return s;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double max_coeff(std::span<const Jet> js, int upto) {
  double worst = 0.0;
  for (const Jet& j : js) worst = std::max(worst, j.max_abs_coeff_upto(upto));
  return worst;
}

LieAlgebraPtr shared(LieAlgebra g) { return std::make_shared<const LieAlgebra>(std::move(g)); }

// ---------------------------------------------------------------- algebra

void algebra_suite(Recorder& rec, const VerifyOptions& o) {
  const std::vector<std::pair<std::string, LieAlgebra>> algebras{
      {"so3", builtin("so3")}, {"su2", builtin("su2")}, {"so3_raw", raw_so3()}};
  for (const auto& [label, g] : algebras) {
    rec.check(label + " Jacobi residual", [&] { return below(jacobi_residual(g.dim(), g.constants()).residual, 1e-12); });
    rec.check(label + " Killing form symmetric", [&] { return at_most(max_abs(g.killing() - g.killing().transpose()), 0.0); });
    rec.check(label + " -K positive definite", [&] {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-g.killing());
      return Outcome{es.eigenvalues().minCoeff() > 0.0, "min eigenvalue " + num(es.eigenvalues().minCoeff())};
    });
    rec.check(label + " Killing form matches direct summation", [&] {
      return at_most(max_abs(g.killing() - killing_form(g.dim(), g.constants())), 0.0);
    });
  }
  rec.check("builtin algebras are orthonormal", [&] {
    double worst = 0.0;
    for (const char* name : {"so3", "su2"}) {
      const LieAlgebra g = builtin(name);
      worst = std::max(worst, max_abs(-g.killing() - Eigen::MatrixXd::Identity(3, 3)));
      worst = std::max(worst, total_antisymmetry_defect(g));
    }
    return at_most(worst, 1e-12);
  });
  rec.check("raw so3 Killing form is -2 Id", [&] {
    return at_most(max_abs(raw_so3().killing() + 2.0 * Eigen::MatrixXd::Identity(3, 3)), 1e-14);
  });
  rec.check("orthonormalize is idempotent", [&] {
    const LieAlgebra once = orthonormalize(raw_so3());
    const LieAlgebra twice = orthonormalize(once);
    double worst = 0.0;
    for (std::size_t i = 0; i < once.constants().size(); ++i)
      worst = std::max(worst, std::abs(once.constants()[i] - twice.constants()[i]));
    return at_most(worst, 0.0);
  });
  rec.check("orthonormalize preserves the bracket (100 random pairs)", [&] {
    // so(3) written in a random skewed basis B, so -K is far from Id.
    std::mt19937_64 rng = trial_rng(o.seed, 0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const LieAlgebra base = raw_so3();
    Eigen::Matrix3d b = Eigen::Matrix3d::Identity() * 1.5;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) b(i, j) += 0.5 * u(rng);
    const Eigen::Matrix3d b_inv = b.inverse();
    std::vector<double> c(27);
    for (int a = 0; a < 3; ++a)
      for (int bb = 0; bb < 3; ++bb) {
        const Eigen::Vector3d br = b_inv * base.bracket(b.col(a), b.col(bb));
        for (int p = 0; p < 3; ++p) c[(a * 3 + bb) * 3 + p] = br[p];
      }
    for (int a = 0; a < 3; ++a)  // exact antisymmetry after rounding
      for (int bb = a; bb < 3; ++bb)
        for (int p = 0; p < 3; ++p) {
          const double v = 0.5 * (c[(a * 3 + bb) * 3 + p] - c[(bb * 3 + a) * 3 + p]);
          c[(a * 3 + bb) * 3 + p] = v;
          c[(bb * 3 + a) * 3 + p] = -v;
        }
    const LieAlgebra skewed = validate_structure(3, c, "skewed");
    const LieAlgebra ortho = orthonormalize(skewed);
    const Eigen::MatrixXd t = orthonormal_basis_change(skewed);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd x(3), y(3);
      for (int i = 0; i < 3; ++i) x[i] = u(rng), y[i] = u(rng);
      const Eigen::VectorXd lhs = t * ortho.bracket(x, y);
      const Eigen::VectorXd rhs = skewed.bracket(t * x, t * y);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + rhs.cwiseAbs().maxCoeff()));
    }
    const double killing = max_abs(-ortho.killing() - Eigen::MatrixXd::Identity(3, 3));
    return Outcome{worst <= 1e-12 && killing <= 1e-12,
                   "bracket defect " + num(worst) + ", |-K' - Id| " + num(killing)};
  });
  rec.check("su2 and so3 agree after orthonormalization", [&] {
    const LieAlgebra a = builtin("so3"), b = builtin("su2");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.constants().size(); ++i)
      worst = std::max(worst, std::abs(std::abs(a.constants()[i]) - std::abs(b.constants()[i])));
    return at_most(worst + max_abs(a.killing() - b.killing()), 1e-12);
  });
  rec.check("unknown builtin name is rejected", [&] {
    return throws_code(ErrorCode::UnknownAlgebra, [] { builtin("so17"); });
  });
  rec.check("non-compact sl2 is rejected", [&] {
    // [h,e] = 2e, [h,f] = -2f, [e,f] = h with basis (h, e, f).
    std::vector<double> c(27, 0.0);
    const auto set = [&](int i, int j, int k, double v) {
      c[(i * 3 + j) * 3 + k] = v;
      c[(j * 3 + i) * 3 + k] = -v;
    };
    set(0, 1, 1, 2.0);
    set(0, 2, 2, -2.0);
    set(1, 2, 0, 1.0);
    return throws_code(ErrorCode::KillingNotNegativeDefinite, [&] { validate_structure(3, c); });
  });
}

// ---------------------------------------------------------------- jetspace

// All multi-indices alpha in N^n with |alpha| <= k.
std::vector<std::vector<int>> multi_indices(int n, int k) {
  std::vector<std::vector<int>> out{std::vector<int>(n, 0)};
  for (std::size_t i = 0; i < out.size(); ++i) {
    int total = 0;
    for (int a : out[i]) total += a;
    if (total == k) continue;
    // Extend only at or after the last nonzero slot to avoid duplicates.
    int last = 0;
    for (int v = 0; v < n; ++v)
      if (out[i][v] > 0) last = v;
    for (int v = last; v < n; ++v) {
      auto next = out[i];
      ++next[v];
      out.push_back(std::move(next));
    }
  }
  return out;
}

std::vector<double> point_in_ball(std::mt19937_64& rng, int n, double r) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> z(n);
  double norm = 0.0;
  for (double& x : z) {
    x = g(rng);
    norm += x * x;
  }
  const double scale = r * std::pow(u(rng), 1.0 / n) / std::sqrt(norm);
  for (double& x : z) x *= scale;
  return z;
}

void jetspace_suite(Recorder& rec, const VerifyOptions& o) {
  const int n = 3, D = o.degcap;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  rec.check("norm monotone in k and radius (500 random cases)", [&] {
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      auto rng = trial_rng(o.seed, t);
      const Jet f = random_jet(rng, n, D, 0, D);
      int k1 = static_cast<int>(rng() % 4), k2 = static_cast<int>(rng() % 4);
      double r1 = 0.05 + 0.95 * unit(rng), r2 = 0.05 + 0.95 * unit(rng);
      if (k1 < k2) std::swap(k1, k2);
      if (r1 < r2) std::swap(r1, r2);
      worst = std::max(worst, ck_norm(f, {k2, r2}) - ck_norm(f, {k1, r1}));
    }
    return at_most(worst, 0.0);
  });
  rec.check("triangle inequality and homogeneity (500 random pairs)", [&] {
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      auto rng = trial_rng(o.seed + 1, t);
      const Jet f = random_jet(rng, n, D, 0, D), g = random_jet(rng, n, D, 0, D);
      const NormParams p{static_cast<int>(rng() % 4), 0.05 + 0.95 * unit(rng)};
      const double a = 4.0 * unit(rng) - 2.0;
      const double nf = ck_norm(f, p), ng = ck_norm(g, p);
      worst = std::max(worst, (ck_norm(f + g, p) - nf - ng) / (nf + ng));
      worst = std::max(worst, std::abs(ck_norm(a * f, p) - std::abs(a) * nf) / nf);
    }
    return at_most(worst, 1e-14);
  });
  rec.check("norm dominates sup of derivatives (100 jets x 1000 points)", [&] {
    std::vector<double> worst(static_cast<std::size_t>(100), 0.0);
    for_each_index(100, o.exec, [&](std::size_t t) {
      auto rng = trial_rng(o.seed + 2, t);
      const Jet f = random_jet(rng, n, D, 0, D);
      const int k = static_cast<int>(t % 3);
      const double r = 0.1 + 0.9 * unit(rng);
      const double bound = ck_norm(f, {k, r});
      std::vector<Jet> ders;
      for (const auto& alpha : multi_indices(n, k)) {
        Jet d = f;
        for (int v = 0; v < n; ++v)
          for (int a = 0; a < alpha[v]; ++a) d = partial(d, v);
        ders.push_back(std::move(d));
      }
      for (int s = 0; s < 1000; ++s) {
        const auto z = point_in_ball(rng, n, r);
        for (const Jet& d : ders) worst[t] = std::max(worst[t], std::abs(d.evaluate(z)) / bound);
      }
    });
    return at_most(*std::max_element(worst.begin(), worst.end()), 1.0);
  });
  rec.check("smoothing is a linear projection", [&] {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      auto rng = trial_rng(o.seed + 3, t);
      const Jet f = random_jet(rng, n, D, 0, D), g = random_jet(rng, n, D, 0, D);
      const double tt = 1.01 + 8.0 * unit(rng), a = unit(rng) - 0.5, b = 3.0 * unit(rng);
      const Jet sf = smooth(f, tt);
      worst = std::max(worst, (smooth(sf, tt) - sf).max_abs_coeff());
      worst = std::max(worst, (smooth(a * f + b * g, tt) - (a * sf + b * smooth(g, tt))).max_abs_coeff());
    }
    return at_most(worst, 0.0);
  });
  rec.check("smoothing rejects t <= 1", [&] {
    return throws_code(ErrorCode::BadSmoothingParameter, [&] { smooth(Jet(n, D), 1.0); });
  });
  rec.check("Sobolev inner product is positive definite", [&] {
    double smallest = INFINITY;
    for (int t = 0; t < 100; ++t) {
      auto rng = trial_rng(o.seed + 4, t);
      // Single monomials at the top degree are the hardest case.
      Jet f = t % 2 ? random_jet(rng, n, D, 0, D)
                    : Jet::monomial(n, D, Jet(n, D).basis().exponent(rng() % Jet(n, D).basis().size()));
      const int k = static_cast<int>(rng() % 3);
      smallest = std::min(smallest, sobolev_inner(f, f, k, 0.1 + 0.9 * unit(rng)));
    }
    const double zero = sobolev_inner(Jet(n, D), Jet(n, D), 2, 1.0);
    return Outcome{smallest > 0.0 && zero == 0.0, "min <f,f> " + num(smallest) + ", <0,0> " + num(zero)};
  });
  rec.check("ball integrals match closed forms", [&] {
    const int none[3] = {0, 0, 0}, sq[3] = {2, 0, 0}, odd[3] = {1, 2, 0};
    const double pi = std::numbers::pi;
    double err = std::abs(ball_monomial_integral(none, 1.0) - 4.0 * pi / 3.0);
    err = std::max(err, std::abs(ball_monomial_integral(sq, 1.0) - 4.0 * pi / 15.0));
    err = std::max(err, std::abs(ball_monomial_integral(none, 0.5) - 4.0 * pi / 24.0));
    err = std::max(err, std::abs(ball_monomial_integral(odd, 1.0)));
    return at_most(err, 1e-14);
  });
  const SweepOptions so = sweep_options(o);
  // The C <= 10 target is set for D = 8; at the run cap the constants only need to be finite.
  const auto capped = [&](double radius) {
    SweepOptions s8 = so;
    s8.degcap = 8;
    auto fs = smoothing_sweep(s8, radius);
    for (FitResult& f : fs) {
      f.params += ",D=8";
      f.threshold = 10.0;
    }
    return fs;
  };
  rec.fits("smoothing axioms at D = 8, radius 1, C <= 10", [&] { return capped(1.0); });
  rec.fits("smoothing axioms at D = 8, radius 0.5, C <= 10", [&] { return capped(0.5); });
  rec.fits("smoothing axioms at the run cap, radii 1 and 0.5", [&] {
    auto fs = smoothing_sweep(so, 1.0);
    for (FitResult& f : smoothing_sweep(so, 0.5)) fs.push_back(f);
    return fs;
  });
  rec.fits("interpolation (0,2,4) at radius 0.5, C <= 50", [&] {
    SweepOptions big = so;
    big.trials = std::max(o.trials, 500);
    FitResult f = interpolation_sweep(big, 4, 2, 0, 0.5);
    f.threshold = 50.0;
    return std::vector<FitResult>{f};
  });
  rec.fits("interpolation (0,1,3) and (1,2,3) at radius 1", [&] {
    return std::vector<FitResult>{interpolation_sweep(so, 3, 1, 0, 1.0), interpolation_sweep(so, 3, 2, 1, 1.0)};
  });
}

// ---------------------------------------------------------------- poisson

void poisson_suite(Recorder& rec, const VerifyOptions& o) {
  const int n = 3, D = o.degcap;
  const LieAlgebraPtr alg = shared(builtin("so3"));
  const PoissonBivector pi = linear_poisson(*alg, D);
  const MomentumMap lambda = identity_momentum_map(alg, D);

  rec.check("linear Poisson structure satisfies Jacobi exactly", [&] {
    const double r = std::max(jacobi_residual(pi), jacobi_residual(linear_poisson(raw_so3(), D)));
    return at_most(r, 0.0);
  });
  rec.check("linear Poisson structure is linear", [&] { return holds(pi.is_linear()); });
  rec.check("bracket bilinear, antisymmetric, Leibniz, Jacobi (100 random triples)", [&] {
    double bil = 0.0, anti = 0.0, leib = 0.0, jac = 0.0;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 100; ++t) {
      auto rng = trial_rng(o.seed + 10, t);
      const Jet f = random_jet(rng, n, D, 1, 3), g = random_jet(rng, n, D, 1, 3), h = random_jet(rng, n, D, 1, 3);
      const double a = u(rng), b = u(rng);
      const auto br = [&](const Jet& x, const Jet& y) { return bracket(x, y, pi); };
      bil = std::max(bil, (br(a * f + b * g, h) - a * br(f, h) - b * br(g, h)).max_abs_coeff());
      anti = std::max(anti, (br(f, g) + br(g, f)).max_abs_coeff());
      leib = std::max(leib, (br(f, g * h) - br(f, g) * h - g * br(f, h)).max_abs_coeff());
      jac = std::max(jac, (br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))).max_abs_coeff());
    }
    return Outcome{std::max({bil, anti, leib, jac}) <= 1e-12, "bilinear " + num(bil) + ", antisymmetry " +
                                                                   num(anti) + ", Leibniz " + num(leib) +
                                                                   ", Jacobi " + num(jac)};
  });
  rec.check("Hamiltonian vector field acts as {g, .}", [&] {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      auto rng = trial_rng(o.seed + 11, t);
      const Jet g = random_jet(rng, n, D, 1, 3), F = random_jet(rng, n, D, 1, 3);
      const auto X = hamiltonian_vf(g, pi);
      Jet xf(n, D);
      for (int i = 0; i < n; ++i) xf += X[i] * partial(F, i);
      worst = std::max(worst, (xf - bracket(g, F, pi)).max_abs_coeff());
    }
    return at_most(worst, 1e-12);
  });
  rec.check("sign convention: X_{x3} = (x2, -x1, 0) for raw so3", [&] {
    const PoissonBivector raw = linear_poisson(raw_so3(), D);
    const auto X = hamiltonian_vf(Jet::variable(n, D, 2), raw);
    const double err = std::max({(X[0] - Jet::variable(n, D, 1)).max_abs_coeff(),
                                 (X[1] + Jet::variable(n, D, 0)).max_abs_coeff(), X[2].max_abs_coeff()});
    return at_most(err, 0.0);
  });
  rec.check("identity momentum map is equivariant", [&] { return at_most(equivariance_residual(lambda, pi), 0.0); });
  rec.check("lambda o flow is equivariant (50 random flows)", [&] {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      auto rng = trial_rng(o.seed + 12, t);
      const Jet g = 0.1 * random_generator(rng, n, D);
      worst = std::max(worst, equivariance_residual(pullback(lambda, time1_flow(g, pi)), pi));
    }
    return at_most(worst, 1e-9);
  });
  rec.check("mu_1 = 2 x_1 breaks equivariance", [&] {
    MomentumMap bad = lambda;
    bad.components[0] = 2.0 * Jet::variable(n, D, 0);
    const double r = equivariance_residual(bad, pi);
    const Outcome raised = throws_code(ErrorCode::NotMomentumMap, [&] { require_momentum_map(bad, pi); });
    return Outcome{r > 0.0 && raised.ok, "residual " + num(r) + ", " + raised.detail};
  });
  rec.check("quadratic-error identity delta f(xi_i, xi_j) = -{f_i, f_j}", [&] {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      auto rng = trial_rng(o.seed + 13, t);
      const Jet g = 0.2 * random_generator(rng, n, D);
      const MomentumMap mu = pullback(lambda, time1_flow(g, pi));
      const auto f = difference(mu, lambda);
      const Cochain df = delta(Cochain::from_components(alg, f), lambda, pi);
      for (std::size_t idx = 0; idx < df.size(); ++idx) {
        const auto& tu = df.tuple(idx);
        worst = std::max(worst, (df.value(idx) + bracket(f[tu[0]], f[tu[1]], pi)).max_abs_coeff());
      }
    }
    return at_most(worst, 1e-12);
  });
  rec.fits("quadratic error with the explicit constant n(n-1)", [&] {
    return quadratic_error_sweep(sweep_options(o), lambda, pi);
  });
}

// ---------------------------------------------------------------- ce

Cochain random_cochain(std::mt19937_64& rng, const LieAlgebraPtr& alg, int q, int D) {
  Cochain c(alg, q, alg->dim(), D);
  for (std::size_t i = 0; i < c.size(); ++i) c.value(i) = random_jet(rng, alg->dim(), D, 0, D);
  return c;
}

double cochain_distance(const Cochain& a, const Cochain& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a.value(i) - b.value(i)).max_abs_coeff());
  return worst;
}

void ce_suite(Recorder& rec, const VerifyOptions& o) {
  const int D = o.degcap;
  const LieAlgebraPtr alg = shared(builtin("so3"));
  const Problem p = make_problem(alg, D, o.exec);
  const HomotopySet& hs = p.hs;

  double dd = 0.0, hom = 0.0;
  int h1 = 0, h2 = 0, rank_gap = 0;
  bool finite = true;
  for (const DegreeBlock& b : hs.blocks()) {
    const BlockDiagnostics& g = b.diagnostics;
    dd = std::max({dd, g.d1d0_residual, g.d2d1_residual});
    hom = std::max({hom, g.homotopy_c1_residual, g.homotopy_c2_residual});
    h1 = std::max(h1, g.h1);
    h2 = std::max(h2, g.h2);
    rank_gap = std::max(rank_gap, std::abs(g.rank_d0 + g.rank_d1 - static_cast<int>(g.dim_c1)));
    rank_gap = std::max(rank_gap, std::abs(g.rank_d1 + g.rank_d2 - static_cast<int>(g.dim_c2)));
    for (const Eigen::MatrixXd* m : {&b.d0, &b.d1, &b.d2, &b.h0, &b.h1, &b.h2}) finite = finite && m->allFinite();
  }
  rec.suite().extra["blocks"] = blocks_to_json(hs);
  rec.check("delta o delta = 0 in every degree block", [&] { return at_most(dd, 1e-12); });
  rec.check("homotopy identities on C1 and C2 in every block", [&] { return at_most(hom, 1e-10); });
  rec.check("Whitehead vanishing H1 = H2 = 0 by rank accounting", [&] {
    return Outcome{h1 == 0 && h2 == 0 && rank_gap == 0,
                   "max H1 " + std::to_string(h1) + ", max H2 " + std::to_string(h2) + ", rank gap " +
                       std::to_string(rank_gap)};
  });
  rec.check("homotopy operators are real and finite", [&] { return holds(finite); });
  rec.check("H0 is spanned by powers of the Casimir", [&] {
    bool ok = true;
    for (const DegreeBlock& b : hs.blocks()) ok = ok && b.diagnostics.h0 == (b.degree % 2 == 0 ? 1 : 0);
    return holds(ok);
  });
  rec.check("rho is degree preserving on every monomial", [&] {
    const MonomialBasis& basis = p.lambda.components[0].basis();
    bool ok = true;
    for (std::size_t idx = 0; idx < basis.size(); ++idx) {
      const Jet m = Jet::monomial(3, D, basis.exponent(idx));
      for (int i = 0; i < 3; ++i) {
        const Jet r = rho(i, m, p.lambda, p.pi);
        ok = ok && (r.is_zero() || (r.lowest_degree() == basis.degree(idx) && r.highest_degree() == basis.degree(idx)));
      }
    }
    return holds(ok);
  });
  rec.check("block differentials agree with the symbolic differential", [&] {
    double worst = 0.0;
    for (int t = 0; t < 30; ++t) {
      auto rng = trial_rng(o.seed + 20, t);
      const Cochain c = random_cochain(rng, alg, t % 3, D);
      worst = std::max(worst, cochain_distance(delta(c, p.lambda, p.pi), hs.apply_delta(c)));
    }
    return at_most(worst, 1e-12);
  });
  rec.check("h0 inverts delta0 off the invariants", [&] {
    double worst = 0.0;
    for (int t = 0; t < 30; ++t) {
      auto rng = trial_rng(o.seed + 21, t);
      const Cochain g = random_cochain(rng, alg, 0, D);
      const Cochain f = hs.apply_h(hs.apply_delta(g));  // projection off the invariants
      worst = std::max(worst, cochain_distance(hs.apply_h(hs.apply_delta(f)), f));
    }
    return at_most(worst, 1e-10);
  });
  rec.check("Casimir acts as -Id on degree one (orthonormal basis)", [&] {
    Eigen::MatrixXd cas = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i) cas += rho_block(i, 1, p.lambda, p.pi) * rho_block(i, 1, p.lambda, p.pi);
    return at_most(max_abs(cas + Eigen::MatrixXd::Identity(3, 3)), 1e-14);
  });
  rec.check("Casimir acts as -2 Id on degree one (raw so3)", [&] {
    const LieAlgebraPtr raw = shared(raw_so3());
    const PoissonBivector rpi = linear_poisson(*raw, D);
    const MomentumMap rl = identity_momentum_map(raw, D);
    Eigen::MatrixXd cas = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i) cas += rho_block(i, 1, rl, rpi) * rho_block(i, 1, rl, rpi);
    return at_most(max_abs(cas + 2.0 * Eigen::MatrixXd::Identity(3, 3)), 1e-14);
  });
  rec.check("derivative shift s = 2 for n = 3", [&] { return holds(derivative_shift(3) == 2); });

  const HomotopyBoundReport hb = homotopy_norm_bound(hs, std::max(1, o.trials * 3 / 2), o.seed + 22, o.exec);
  rec.fits("homotopy norm bounds are finite", [&] {
    std::vector<FitResult> fs;
    for (const HomotopyBoundEntry& e : hb.entries) {
      FitResult f{"homotopy_h" + std::to_string(e.j),
                  "k=" + std::to_string(e.k) + ",r=" + num(e.r) + ",s=" + std::to_string(hb.shift)};
      f.constant = e.constant;
      f.samples = e.samples;
      f.unbounded = e.unbounded;
      fs.push_back(f);
    }
    return fs;
  });
  json spread = json::array();
  for (int j = 0; j <= 1; ++j)
    for (int k = 1; k <= 3; ++k) spread.push_back({{"j", j}, {"k", k}, {"spread", hb.radius_spread(j, k)}});
  rec.suite().extra["homotopy_radius_spread"] = spread;
  rec.check("fitted homotopy constants agree across radii within factor 2", [&] {
    double worst = 0.0;
    for (const json& e : spread) worst = std::max(worst, e.at("spread").get<double>());
    return at_most(worst, 2.0);
  });
}

// ---------------------------------------------------------------- group

void group_suite(Recorder& rec, const VerifyOptions& o) {
  const int n = 3, D = o.degcap;
  const LieAlgebraPtr alg = shared(builtin("so3"));
  const PoissonBivector pi = linear_poisson(*alg, D);
  const MomentumMap lambda = identity_momentum_map(alg, D);
  const auto small_map = [&](std::mt19937_64& rng, double norm) {
    return random_small_map(rng, n, D, 1, norm, {1, 1.0});
  };

  rec.check("identity is neutral", [&] {
    double worst = 0.0;
    const JetMap id = JetMap::identity(n, D);
    for (int t = 0; t < 50; ++t) {
      auto rng = trial_rng(o.seed + 30, t);
      const JetMap phi = small_map(rng, 0.2);
      worst = std::max({worst, map_distance(compose(id, phi), phi, D), map_distance(compose(phi, id), phi, D)});
    }
    return at_most(worst, 1e-10);
  });
  rec.check("composition is associative (50 triples)", [&] {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      auto rng = trial_rng(o.seed + 31, t);
      const JetMap a = small_map(rng, 0.2), b = small_map(rng, 0.2), c = small_map(rng, 0.2);
      worst = std::max(worst, map_distance(compose(compose(a, b), c), compose(a, compose(b, c)), D));
    }
    return at_most(worst, 1e-10);
  });
  rec.check("inverse is two-sided (100 maps)", [&] {
    double worst = 0.0;
    const JetMap id = JetMap::identity(n, D);
    for (int t = 0; t < 100; ++t) {
      auto rng = trial_rng(o.seed + 32, t);
      const JetMap phi = small_map(rng, 0.3);
      const JetMap inv = invert(phi);
      worst = std::max({worst, map_distance(compose(phi, inv), id, D), map_distance(compose(inv, phi), id, D)});
    }
    return at_most(worst, 1e-10);
  });
  rec.check("right action is associative (100 cases)", [&] {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      auto rng = trial_rng(o.seed + 33, t);
      MomentumMap mu = lambda;
      for (Jet& c : mu.components) c += random_jet(rng, n, D, 0, D, 0.3);
      const JetMap a = small_map(rng, 0.2), b = small_map(rng, 0.2);
      const MomentumMap lhs = pullback(pullback(mu, a), b), rhs = pullback(mu, compose(a, b));
      worst = std::max(worst, max_coeff(difference(lhs, rhs), D));
    }
    return at_most(worst, 1e-10);
  });
  rec.check("flows are Poisson maps (100 cases, below D-2)", [&] {
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      auto rng = trial_rng(o.seed + 34, t);
      const Jet g = 0.2 * random_generator(rng, n, D);
      const Jet f1 = random_jet(rng, n, D, 1, 3), f2 = random_jet(rng, n, D, 1, 3);
      const JetMap phi = time1_flow(g, pi);
      const Jet lhs = bracket(substitute(f1, phi), substitute(f2, phi), pi);
      const Jet rhs = substitute(bracket(f1, f2, pi), phi);
      worst = std::max({worst, (lhs - rhs).max_abs_coeff_upto(D - 2), poisson_defect(phi, pi, D - 2)});
    }
    return at_most(worst, 1e-9);
  });
  rec.check("pullback by a flow keeps lambda equivariant", [&] {
    auto rng = trial_rng(o.seed + 35, 0);
    const JetMap phi = time1_flow(0.3 * random_generator(rng, n, D), pi);
    return at_most(equivariance_residual(pullback(lambda, phi), pi), 1e-9);
  });
  rec.check("flow of the Casimir is the identity", [&] {
    Jet cas(n, D);
    for (int i = 0; i < n; ++i) cas += Jet::variable(n, D, i) * Jet::variable(n, D, i);
    return at_most(time1_flow(0.3 * cas, pi).displacement_norm({0, 1.0}), 1e-15);
  });
  rec.check("flow of eps x3^2 is a rotation by 2 eps x3 (raw so3)", [&] {
    const double eps = 0.1;
    const PoissonBivector raw = linear_poisson(raw_so3(), D);
    const Jet x1 = Jet::variable(n, D, 0), x2 = Jet::variable(n, D, 1), x3 = Jet::variable(n, D, 2);
    const JetMap phi = time1_flow(eps * x3 * x3, raw);
    // cos and sin of theta = 2 eps x3 as truncated series.
    Jet c = Jet::constant(n, D, 1.0), s(n, D), term = Jet::constant(n, D, 1.0);
    const Jet theta = 2.0 * eps * x3;
    for (int k = 1; k <= D; ++k) {
      term = (1.0 / k) * (term * theta);
      if (k % 4 == 1) s += term;
      if (k % 4 == 2) c -= term;
      if (k % 4 == 3) s -= term;
      if (k % 4 == 0) c += term;
    }
    const double err = std::max({(phi.component(0) - (x1 * c + x2 * s)).max_abs_coeff(),
                                 (phi.component(1) - (x2 * c - x1 * s)).max_abs_coeff(),
                                 (phi.component(2) - x3).max_abs_coeff()});
    return at_most(err, 1e-15);
  });
  rec.check("flow moving the origin is rejected", [&] {
    // A constant (symplectic) entry makes X_{x1} nonzero at the origin.
    PoissonBivector sym(n, D);
    sym.set_entry(0, 1, Jet::constant(n, D, 1.0));
    return throws_code(ErrorCode::FlowNotFixingOrigin, [&] { time1_flow(Jet::variable(n, D, 0), sym); });
  });
  rec.check("shrink accounting: k maps of norm 1/(2ck) stay above R/2", [&] {
    double lowest = INFINITY, law = 0.0;
    for (int k : {1, 2, 4, 8}) {
      RadiusLedger ledger(1.0, 2.0, 0.5);
      JetMap acc = JetMap::identity(n, D);
      for (int j = 0; j < k; ++j) {
        auto rng = trial_rng(o.seed + 36, static_cast<std::uint64_t>(k * 100 + j));
        acc = compose(acc, small_map(rng, 1.0 / (2.0 * ledger.c() * k)), ledger);
      }
      lowest = std::min(lowest, ledger.radius());
      for (const ShrinkEvent& e : ledger.events())
        law = std::max(law, e.to / e.from - (1.0 - ledger.c() * e.norm));
    }
    return Outcome{lowest >= 0.5 && law <= 1e-15, "lowest radius " + num(lowest) + ", law excess " + num(law)};
  });
  const SweepOptions so = sweep_options(o);
  rec.fits("group laws (inverse, product, consequent product)", [&] { return group_law_sweep(so, 2.0); });
  rec.fits("action laws (gamma = 1)", [&] { return action_law_sweep(so, 2.0); });
}

// ---------------------------------------------------------------- estimates

void estimates_suite(Recorder& rec, const VerifyOptions& o) {
  const int n = 3, D = o.degcap;
  const LieAlgebraPtr alg = shared(builtin("so3"));
  const PoissonBivector pi = linear_poisson(*alg, D);
  const SweepOptions so = sweep_options(o);

  rec.check("composition with the identity is an isometry", [&] {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      auto rng = trial_rng(o.seed + 40, t);
      const Jet f = random_jet(rng, n, D, 0, D);
      for (int k = 0; k <= 3; ++k)
        worst = std::max(worst, std::abs(ck_norm(substitute(f, JetMap::identity(n, D)), {k, 0.5}) - ck_norm(f, {k, 0.5})));
    }
    return at_most(worst, 0.0);
  });
  rec.check("linear f with quadratic chi: exact composition, strict bound", [&] {
    auto rng = trial_rng(o.seed + 41, 0);
    const Jet f = random_jet(rng, n, D, 1, 1);
    const JetMap phi = random_small_map(rng, n, D, 2, 0.05, {1, 0.5});
    Jet expected = f;
    for (int i = 0; i < n; ++i) expected += partial(f, i) * phi.displacement()[i];
    const Jet fc = substitute(f, phi);
    const double exact = (fc - expected).max_abs_coeff();
    bool strict = true;
    for (int k = 1; k <= 3; ++k) {
      const double x = phi.displacement_norm({k, 0.5});
      strict = strict && ck_norm(fc, {k, 0.5}) < ck_norm(f, {k, 0.75}) * std::pow(1.0 + x, k);
    }
    return Outcome{exact <= 1e-15 && strict, "composition error " + num(exact)};
  });
  rec.fits("composition estimate", [&] { return composition_sweep(so); });
  rec.fits("difference of compositions", [&] { return composition_difference_sweep(so); });
  rec.fits("flow estimates", [&] { return flow_sweep(so, pi); });
  rec.fits("two-flow difference, coefficients <= 100", [&] { return two_flow_sweep(so, pi); });
}

// ---------------------------------------------------------------- contraction

std::string report_text(const Report& r, const RunConfig& cfg) { return report_to_json(r, cfg).dump(); }

void contraction_suite(Recorder& rec, const VerifyOptions& o) {
  const Schedule sched = derive_schedule(3, 1.0, 2);
  rec.suite().extra["schedule"] = schedule_to_json(sched);
  rec.check("derive_schedule(3, 1, 2): s = 2, A = 21, all conditions", [&] {
    return Outcome{sched.s == 2 && sched.A == 21 && sched.check().all() && sched.epsilon < sched.epsilon_sup,
                   "l " + std::to_string(sched.l) + ", epsilon " + num(sched.epsilon)};
  });
  rec.check("l is minimal for the chosen epsilon", [&] {
    Schedule smaller = sched;
    smaller.l = sched.l - 1;
    return holds(!smaller.check().all());
  });
  rec.check("delta <= 0.7 is infeasible", [&] {
    return throws_code(ErrorCode::InfeasibleParameters, [] { derive_schedule(3, 0.7, 2); });
  });

  RunConfig base;
  base.degcap = o.degcap;
  base.parallel = o.exec == Exec::parallel;
  base.engine.exec = o.exec;

  struct Case {
    std::string generator;
    double t0;
  };
  for (const Case& c : {Case{"x1*x2*x3", 2.0}, Case{"random", 2.0}, Case{"random", 1.2}}) {
    RunConfig cfg = base;
    cfg.generator = c.generator;
    cfg.engine.t0 = c.t0;
    const std::string label = "run " + c.generator + " t0=" + num(c.t0);
    const Scenario sc = generate_scenario(cfg);
    Report rep;
    rec.check(label + " converges", [&] {
      rep = run(sc.problem, cfg.engine);
      return Outcome{rep.converged && rep.final_residual < 1e-9,
                     std::to_string(rep.steps_taken) + " steps, residual " + num(rep.final_residual)};
    });
    if (!rep.converged) continue;
    rec.check(label + " schedule matches closed forms", [&] {
      double worst = 0.0;
      for (const StepRecord& s : rep.steps) worst = std::max(worst, s.schedule_error);
      return at_most(worst, 1e-12);
    });
    rec.check(label + " psi reproduces every iterate", [&] {
      double worst = 0.0;
      for (const StepRecord& s : rep.steps) worst = std::max(worst, s.psi_consistency);
      return at_most(worst, 1e-9);
    });
    rec.check(label + " radii are monotone and above R/2", [&] {
      bool ok = rep.final_radius >= cfg.engine.R / 2.0;
      for (std::size_t i = 0; i < rep.steps.size(); ++i) {
        const StepRecord& s = rep.steps[i];
        ok = ok && s.rho <= s.r && s.r >= cfg.engine.R / 2.0 && s.radius >= cfg.engine.R / 2.0;
        if (i + 1 < rep.steps.size()) ok = ok && rep.steps[i + 1].r <= s.rho;
      }
      return Outcome{ok, "final ledger radius " + num(rep.final_radius)};
    });
    rec.check(label + " psi preserves the Poisson structure", [&] {
      return at_most(std::max(rep.psi_poisson_defect, rep.psi_roundtrip), 1e-9);
    });
    if (c.t0 < 1.5)
      rec.check(label + " exercises active smoothing", [&] {
        bool active = false;
        for (const StepRecord& s : rep.steps) active = active || s.smoothing_active;
        return holds(active);
      });
  }

  rec.check("driver residual is the plain norm of f_d - lambda", [&] {
    RunConfig cfg = base;
    cfg.engine.t0 = 1.2;
    const Scenario sc = generate_scenario(cfg);
    const Schedule s = schedule_for(sc.problem, cfg.engine);
    IterationState st = initial_state(sc.problem, s);
    double worst = 0.0;
    for (int d = 0; d < 4; ++d) {
      const auto diff = difference(st.f, sc.problem.lambda);
      const double direct = ck_norm(std::span<const Jet>(diff), {s.l_practical, st.r});
      const StepRecord r = step(st, sc.problem, s, cfg.engine);
      worst = std::max(worst, std::abs(r.res_l - direct) / std::max(direct, 1e-300));
    }
    return at_most(worst, 0.0);
  });
  rec.check("one-step contraction is quadratic (slope >= 1.9)", [&] {
    RunConfig cfg = base;
    cfg.epsilon = 0.0;
    const Scenario sc = generate_scenario(cfg);
    const ContractionReport cr = quadratic_contraction_check(sc.problem, 20, o.seed + 50, o.exec);
    rec.suite().extra["contraction"] = {{"min_slope", cr.min_slope}, {"max_constant", cr.max_constant}};
    return at_least(cr.min_slope, 1.9);
  });
  rec.check("epsilon = 0 gives mu = lambda and converges immediately", [&] {
    RunConfig cfg = base;
    cfg.epsilon = 0.0;
    const Scenario sc = generate_scenario(cfg);
    const Report r = run(sc.problem, cfg.engine);
    const double gap = max_coeff(difference(sc.problem.mu, sc.problem.lambda), cfg.degcap);
    return Outcome{gap == 0.0 && sc.psi_true.is_identity() && r.converged && r.steps_taken == 0,
                   std::to_string(r.steps_taken) + " steps"};
  });
  rec.check("admission thresholds reject large perturbations", [&] {
    RunConfig cfg = base;
    cfg.engine.beta = 1e-6;
    const Scenario sc = generate_scenario(cfg);
    return throws_code(ErrorCode::SmallnessViolated, [&] { run(sc.problem, cfg.engine); });
  });
  rec.check("non-equivariant input is rejected", [&] {
    Scenario sc = generate_scenario(base);
    sc.problem.mu.components[0] = 2.0 * Jet::variable(3, base.degcap, 0);
    return throws_code(ErrorCode::NotMomentumMap, [&] { run(sc.problem, base.engine); });
  });
  rec.check("x1*x2*x3 ground truth lies in (0, 0.1)", [&] {
    RunConfig cfg = base;
    cfg.generator = "x1*x2*x3";
    const double g = generate_scenario(cfg).ground_truth;
    return Outcome{g > 0.0 && g < 0.1, "||mu - lambda||_{3,1} = " + num(g)};
  });
  rec.check("fixed seed reproduces byte-identical reports", [&] {
    RunConfig cfg = base;
    const std::string a = report_text(run(generate_scenario(cfg).problem, cfg.engine), cfg);
    const std::string b = report_text(run(generate_scenario(cfg).problem, cfg.engine), cfg);
    RunConfig other = cfg;
    other.parallel = !cfg.parallel;
    other.engine.exec = other.parallel ? Exec::parallel : Exec::serial;
    const std::string c = report_text(run(generate_scenario(other).problem, other.engine), cfg);
    return Outcome{a == b && a == c, "serial and parallel reports compared"};
  });
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra", "jetspace", "poisson", "ce",
                                              "group",   "estimates", "contraction"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opts) {
  using Fn = void (*)(Recorder&, const VerifyOptions&);
  static const std::vector<std::pair<std::string, Fn>> table{
      {"algebra", algebra_suite}, {"jetspace", jetspace_suite}, {"poisson", poisson_suite},
      {"ce", ce_suite},           {"group", group_suite},       {"estimates", estimates_suite},
      {"contraction", contraction_suite}};
  for (const auto& [n, fn] : table) {
    if (n != name) continue;
    SuiteResult s;
    s.name = name;
    Recorder rec(s);
    const auto t0 = std::chrono::steady_clock::now();
    fn(rec, opts);
    s.seconds = seconds_since(t0);
    return s;
  }
  throw Error(ErrorCode::BadInput, "unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_suites(const std::string& name, const VerifyOptions& opts) {
  if (name != "all") return {run_suite(name, opts)};
  std::vector<SuiteResult> out;
  for (const std::string& n : suite_names()) out.push_back(run_suite(n, opts));
  return out;
}

json suite_to_json(const SuiteResult& s) {
  json checks = json::array();
  for (const Check& c : s.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json fits = json::array();
  for (const FitResult& f : s.fits) fits.push_back(fit_to_json(f));
  return {{"suite", s.name}, {"passed", s.passed()}, {"failures", s.failures()}, {"checks", checks},
          {"fits", fits},    {"extra", s.extra},     {"seconds", s.seconds}};
}

}  // namespace nmjet
