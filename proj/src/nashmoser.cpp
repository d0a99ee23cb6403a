#include "nmjet/nashmoser.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nmjet/errors.hpp"
#include "nmjet/estimates.hpp"

namespace nmjet {

Schedule::Check Schedule::check() const {
  Check c;
  const double lm1 = static_cast<double>(l - 1);
  c.a_large = A > 8 * s + 4;
  c.eps_a = epsilon > 0.0 && epsilon < 1.0 && -(1.0 - epsilon) + A * epsilon < -0.8;
  c.eps_delta = -delta * (1.0 - epsilon) < -0.7;
  c.l_large = l > 6 * s + 1;
  c.l_eps = (3.0 * s + 3.0) / lm1 * (1.0 + delta + tau) < epsilon;
  c.l_a = -1.6 + A * s / lm1 < -1.5;
  return c;
}

Schedule derive_schedule(int n, double delta, int tau) {
  if (n < 1) throw Error(ErrorCode::InfeasibleParameters, "dimension must be positive");
  if (tau < 0) throw Error(ErrorCode::InfeasibleParameters, "tau must be nonnegative");
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw Error(ErrorCode::InfeasibleParameters, "delta must be positive");
  Schedule sc;
  sc.n = n;
  sc.delta = delta;
  sc.tau = tau;
  sc.s = n / 2 + 1;
  sc.A = 8 * sc.s + 5;
  sc.epsilon_sup = std::min({0.2 / (sc.A + 1), 1.0 - 0.7 / delta, 1.0});
  if (!(sc.epsilon_sup > 0.0)) {
    std::ostringstream os;
    os << "no epsilon satisfies -delta(1-eps) < -7/10 for delta = " << delta;
    throw Error(ErrorCode::InfeasibleParameters, os.str());
  }
  const double w = (3.0 * sc.s + 3.0) * (1.0 + delta + tau);
  // l - 1 must exceed each of these; the middle one closes the gap below epsilon_sup.
  const double bound = std::max({6.0 * sc.s, w / sc.epsilon_sup, 10.0 * sc.A * sc.s});
  long lm1 = static_cast<long>(std::floor(bound + 1e-9)) + 1;
  for (;; ++lm1) {
    sc.l = lm1 + 1;
    sc.epsilon = 0.5 * (w / static_cast<double>(lm1) + sc.epsilon_sup);
    if (sc.check().all()) break;
  }
  return sc;
}

double closed_form_t(double t0, int d) { return std::pow(t0, std::pow(1.5, d)); }
double closed_form_r(double R, int d) { return (1.0 + 1.0 / (d + 1)) * R / 2.0; }
double closed_form_rho(double R, int d) {
  return closed_form_r(R, d) * (1.0 - 0.5 / ((d + 2.0) * (d + 2.0)));
}

namespace {

double rel_dev(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

double residual(const MomentumMap& f, const MomentumMap& lambda, NormParams p) {
  const auto diff = difference(f, lambda);
  return ck_norm(std::span<const Jet>(diff), p);
}

struct Assessment {
  StepRecord rec;
  JetMap phi_hat{1, 1};
};

Assessment assess(const IterationState& st, const Problem& p, const Schedule& sc) {
  Assessment a;
  StepRecord& rec = a.rec;
  const int l = sc.l_practical;
  const int D = p.hs.degcap();
  rec.d = st.d;
  rec.t = st.t;
  rec.r = st.r;
  rec.rho = st.rho;
  rec.schedule_error = std::max({rel_dev(st.t, closed_form_t(sc.t0, st.d)),
                                 rel_dev(st.r, closed_form_r(sc.R, st.d)),
                                 rel_dev(st.rho, closed_form_rho(sc.R, st.d))});
  const auto diff = difference(st.f, p.lambda);
  rec.res_l = ck_norm(std::span<const Jet>(diff), {l, st.r});
  rec.res_hi = ck_norm(std::span<const Jet>(diff), {2 * l - 1, st.r});
  rec.equiv_drift = equivariance_residual(st.f, p.pi);
  const MomentumMap reproduced = pullback(p.mu, st.psi);
  for (std::size_t i = 0; i < reproduced.components.size(); ++i)
    rec.psi_consistency = std::max(
        rec.psi_consistency, (reproduced.components[i] - st.f.components[i]).max_abs_coeff());
  rec.radius = st.ledger.radius();

  const Jet h = p.hs.correction(diff);
  rec.smoothing_active = std::isfinite(st.t) && std::floor(st.t) < D;
  rec.smoothing_degree = rec.smoothing_active ? static_cast<int>(std::floor(st.t)) : D;
  const Jet g = rec.smoothing_active ? smooth(h, st.t) : h;
  a.phi_hat = time1_flow(g, p.pi);

  const double tA = std::pow(st.t, sc.A);
  rec.monitors[0] = {"chi_hat", a.phi_hat.displacement_norm({l + sc.s, st.rho}), 1.0 / std::sqrt(st.t)};
  rec.monitors[1] = {"f_l", rec.res_l, 0.0};
  rec.monitors[2] = {"f_hi", rec.res_hi, tA};
  rec.monitors[3] = {"zeta_hi", rec.res_hi, tA};
  rec.monitors[4] = {"zeta_l", rec.res_l, 1.0 / st.t};
  return a;
}

void set_monitor_c(StepRecord& rec, double C) {
  rec.monitors[1].bound = C * (rec.d + 1.0) / (rec.d + 2.0);
}

void enforce(const StepRecord& rec, const NashMoserConfig& cfg) {
  if (!cfg.strict_monitors) return;
  for (const Monitor& m : rec.monitors)
    if (!m.ok()) {
      std::ostringstream os;
      os << "monitor " << m.name << " at step " << rec.d << ": " << m.value << " >= " << m.bound;
      throw Error(ErrorCode::MonitorViolated, os.str());
    }
}

void advance(IterationState& st, const JetMap& phi_hat) {
  st.f = pullback(st.f, phi_hat, st.ledger);
  st.psi = compose(st.psi, phi_hat);
  const JetMap inv = invert(phi_hat, st.ledger);
  st.psi_inv = compose(inv, st.psi_inv);
  const int d = st.d;
  st.t = std::pow(st.t, 1.5);
  st.r = st.r * (1.0 - 1.0 / ((d + 2.0) * (d + 2.0)));
  st.rho = st.r * (1.0 - 0.5 / ((d + 3.0) * (d + 3.0)));
  st.d = d + 1;
}

}  // namespace

Schedule schedule_for(const Problem& p, const NashMoserConfig& cfg) {
  if (!(cfg.R > 0.0 && cfg.R <= 1.0)) throw Error(ErrorCode::BadInput, "R must lie in (0, 1]");
  if (!(cfg.t0 > 1.0)) throw Error(ErrorCode::BadInput, "t0 must exceed 1");
  if (cfg.l_practical < 1) throw Error(ErrorCode::BadInput, "l_practical must be positive");
  if (cfg.max_steps < 0) throw Error(ErrorCode::BadInput, "max_steps must be nonnegative");
  Schedule sc = derive_schedule(p.pi.dim(), cfg.delta, cfg.tau);
  sc.l_practical = cfg.l_practical;
  sc.t0 = cfg.t0;
  sc.R = cfg.R;
  sc.c = cfg.c;
  sc.max_steps = cfg.max_steps;
  sc.target_residual = cfg.target_residual;
  return sc;
}

IterationState initial_state(const Problem& p, const Schedule& sc) {
  const int n = p.pi.dim();
  const int D = p.hs.degcap();
  return IterationState{0,
                        p.mu,
                        JetMap::identity(n, D),
                        JetMap::identity(n, D),
                        sc.t0,
                        closed_form_r(sc.R, 0),
                        closed_form_rho(sc.R, 0),
                        RadiusLedger(sc.R, sc.c, sc.R / 2.0)};
}

StepRecord step(IterationState& state, const Problem& p, const Schedule& sc, const NashMoserConfig& cfg) {
  Assessment a = assess(state, p, sc);
  set_monitor_c(a.rec, cfg.monitor_C);
  enforce(a.rec, cfg);
  advance(state, a.phi_hat);
  a.rec.radius = state.ledger.radius();
  return a.rec;
}

Problem make_problem(LieAlgebraPtr algebra, int degcap, Exec exec) {
  PoissonBivector pi = linear_poisson(*algebra, degcap);
  MomentumMap lambda = identity_momentum_map(algebra, degcap);
  HomotopySet hs = HomotopySet::build(lambda, pi, degcap, exec);
  MomentumMap mu = lambda;
  return Problem{std::move(pi), std::move(lambda), std::move(mu), std::move(hs)};
}

Report run(const Problem& p, const NashMoserConfig& cfg) {
  if (p.mu.size() != p.lambda.size())
    throw Error(ErrorCode::DimensionMismatch, "mu and lambda have different sizes");
  require_momentum_map(p.mu, p.pi, cfg.equivariance_tol);
  Report rep;
  rep.schedule = schedule_for(p, cfg);
  const Schedule& sc = rep.schedule;
  const int l = sc.l_practical;
  const int D = p.hs.degcap();

  rep.initial_res_l = residual(p.mu, p.lambda, {l, sc.R});
  rep.initial_res_hi = residual(p.mu, p.lambda, {2 * l - 1, sc.R});
  if (rep.initial_res_hi > cfg.alpha || rep.initial_res_l > cfg.beta) {
    std::ostringstream os;
    os << "admission thresholds failed: ||mu-lambda||_{" << 2 * l - 1 << ",R} = " << rep.initial_res_hi
       << " (alpha " << cfg.alpha << "), ||mu-lambda||_{" << l << ",R} = " << rep.initial_res_l
       << " (beta " << cfg.beta << ")";
    throw Error(ErrorCode::SmallnessViolated, os.str());
  }

  IterationState st = initial_state(p, sc);
  int stagnant = 0;
  double prev = INFINITY;
  while (true) {
    Assessment a = assess(st, p, sc);
    set_monitor_c(a.rec, cfg.monitor_C);
    if (a.rec.res_l < sc.target_residual) {
      rep.converged = true;
      rep.steps.push_back(a.rec);
      break;
    }
    if (st.d >= sc.max_steps) {
      rep.steps.push_back(a.rec);
      break;
    }
    if (!a.rec.smoothing_active) {
      stagnant = a.rec.res_l >= prev ? stagnant + 1 : 0;
      if (stagnant >= cfg.stagnation_steps) {
        std::ostringstream os;
        os << "residual did not decrease for " << stagnant << " consecutive steps (now " << a.rec.res_l
           << " at step " << st.d << ")";
        throw Error(ErrorCode::NoConvergence, os.str());
      }
    }
    prev = a.rec.res_l;
    enforce(a.rec, cfg);
    advance(st, a.phi_hat);
    a.rec.radius = st.ledger.radius();
    rep.steps.push_back(a.rec);
  }

  rep.steps_taken = st.d;
  rep.psi_inv = st.psi_inv;
  rep.psi = invert(st.psi_inv);
  rep.psi_roundtrip = map_distance(rep.psi, st.psi, D);
  rep.final_residual = residual(pullback(p.mu, rep.psi), p.lambda, {l, sc.R / 2.0});
  rep.final_radius = st.ledger.radius();
  rep.psi_poisson_defect = poisson_defect(rep.psi, p.pi, D);
  rep.equiv_drift = equivariance_residual(st.f, p.pi);
  rep.shrink_log = st.ledger.events();
  return rep;
}

ContractionReport quadratic_contraction_check(const Problem& p, int trials, std::uint64_t seed, Exec exec) {
  ContractionReport rep;
  const int s = derivative_shift(p.pi.dim());
  const std::vector<double> eps{1e-1, 1e-2, 1e-3};
  rep.trials.resize(static_cast<std::size_t>(std::max(0, trials)));
  for_each_index(rep.trials.size(), exec, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    const Jet g = random_generator(rng, p.pi.dim(), p.hs.degcap());
    ContractionTrial& tr = rep.trials[t];
    for (double e : eps) {
      const MomentumMap mu = pullback(p.lambda, time1_flow(e * g, p.pi));
      const Jet h = p.hs.correction(difference(mu, p.lambda));
      const MomentumMap next = pullback(mu, time1_flow(h, p.pi));
      tr.eps.push_back(e);
      tr.before.push_back(residual(mu, p.lambda, {rep.k + s + 2, rep.r * (1.0 + rep.eta)}));
      tr.after.push_back(residual(next, p.lambda, {rep.k, rep.r}));
    }
    // least squares slope of log(after) on log(eps)
    double mx = 0, my = 0;
    const double m = static_cast<double>(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
      mx += std::log(tr.eps[i]) / m;
      my += std::log(std::max(tr.after[i], 1e-300)) / m;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
      const double dx = std::log(tr.eps[i]) - mx;
      sxy += dx * (std::log(std::max(tr.after[i], 1e-300)) - my);
      sxx += dx * dx;
    }
    tr.slope = sxy / sxx;
  });
  rep.min_slope = INFINITY;
  for (const auto& tr : rep.trials) {
    rep.min_slope = std::min(rep.min_slope, tr.slope);
    for (std::size_t i = 0; i < tr.eps.size(); ++i)
      if (tr.before[i] > 0.0)
        rep.max_constant = std::max(rep.max_constant, tr.after[i] / (tr.before[i] * tr.before[i]));
  }
  if (rep.trials.empty()) rep.min_slope = 0.0;
  return rep;
}

}  // namespace nmjet
