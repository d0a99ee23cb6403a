// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// A JSON record of every measured number is written to acceptance.json.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "nmjet/ce_complex.hpp"
#include "nmjet/estimates.hpp"
#include "nmjet/io.hpp"
#include "nmjet/jetgroup.hpp"
#include "nmjet/nashmoser.hpp"
#include "nmjet/scenario.hpp"

using namespace nmjet;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
  json data = json::object();
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

constexpr int kDegcap = 6;

LieAlgebraPtr so3() { return std::make_shared<const LieAlgebra>(builtin("so3")); }

// Cohomology kernel: delta o delta and the homotopy identities per block.
Verdict ac1(double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const Problem p = make_problem(so3(), kDegcap);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double dd = 0.0, hom = 0.0;
  json blocks = json::array();
  for (const DegreeBlock& b : p.hs.blocks()) {
    const auto& g = b.diagnostics;
    dd = std::max({dd, g.d1d0_residual, g.d2d1_residual});
    hom = std::max({hom, g.homotopy_c1_residual, g.homotopy_c2_residual});
  }
  const bool ok = dd <= 1e-12 && hom <= 1e-10 && seconds < 10.0;
  return {ok, "max |dd| " + num(dd) + " (<= 1e-12), max homotopy residual " + num(hom) + " (<= 1e-10), build " +
                  num(seconds) + " s (< 10 s)",
          {{"dd", dd}, {"homotopy", hom}, {"build_seconds", seconds}}};
}

Verdict ac2() {
  const Problem p = make_problem(so3(), kDegcap);
  bool ok = true;
  json ranks = json::array();
  for (const DegreeBlock& b : p.hs.blocks()) {
    const auto& g = b.diagnostics;
    ok = ok && g.h1 == 0 && g.h2 == 0 && g.rank_d0 + g.rank_d1 == static_cast<int>(g.dim_c1) &&
         g.rank_d1 + g.rank_d2 == static_cast<int>(g.dim_c2);
    ranks.push_back({{"degree", b.degree}, {"dim_c1", g.dim_c1}, {"rank_d0", g.rank_d0}, {"rank_d1", g.rank_d1},
                     {"dim_c2", g.dim_c2}, {"rank_d2", g.rank_d2}, {"H1", g.h1}, {"H2", g.h2}});
  }
  return {ok, "H1 = H2 = 0 in all " + std::to_string(p.hs.blocks().size()) + " blocks: " + (ok ? "yes" : "no"),
          {{"blocks", ranks}}};
}

// Explicit constant n(n-1) in ||delta(mu - lambda)||_{k,r} <= n(n-1) ||Pi|| ||mu - lambda||^2_{k+1,r}.
Verdict ac3() {
  const LieAlgebraPtr alg = so3();
  const PoissonBivector pi = linear_poisson(*alg, kDegcap);
  const MomentumMap lambda = identity_momentum_map(alg, kDegcap);
  const int m = alg->dim();
  const double constant = m * (m - 1);
  int violations[3][2] = {};
  double worst[3][2] = {};
  const double radii[2] = {0.5, 1.0};
  for (int t = 0; t < 200; ++t) {
    auto rng = trial_rng(2024, static_cast<std::uint64_t>(t));
    std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e-1));
    const Jet g = std::exp(u(rng)) * random_generator(rng, 3, kDegcap);
    const MomentumMap mu = pullback(lambda, time1_flow(g, pi));
    const auto f = difference(mu, lambda);
    const Cochain df = delta(Cochain::from_components(alg, f), lambda, pi);
    for (int k = 0; k <= 2; ++k)
      for (int ri = 0; ri < 2; ++ri) {
        const double fn = ck_norm(std::span<const Jet>(f), {k + 1, radii[ri]});
        const double rhs = bivector_norm(pi, {k, radii[ri]}) * fn * fn;
        const double ratio = df.norm({k, radii[ri]}) / rhs;
        worst[k][ri] = std::max(worst[k][ri], ratio);
        if (ratio > constant) ++violations[k][ri];
      }
  }
  int total = 0;
  std::string detail;
  json cells = json::array();
  for (int k = 0; k <= 2; ++k)
    for (int ri = 0; ri < 2; ++ri) {
      total += violations[k][ri];
      detail += " k=" + std::to_string(k) + ",r=" + num(radii[ri]) + ": ratio " + num(worst[k][ri]) + " (" +
                std::to_string(violations[k][ri]) + " viol);";
      cells.push_back({{"k", k}, {"r", radii[ri]}, {"max_ratio", worst[k][ri]}, {"violations", violations[k][ri]}});
    }
  return {total == 0, std::to_string(total) + " violations of C = " + num(constant) + " over 200 pairs;" + detail,
          {{"cells", cells}, {"constant", constant}}};
}

Verdict ac4(double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const Problem p = make_problem(so3(), kDegcap);
  const ContractionReport r = quadratic_contraction_check(p, 20, 99);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {r.min_slope >= 1.9 && seconds < 60.0,
          "min slope " + num(r.min_slope) + " (>= 1.9) over " + std::to_string(r.trials.size()) +
              " trials, max constant " + num(r.max_constant) + ", " + num(seconds) + " s (< 60 s)",
          {{"min_slope", r.min_slope}, {"max_constant", r.max_constant}, {"seconds", seconds}}};
}

Verdict ac5(double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst_res = 0.0, worst_defect = 0.0, min_radius = INFINITY;
  int max_steps = 0;
  json runs = json::array();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RunConfig cfg;
    cfg.seed = seed;
    cfg.epsilon = 1e-2;
    const Scenario sc = generate_scenario(cfg);
    const Report r = run(sc.problem, cfg.engine);
    // Recompute the residual from psi alone.
    const auto diff = difference(pullback(sc.problem.mu, r.psi), sc.problem.lambda);
    const double res = ck_norm(std::span<const Jet>(diff), {3, cfg.engine.R / 2.0});
    const double defect = poisson_defect(r.psi, sc.problem.pi, cfg.degcap);
    ok = ok && r.converged && res < 1e-9 && r.steps_taken <= 6 && r.final_radius >= cfg.engine.R / 2.0 &&
         defect <= 1e-9;
    worst_res = std::max(worst_res, res);
    worst_defect = std::max(worst_defect, defect);
    min_radius = std::min(min_radius, r.final_radius);
    max_steps = std::max(max_steps, r.steps_taken);
    runs.push_back({{"seed", seed}, {"steps", r.steps_taken}, {"residual", res}, {"radius", r.final_radius},
                    {"poisson_defect", defect}, {"ground_truth", sc.ground_truth}});
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ok = ok && seconds < 300.0;
  return {ok, "20 seeds: max residual " + num(worst_res) + " (< 1e-9), max steps " + std::to_string(max_steps) +
                  " (<= 6), min radius " + num(min_radius) + " (>= 0.5), max Poisson defect " + num(worst_defect) +
                  " (<= 1e-9), " + num(seconds) + " s",
          {{"runs", runs}}};
}

Verdict ac6() {
  const Schedule s = derive_schedule(3, 1.0, 2);
  const double eps = s.epsilon, l1 = static_cast<double>(s.l - 1);
  const bool conditions = s.A > 8 * s.s + 4 && -(1.0 - eps) + s.A * eps < -0.8 && -s.delta * (1.0 - eps) < -0.7 &&
                          s.l > 6 * s.s + 1 && (3.0 * s.s + 3.0) * (1.0 + s.delta + s.tau) / l1 < eps &&
                          -1.6 + s.A * s.s / l1 < -1.5;
  double worst = 0.0;
  for (double t0 : {2.0, 1.2}) {
    RunConfig cfg;
    cfg.engine.t0 = t0;
    const Report r = run(generate_scenario(cfg).problem, cfg.engine);
    for (const StepRecord& st : r.steps) {
      const double R = cfg.engine.R;
      worst = std::max({worst, std::abs(st.t / closed_form_t(t0, st.d) - 1.0),
                        std::abs(st.r / closed_form_r(R, st.d) - 1.0), std::abs(st.rho / closed_form_rho(R, st.d) - 1.0)});
    }
  }
  const bool ok = s.s == 2 && s.A == 21 && conditions && s.check().all() && worst <= 1e-13;
  return {ok, "s=" + std::to_string(s.s) + ", A=" + std::to_string(s.A) + ", epsilon=" + num(s.epsilon) +
                  ", l=" + std::to_string(s.l) + ", conditions " + (conditions ? "hold" : "fail") +
                  ", closed-form deviation " + num(worst),
          {{"schedule", schedule_to_json(s)}, {"closed_form_deviation", worst}}};
}

Verdict ac7() {
  SweepOptions o;
  o.trials = 200;
  o.seed = 7;
  std::vector<FitResult> fits;
  SweepOptions o8 = o;
  o8.degcap = 8;
  for (double r : {1.0, 0.5})
    for (FitResult f : smoothing_sweep(o8, r)) {
      f.params += ",D=8";
      f.threshold = 10.0;
      fits.push_back(f);
    }
  for (const FitResult& f : smoothing_sweep(o, 1.0)) fits.push_back(f);
  SweepOptions o500 = o;
  o500.trials = 500;
  FitResult interp = interpolation_sweep(o500, 4, 2, 0, 0.5);
  interp.threshold = 50.0;
  fits.push_back(interp);
  fits.push_back(interpolation_sweep(o, 3, 1, 0, 1.0));
  for (const FitResult& f : group_law_sweep(o, 2.0)) fits.push_back(f);
  for (const FitResult& f : action_law_sweep(o, 2.0)) fits.push_back(f);
  bool ok = true;
  std::size_t unbounded = 0;
  double worst = 0.0;
  json rec = json::array();
  for (const FitResult& f : fits) {
    ok = ok && f.ok();
    unbounded += f.unbounded;
    worst = std::max(worst, f.constant);
    rec.push_back(fit_to_json(f));
  }
  return {ok, std::to_string(fits.size()) + " fitted constants, max " + num(worst) + ", unbounded " +
                  std::to_string(unbounded),
          {{"fits", rec}}};
}

Verdict ac8() {
  const LieAlgebraPtr alg = so3();
  const PoissonBivector pi = linear_poisson(*alg, kDegcap);
  const MomentumMap lambda = identity_momentum_map(alg, kDegcap);
  const int floor = kDegcap - 2;
  const JetMap id = JetMap::identity(3, kDegcap);
  double inv = 0.0, act = 0.0, poisson = 0.0;
  for (int t = 0; t < 100; ++t) {
    auto rng = trial_rng(808, static_cast<std::uint64_t>(t));
    const JetMap phi = random_small_map(rng, 3, kDegcap, 1, 0.3, {1, 1.0});
    inv = std::max({inv, map_distance(compose(phi, invert(phi)), id, floor), map_distance(compose(invert(phi), phi), id, floor)});

    const JetMap a = random_small_map(rng, 3, kDegcap, 1, 0.2, {1, 1.0});
    const JetMap b = random_small_map(rng, 3, kDegcap, 1, 0.2, {1, 1.0});
    MomentumMap mu = lambda;
    for (Jet& c : mu.components) c += random_jet(rng, 3, kDegcap, 0, kDegcap, 0.3);
    const auto diff = difference(pullback(pullback(mu, a), b), pullback(mu, compose(a, b)));
    for (const Jet& d : diff) act = std::max(act, d.max_abs_coeff_upto(floor));

    const JetMap flow = time1_flow(0.3 * random_generator(rng, 3, kDegcap), pi);
    const Jet f1 = random_jet(rng, 3, kDegcap, 1, 3), f2 = random_jet(rng, 3, kDegcap, 1, 3);
    const Jet lhs = bracket(substitute(f1, flow), substitute(f2, flow), pi);
    poisson = std::max({poisson, (lhs - substitute(bracket(f1, f2, pi), flow)).max_abs_coeff_upto(floor),
                        poisson_defect(flow, pi, floor)});
  }
  const bool ok = inv <= 1e-9 && act <= 1e-9 && poisson <= 1e-9;
  return {ok, "inverse " + num(inv) + ", action associativity " + num(act) + ", flow Poisson " + num(poisson) +
                  " (all <= 1e-9 below degree " + std::to_string(floor) + ")",
          {{"inverse", inv}, {"action", act}, {"flow_poisson", poisson}}};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "acceptance.json";
  json record = json::object();
  bool all = true;
  const auto report = [&](const std::string& id, const std::string& title, const std::function<Verdict()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && v.ok;
    std::cout << id << " " << (v.ok ? "PASS" : "FAIL") << " [" << num(s) << " s] " << title << ": " << v.detail
              << std::endl;
    record[id] = {{"passed", v.ok}, {"title", title}, {"detail", v.detail}, {"seconds", s}, {"data", v.data}};
  };
  double s1 = 0, s4 = 0, s5 = 0;
  report("AC1", "cohomology kernel", [&] { return ac1(s1); });
  report("AC2", "Whitehead vanishing", ac2);
  report("AC3", "explicit-constant quadratic error", ac3);
  report("AC4", "one-step quadratic contraction", [&] { return ac4(s4); });
  report("AC5", "end-to-end rigidity", [&] { return ac5(s5); });
  report("AC6", "schedule fidelity", ac6);
  report("AC7", "SCI axioms", ac7);
  report("AC8", "group exactness", ac8);
  write_text_file(out, record.dump(2) + "\n");
  std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
