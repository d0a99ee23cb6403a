#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nmjet/ce_complex.hpp"
#include "nmjet/exec.hpp"
#include "nmjet/jetgroup.hpp"
#include "nmjet/poisson.hpp"

namespace nmjet {

/// Parameters of the iteration. The theoretical fields (s, A, epsilon, l, delta,
/// tau) satisfy the convergence conditions exactly; runs use l_practical.
struct Schedule {
  int n = 3;
  int s = 2;
  int A = 21;
  double epsilon = 0.0;
  double epsilon_sup = 0.0;  // open upper bound on epsilon
  long l = 0;
  int l_practical = 3;
  double delta = 1.0;
  int tau = 2;
  double t0 = 2.0;
  double R = 1.0;
  double c = 2.0;
  int max_steps = 12;
  double target_residual = 1e-9;

  /// Each condition re-evaluated from the stored numbers.
  struct Check {
    bool a_large = false;        // A > 8s + 4
    bool eps_a = false;          // -(1-eps) + A eps < -4/5
    bool eps_delta = false;      // -delta (1-eps) < -7/10
    bool l_large = false;        // l > 6s + 1
    bool l_eps = false;          // (3s+3)(1+delta+tau)/(l-1) < eps
    bool l_a = false;            // -8/5 + A s/(l-1) < -3/2
    bool all() const { return a_large && eps_a && eps_delta && l_large && l_eps && l_a; }
  };
  Check check() const;
};

/// Minimal integer l and a midpoint epsilon satisfying every condition.
/// InfeasibleParameters when no epsilon exists (delta <= 0.7) or inputs are invalid.
Schedule derive_schedule(int n, double delta, int tau);

/// t_d = t0^{(3/2)^d}, r_d = (1 + 1/(d+1)) R/2, rho_d = r_d (1 - 1/(2 (d+2)^2)).
double closed_form_t(double t0, int d);
double closed_form_r(double R, int d);
double closed_form_rho(double R, int d);

struct NashMoserConfig {
  int degcap = 6;
  double R = 1.0;
  double t0 = 2.0;
  int l_practical = 3;
  int max_steps = 12;
  double target_residual = 1e-9;
  double c = 2.0;
  double delta = 1.0;
  int tau = 2;
  double monitor_C = 1.0;     // constant of monitor (2)
  bool strict_monitors = false;
  double alpha = 10.0;        // admission ||mu - lambda||_{2l-1,R} <= alpha
  double beta = 0.5;          // admission ||mu - lambda||_{l,R} <= beta
  double equivariance_tol = 1e-9;
  int stagnation_steps = 3;
  Exec exec = Exec::serial;
};

struct Monitor {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool ok() const noexcept { return value < bound; }
};

struct StepRecord {
  int d = 0;
  double t = 0.0, r = 0.0, rho = 0.0;
  bool smoothing_active = false;
  int smoothing_degree = 0;      // floor(t_d), the kept degree when active
  double res_l = 0.0;            // ||f_d - lambda||_{l, r_d}
  double res_hi = 0.0;           // ||f_d - lambda||_{2l-1, r_d}
  double equiv_drift = 0.0;      // equivariance residual of f_d
  double radius = 0.0;           // ledger radius after the step
  double psi_consistency = 0.0;  // max coeff of mu o psi_d - f_d
  double schedule_error = 0.0;   // relative deviation of t, r, rho from closed forms
  std::array<Monitor, 5> monitors;
};

struct IterationState {
  int d = 0;
  MomentumMap f;
  JetMap psi;
  JetMap psi_inv;
  double t = 0.0, r = 0.0, rho = 0.0;
  RadiusLedger ledger;
};

/// Everything the iteration reuses: the frozen reference data.
struct Problem {
  PoissonBivector pi;
  MomentumMap lambda;
  MomentumMap mu;
  HomotopySet hs;
};

/// Theoretical schedule for the problem dimension with the run parameters of cfg.
/// BadInput for R outside (0,1], t0 <= 1, l_practical < 1 or max_steps < 0.
Schedule schedule_for(const Problem& p, const NashMoserConfig& cfg);

/// Initial state for mu.
IterationState initial_state(const Problem& p, const Schedule& sched);

/// One Newton step f_{d+1} = f_d o flow(S(t_d) h_0(f_d - lambda)). Returns the
/// record of step d (monitors measured on the input state) and advances state.
/// MonitorViolated under strict monitors; RadiusExhausted, SeriesNotConverged propagate.
StepRecord step(IterationState& state, const Problem& p, const Schedule& sched, const NashMoserConfig& cfg);

struct Report {
  Schedule schedule;
  std::vector<StepRecord> steps;
  bool converged = false;
  int steps_taken = 0;
  double initial_res_l = 0.0;
  double initial_res_hi = 0.0;
  double final_residual = 0.0;       // ||mu o psi - lambda||_{l, R/2}
  double final_radius = 0.0;
  double psi_poisson_defect = 0.0;   // psi preserves Pi
  double psi_roundtrip = 0.0;        // invert(psi_inv) vs the direct product
  double equiv_drift = 0.0;
  JetMap psi{1, 1};
  JetMap psi_inv{1, 1};
  std::vector<ShrinkEvent> shrink_log;
};

/// Validates mu (NotMomentumMap, SmallnessViolated), then iterates until the
/// residual drops below the target or max_steps. NoConvergence after
/// `stagnation_steps` consecutive non-decreasing residuals with smoothing off.
Report run(const Problem& p, const NashMoserConfig& cfg);

/// Builds pi, lambda and the homotopy operators for an algebra; mu is set to lambda.
Problem make_problem(LieAlgebraPtr algebra, int degcap, Exec exec = Exec::serial);

struct ContractionTrial {
  std::vector<double> eps;
  std::vector<double> before;  // ||mu - lambda||_{k+s+2, r(1+eta)}
  std::vector<double> after;   // ||mu o phi - lambda||_{k, r}
  double slope = 0.0;
};

struct ContractionReport {
  int k = 3;
  double r = 0.5, eta = 0.5;
  std::vector<ContractionTrial> trials;
  double min_slope = 0.0;
  double max_constant = 0.0;   // max after / before^2
};

/// One unsmoothed step on mu = lambda o flow(eps g) for eps in {1e-1, 1e-2, 1e-3};
/// least-squares slope of log(after) against log(eps) per trial.
ContractionReport quadratic_contraction_check(const Problem& p, int trials, std::uint64_t seed,
                                              Exec exec = Exec::serial);

}  // namespace nmjet
