#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nmjet/exec.hpp"
#include "nmjet/jetgroup.hpp"
#include "nmjet/lie_algebra.hpp"
#include "nmjet/poisson.hpp"

namespace nmjet {

/// Fitted constant C of an inequality lhs <= C * model over a randomized sweep.
/// A sample with model == 0 and lhs > 0 cannot be covered by any C and is
/// counted as unbounded.
struct FitResult {
  std::string law;
  std::string params;
  double constant = 0.0;
  std::size_t samples = 0;
  std::size_t unbounded = 0;
  double threshold = INFINITY;  // optional acceptance bound on the constant

  bool ok() const noexcept {
    return unbounded == 0 && std::isfinite(constant) && constant <= threshold;
  }
};

struct SweepOptions {
  int trials = 200;
  std::uint64_t seed = 1;
  Exec exec = Exec::serial;
  int nvars = 3;
  int degcap = 6;
};

/// Random map Id + chi with chi of degrees [min_degree, degcap], rescaled so that
/// ||chi||_{p.k, p.r} equals `norm`.
JetMap random_small_map(std::mt19937_64& rng, int nvars, int degcap, int min_degree, double norm,
                        NormParams p);

/// Random g of degrees [2, 3] normalized to ||g||_{0,1} = 1.
Jet random_generator(std::mt19937_64& rng, int nvars, int degcap);

/// ||S(t)f||_p <= C t^{p-q} ||f||_q and ||f - S(t)f||_q <= C t^{q-p} ||f||_p for
/// (q,p) in {(1,3),(2,5)}, t in {2,4,8}, on random jets at the given radius.
std::vector<FitResult> smoothing_sweep(const SweepOptions& o, double radius);

/// (||f||_q)^{p-r} <= C (||f||_r)^{p-q} (||f||_p)^{q-r} on random jets.
FitResult interpolation_sweep(const SweepOptions& o, int p, int q, int r_ord, double radius);

/// Inversion, product and consequent-product laws of the jet group, k in {1,2,3}.
std::vector<FitResult> group_law_sweep(const SweepOptions& o, double c);

/// Right action f . phi = f o phi with loss gamma = 1, k in {1,2,3}.
std::vector<FitResult> action_law_sweep(const SweepOptions& o, double c);

/// Composition estimate, difference of compositions, flow estimates and
/// two-flow difference for Hamiltonian flows of the given Poisson structure.
std::vector<FitResult> composition_sweep(const SweepOptions& o);
std::vector<FitResult> composition_difference_sweep(const SweepOptions& o);
std::vector<FitResult> flow_sweep(const SweepOptions& o, const PoissonBivector& pi);
std::vector<FitResult> two_flow_sweep(const SweepOptions& o, const PoissonBivector& pi);

/// ||delta(mu - lambda)||_{k,r} <= m(m-1) ||Pi||_{k,r} ||mu - lambda||^2_{k+1,r}
/// for random momentum maps mu = lambda o flow(eps g); one result per (k, r)
/// where `constant` is the worst ratio lhs / (||Pi|| ||f||^2) and threshold m(m-1).
std::vector<FitResult> quadratic_error_sweep(const SweepOptions& o, const MomentumMap& lambda,
                                             const PoissonBivector& pi);

}  // namespace nmjet
