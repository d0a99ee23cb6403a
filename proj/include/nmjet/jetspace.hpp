#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "nmjet/jet.hpp"

namespace nmjet {

/// Smoothness order k and radius r of the scaled C^k norms, 0 < r <= 1.
struct NormParams {
  int k = 0;
  double r = 1.0;
};

/// Majorant C^k norm on the ball B_r:
///   max_{|alpha| <= k} sum_beta |coeff_beta(D^alpha f)| r^{|beta|}.
/// It dominates sup_{|alpha|<=k} sup_{B_r} |D^alpha f|, is monotone in k and r,
/// and is submultiplicative for k = 0.
double ck_norm(const Jet& f, NormParams p);
/// Max over the components.
double ck_norm(std::span<const Jet> fs, NormParams p);

/// Lebesgue integral of z^gamma over the ball of radius r in R^n:
///   0 if some gamma_i is odd, else
///   2 prod Gamma((gamma_i+1)/2) / Gamma((|gamma|+n)/2) * r^{|gamma|+n} / (|gamma|+n).
double ball_monomial_integral(std::span<const int> gamma, double r);

/// Sobolev inner product sum_{|alpha|<=k} (|alpha|!/alpha!) int_{B_r} D^alpha f D^alpha g.
double sobolev_inner(const Jet& f, const Jet& g, int k, double r);

/// Smoothing operator S(t): keeps the homogeneous components of degree <= floor(t).
/// Throws BadSmoothingParameter for t <= 1.
Jet smooth(const Jet& f, double t);

/// (|f|_q)^{p-r} / ((|f|_r)^{p-q} (|f|_p)^{q-r}) with |.| = ck_norm(., {., radius}).
/// Returns 1 for 0/0. Throws BadOrders unless p >= q >= r_ord >= 0.
double interpolation_residual(const Jet& f, int p, int q, int r_ord, double radius);

/// Independent, reproducible generator for trial `trial` of a sweep seeded by
/// `seed` (splitmix64 mixing); trials can run in any order or in parallel.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial);

/// Random jet with coefficients uniform in [-scale, scale] on degrees
/// [min_degree, max_degree] (clamped to the cap); other coefficients zero.
Jet random_jet(std::mt19937_64& rng, int nvars, int degcap, int min_degree, int max_degree,
               double scale = 1.0);

}  // namespace nmjet
