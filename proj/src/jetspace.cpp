#include "nmjet/jetspace.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nmjet/errors.hpp"

namespace nmjet {

namespace {

// beta! / (beta - alpha)!, zero unless alpha <= beta componentwise.
double falling(std::span<const int> beta, std::span<const int> alpha) {
  double f = 1.0;
  for (std::size_t v = 0; v < beta.size(); ++v) {
    if (alpha[v] > beta[v]) return 0.0;
    for (int e = 0; e < alpha[v]; ++e) f *= beta[v] - e;
  }
  return f;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double ck_norm(const Jet& f, NormParams p) {
  if (p.k < 0) throw Error(ErrorCode::BadInput, "smoothness order must be nonnegative");
  if (!(p.r > 0.0 && p.r <= 1.0)) throw Error(ErrorCode::BadInput, "radius must lie in (0, 1]");
  const MonomialBasis& basis = f.basis();
  const auto c = f.coeffs();
  const int kmax = std::min(p.k, f.degcap());
  const int top = f.highest_degree();
  if (top < 0) return 0.0;
  std::vector<double> rpow(f.degcap() + 1, 1.0);
  for (int d = 1; d <= f.degcap(); ++d) rpow[d] = rpow[d - 1] * p.r;

  double best = 0.0;
  for (std::size_t a = 0; a < basis.degree_begin(kmax + 1); ++a) {
    const int da = basis.degree(a);
    if (da > top) break;
    const auto alpha = basis.exponent(a);
    double sum = 0.0;
    for (std::size_t b = basis.degree_begin(da); b < c.size(); ++b) {
      if (c[b] == 0.0) continue;
      const double fall = falling(basis.exponent(b), alpha);
      if (fall == 0.0) continue;
      sum += std::abs(c[b]) * fall * rpow[basis.degree(b) - da];
    }
    best = std::max(best, sum);
  }
  return best;
}

double ck_norm(std::span<const Jet> fs, NormParams p) {
  double best = 0.0;
  for (const Jet& f : fs) best = std::max(best, ck_norm(f, p));
  return best;
}

double ball_monomial_integral(std::span<const int> gamma, double r) {
  const int n = static_cast<int>(gamma.size());
  int total = 0;
  double log_num = 0.0;
  for (int g : gamma) {
    if (g % 2 != 0) return 0.0;
    total += g;
    log_num += std::lgamma(0.5 * (g + 1));
  }
  const double dim = total + n;
  return 2.0 * std::exp(log_num - std::lgamma(0.5 * dim)) * std::pow(r, dim) / dim;
}

double sobolev_inner(const Jet& f_in, const Jet& g_in, int k, double r) {
  require_same_nvars(f_in, g_in);
  if (k < 0) throw Error(ErrorCode::BadInput, "smoothness order must be nonnegative");
  const int cap = std::max(f_in.degcap(), g_in.degcap());
  const Jet f = f_in.with_degcap(cap);
  const Jet g = g_in.with_degcap(cap);
  const MonomialBasis& basis = f.basis();
  const int n = f.nvars();
  std::vector<int> gamma(n);
  double total = 0.0;
  for (std::size_t a = 0; a < basis.degree_begin(std::min(k, cap) + 1); ++a) {
    const auto alpha = basis.exponent(a);
    double weight = factorial(basis.degree(a));
    for (int e : alpha) weight /= factorial(e);
    // D^alpha f and D^alpha g as coefficient lists.
    Jet df = f, dg = g;
    for (int v = 0; v < n; ++v)
      for (int e = 0; e < alpha[v]; ++e) {
        df = partial(df, v);
        dg = partial(dg, v);
      }
    double sum = 0.0;
    const auto fc = df.coeffs();
    const auto gc = dg.coeffs();
    for (std::size_t i = 0; i < fc.size(); ++i) {
      if (fc[i] == 0.0) continue;
      const auto bi = basis.exponent(i);
      for (std::size_t j = 0; j < gc.size(); ++j) {
        if (gc[j] == 0.0) continue;
        const auto bj = basis.exponent(j);
        for (int v = 0; v < n; ++v) gamma[v] = bi[v] + bj[v];
        sum += fc[i] * gc[j] * ball_monomial_integral(gamma, r);
      }
    }
    total += weight * sum;
  }
  return total;
}

Jet smooth(const Jet& f, double t) {
  if (!(t > 1.0))
    throw Error(ErrorCode::BadSmoothingParameter, "smoothing parameter must exceed 1");
  const double cut = std::floor(t);
  if (cut >= f.degcap()) return f;
  return f.truncated(static_cast<int>(cut));
}

double interpolation_residual(const Jet& f, int p, int q, int r_ord, double radius) {
  if (r_ord < 0 || q < r_ord || p < q)
    throw Error(ErrorCode::BadOrders, "need p >= q >= r >= 0");
  const double nq = ck_norm(f, {q, radius});
  const double nr = ck_norm(f, {r_ord, radius});
  const double np = ck_norm(f, {p, radius});
  const double num = std::pow(nq, p - r_ord);
  const double den = std::pow(nr, p - q) * std::pow(np, q - r_ord);
  if (num == 0.0 && den == 0.0) return 1.0;
  return num / den;
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return std::mt19937_64(z ^ (z >> 31));
}

Jet random_jet(std::mt19937_64& rng, int nvars, int degcap, int min_degree, int max_degree,
               double scale) {
  Jet j(nvars, degcap);
  std::uniform_real_distribution<double> dist(-scale, scale);
  const int lo = std::max(0, min_degree);
  const int hi = std::min(degcap, max_degree);
  if (lo > hi) return j;
  const MonomialBasis& basis = j.basis();
  for (std::size_t i = basis.degree_begin(lo); i < basis.degree_begin(hi + 1); ++i) j[i] = dist(rng);
  return j;
}

}  // namespace nmjet
