#include "nmjet/estimates.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "nmjet/ce_complex.hpp"
#include "nmjet/errors.hpp"

namespace nmjet {

namespace {

struct Sample {
  double lhs = 0.0;
  double model = 0.0;
};

using TrialFn = std::function<void(std::mt19937_64&, std::vector<Sample>&)>;

// Runs the trials (possibly in parallel) and reduces serially so the fitted
// constants do not depend on the execution policy.
std::vector<FitResult> run_sweep(const SweepOptions& o, std::vector<FitResult> cells, const TrialFn& fn) {
  const std::size_t nc = cells.size();
  const auto trials = static_cast<std::size_t>(std::max(0, o.trials));
  std::vector<Sample> all(trials * nc);
  for_each_index(trials, o.exec, [&](std::size_t t) {
    auto rng = trial_rng(o.seed, t);
    std::vector<Sample> s(nc);
    fn(rng, s);
    std::copy(s.begin(), s.end(), all.begin() + static_cast<std::ptrdiff_t>(t * nc));
  });
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t t = 0; t < trials; ++t) {
      const Sample& s = all[t * nc + c];
      FitResult& r = cells[c];
      ++r.samples;
      if (!std::isfinite(s.lhs) || !std::isfinite(s.model)) {
        ++r.unbounded;
      } else if (s.model > 1e-300) {
        r.constant = std::max(r.constant, s.lhs / s.model);
      } else if (s.lhs > 1e-13) {
        ++r.unbounded;
      }
    }
  return cells;
}

std::string fmt(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) os << ",";
    os << k << "=" << v;
    first = false;
  }
  return os.str();
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double norm_of(const JetMap& m, int k, double r) { return m.displacement_norm({k, r}); }

JetMap sum_map(const JetMap& a, const JetMap& b) {
  std::vector<Jet> chi;
  for (int i = 0; i < a.nvars(); ++i) chi.push_back(a.displacement()[i] + b.displacement()[i]);
  return JetMap::from_displacement(std::move(chi));
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Largest coefficient of (1+x)^{k+1} and of (a+b)^2 (1+a+b)^k.
double two_flow_max_coefficient(int k) {
  double m = binom(k + 1, (k + 1) / 2);
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i <= 2 + j; ++i) m = std::max(m, binom(k, j) * binom(2 + j, i));
  return m;
}

}  // namespace

JetMap random_small_map(std::mt19937_64& rng, int nvars, int degcap, int min_degree, double norm,
                        NormParams p) {
  std::vector<Jet> chi;
  for (int i = 0; i < nvars; ++i) chi.push_back(random_jet(rng, nvars, degcap, std::max(1, min_degree), degcap));
  const double cur = ck_norm(std::span<const Jet>(chi), p);
  if (cur > 0.0)
    for (Jet& c : chi) c *= norm / cur;
  return JetMap::from_displacement(std::move(chi));
}

Jet random_generator(std::mt19937_64& rng, int nvars, int degcap) {
  Jet g = random_jet(rng, nvars, degcap, 2, std::min(3, degcap));
  const double n = ck_norm(g, {0, 1.0});
  if (n > 0.0) g *= 1.0 / n;
  return g;
}

std::vector<FitResult> smoothing_sweep(const SweepOptions& o, double radius) {
  const std::vector<std::pair<int, int>> qp{{1, 3}, {2, 5}};
  const std::vector<double> ts{2.0, 4.0, 8.0};
  std::vector<FitResult> cells;
  for (auto [q, p] : qp)
    for (double t : ts) {
      cells.push_back({"smoothing_gain", fmt({{"q", q}, {"p", p}, {"t", t}, {"radius", radius}})});
      cells.push_back({"smoothing_remainder", fmt({{"q", q}, {"p", p}, {"t", t}, {"radius", radius}})});
    }
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
    const Jet f = random_jet(rng, o.nvars, o.degcap, 0, o.degcap);
    std::size_t c = 0;
    for (auto [q, p] : qp)
      for (double t : ts) {
        const Jet sf = smooth(f, t);
        s[c++] = {ck_norm(sf, {p, radius}), std::pow(t, p - q) * ck_norm(f, {q, radius})};
        s[c++] = {ck_norm(f - sf, {q, radius}), std::pow(t, q - p) * ck_norm(f, {p, radius})};
      }
  });
}

FitResult interpolation_sweep(const SweepOptions& o, int p, int q, int r_ord, double radius) {
  std::vector<FitResult> cells{
      {"interpolation", fmt({{"r", r_ord}, {"q", q}, {"p", p}, {"radius", radius}})}};
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
           const Jet f = random_jet(rng, o.nvars, o.degcap, 0, o.degcap);
           s[0] = {interpolation_residual(f, p, q, r_ord, radius), 1.0};
         })
      .front();
}

std::vector<FitResult> group_law_sweep(const SweepOptions& o, double c) {
  const double rho = 1.0;
  std::vector<FitResult> cells;
  for (int k = 1; k <= 3; ++k) {
    cells.push_back({"group_inverse", fmt({{"k", k}, {"c", c}})});
    cells.push_back({"group_product", fmt({{"k", k}, {"c", c}})});
    cells.push_back({"group_product_identity", fmt({{"k", k}, {"c", c}})});
  }
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
    const JetMap phi = random_small_map(rng, o.nvars, o.degcap, 1, log_uniform(rng, 1e-3, 0.45 / c), {1, rho});
    const JetMap psi = random_small_map(rng, o.nvars, o.degcap, 1, log_uniform(rng, 1e-3, 0.45 / c), {1, rho});
    const JetMap inv = invert(phi);
    const JetMap prod = compose(phi, psi);
    const double rho_inv = (1.0 - c * norm_of(phi, 1, rho)) * rho;
    const double rho_prod = (1.0 - c * norm_of(psi, 1, rho)) * rho;
    std::vector<Jet> diff;
    for (int i = 0; i < o.nvars; ++i) diff.push_back(prod.displacement()[i] - phi.displacement()[i]);
    std::size_t cell = 0;
    for (int k = 1; k <= 3; ++k) {
      const double x = norm_of(phi, k, rho);
      const double y = norm_of(psi, k, rho);
      const double py = y * std::pow(1.0 + y, k);
      s[cell++] = {norm_of(inv, k, rho_inv), x * std::pow(1.0 + x, k)};
      s[cell++] = {ck_norm(std::span<const Jet>(diff), {k, rho_prod}), py + norm_of(phi, k + 1, rho) * py};
      s[cell++] = {norm_of(prod, k, rho_prod), py + x * (1.0 + py)};
    }
  });
}

std::vector<FitResult> action_law_sweep(const SweepOptions& o, double c) {
  const double rho = 1.0;
  const int gamma = 1;
  std::vector<FitResult> cells;
  for (int k = 1; k <= 3; ++k) {
    cells.push_back({"action_high_norm", fmt({{"k", k}, {"gamma", gamma}})});
    cells.push_back({"action_difference", fmt({{"k", k}, {"gamma", gamma}})});
    cells.push_back({"action_norm", fmt({{"k", k}, {"gamma", gamma}})});
  }
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
    const Jet f = random_jet(rng, o.nvars, o.degcap, 0, o.degcap);
    const JetMap phi = random_small_map(rng, o.nvars, o.degcap, 1, log_uniform(rng, 1e-3, 0.2 / c), {1, rho});
    const JetMap chi = random_small_map(rng, o.nvars, o.degcap, 1, log_uniform(rng, 1e-3, 0.2 / c), {1, rho});
    const Jet f_phi = substitute(f, phi);
    const Jet f_sum = substitute(f, sum_map(phi, chi));
    const double rho1 = (1.0 - c * norm_of(phi, 1, rho)) * rho;
    const double rho2 = (1.0 - c * (norm_of(phi, 1, rho) + norm_of(chi, 1, rho))) * rho;
    std::size_t cell = 0;
    for (int k = 1; k <= 3; ++k) {
      const double a = norm_of(phi, k + gamma, rho);
      const double b = norm_of(phi, 2 * k - 1 + gamma, rho);
      const double fk = ck_norm(f, {k, rho});
      const double fh = ck_norm(f, {2 * k - 1, rho});
      const double pa = std::pow(1.0 + a, k);
      s[cell++] = {ck_norm(f_phi, {2 * k - 1, rho1}), fh * (1.0 + a * pa) + b * fk * pa};
      const double x = norm_of(chi, k + gamma, rho);
      s[cell++] = {ck_norm(f_sum - f_phi, {k, rho2}),
                   x * ck_norm(f, {k + gamma, rho}) * std::pow(1.0 + a + x, k + gamma)};
      s[cell++] = {std::max(0.0, ck_norm(f_phi, {k, rho1}) - fk), fk * a * pa};
    }
  });
}

std::vector<FitResult> composition_sweep(const SweepOptions& o) {
  const double r = 0.5, eta = 0.5;
  std::vector<FitResult> cells;
  for (int k = 1; k <= 3; ++k) cells.push_back({"composition", fmt({{"k", k}, {"r", r}, {"eta", eta}})});
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
    const Jet f = random_jet(rng, o.nvars, o.degcap, 0, o.degcap);
    const JetMap chi = random_small_map(rng, o.nvars, o.degcap, 1, log_uniform(rng, 1e-3, 0.9 * eta), {1, r});
    const Jet fc = substitute(f, chi);
    for (int k = 1; k <= 3; ++k) {
      const double base = ck_norm(f, {k, r * (1.0 + eta)});
      const double x = norm_of(chi, k, r);
      s[k - 1] = {std::max(0.0, ck_norm(fc, {k, r}) - base), base * (std::pow(1.0 + x, k) - 1.0)};
    }
  });
}

std::vector<FitResult> composition_difference_sweep(const SweepOptions& o) {
  const double r = 0.5, eta = 0.5;
  std::vector<FitResult> cells;
  for (int k = 0; k <= 3; ++k)
    cells.push_back({"composition_difference", fmt({{"k", k}, {"r", r}, {"eta", eta}})});
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
    const Jet f = random_jet(rng, o.nvars, o.degcap, 0, o.degcap);
    const JetMap chi = random_small_map(rng, o.nvars, o.degcap, 1, log_uniform(rng, 1e-3, 0.45 * eta), {1, r});
    const JetMap xi = random_small_map(rng, o.nvars, o.degcap, 1, log_uniform(rng, 1e-3, 0.45 * eta), {1, r});
    const Jet diff = substitute(f, sum_map(chi, xi)) - substitute(f, chi);
    for (int k = 0; k <= 3; ++k) {
      const double x = norm_of(chi, k, r), y = norm_of(xi, k, r);
      s[k] = {ck_norm(diff, {k, r}),
              ck_norm(f, {k + 1, r * (1.0 + eta)}) * y * std::pow(1.0 + x + y, k + 1)};
    }
  });
}

std::vector<FitResult> flow_sweep(const SweepOptions& o, const PoissonBivector& pi) {
  const double r = 0.5, eps = 0.25;
  const std::vector<double> times{0.25, 0.5, 1.0};
  std::vector<FitResult> cells;
  for (double t : times) cells.push_back({"flow_c1", fmt({{"t", t}, {"r", r}, {"eps", eps}})});
  for (int L = 2; L <= 4; ++L) cells.push_back({"flow_cL", fmt({{"L", L}, {"r", r}, {"eps", eps}})});
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
    Jet g = random_generator(rng, o.nvars, o.degcap);
    const auto field0 = hamiltonian_vf(g, pi);
    g *= log_uniform(rng, 1e-3, 0.9) * eps / ck_norm(std::span<const Jet>(field0), {1, r + eps});
    const auto field = hamiltonian_vf(g, pi);
    const auto xn = [&](int k) { return ck_norm(std::span<const Jet>(field), {k, r + eps}); };
    std::vector<double> high(3, 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const JetMap flow = time1_flow(times[i] * g, pi);
      s[i] = {norm_of(flow, 1, r), xn(1)};
      for (int L = 2; L <= 4; ++L) high[L - 2] = std::max(high[L - 2], norm_of(flow, L, r));
    }
    for (int L = 2; L <= 4; ++L) {
      const int l = L / 2 + 1;
      s[times.size() + L - 2] = {high[L - 2], xn(L) * std::pow(1.0 + xn(l), L)};
    }
  });
}

std::vector<FitResult> two_flow_sweep(const SweepOptions& o, const PoissonBivector& pi) {
  const double r = 0.5, eta = 0.5, r1 = r * (1.0 + eta);
  std::vector<FitResult> cells;
  for (int k = 0; k <= 2; ++k) {
    FitResult f{"two_flow_difference", fmt({{"k", k}, {"r", r}, {"eta", eta}})};
    f.threshold = 100.0 / two_flow_max_coefficient(k);
    cells.push_back(f);
  }
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
    const Jet f = random_jet(rng, o.nvars, o.degcap, 0, o.degcap);
    Jet g1 = random_generator(rng, o.nvars, o.degcap);
    Jet g2 = random_generator(rng, o.nvars, o.degcap);
    g1 *= log_uniform(rng, 1e-4, 1e-2) / ck_norm(g1, {2, r1});
    g2 *= log_uniform(rng, 1e-4, 1e-2) / ck_norm(g2, {2, r1});
    const Jet diff = substitute(f, time1_flow(g1, pi)) - substitute(f, time1_flow(g2, pi));
    for (int k = 0; k <= 2; ++k) {
      const double a = ck_norm(g1, {k + 2, r1}), b = ck_norm(g2, {k + 2, r1});
      const double first = ck_norm(g1 - g2, {k + 1, r1}) * ck_norm(f, {k + 1, r1}) *
                           std::pow(1.0 + ck_norm(g1, {k + 1, r1}), k + 1);
      const double second = ck_norm(f, {k + 2, r1}) * (a + b) * (a + b) * std::pow(1.0 + a + b, k);
      s[k] = {ck_norm(diff, {k, r}), first + second};
    }
  });
}

std::vector<FitResult> quadratic_error_sweep(const SweepOptions& o, const MomentumMap& lambda,
                                             const PoissonBivector& pi) {
  const int m = lambda.size();
  const std::vector<double> radii{0.5, 1.0};
  std::vector<FitResult> cells;
  for (int k = 0; k <= 2; ++k)
    for (double r : radii) {
      FitResult f{"quadratic_error", fmt({{"k", k}, {"r", r}})};
      f.threshold = m * (m - 1);
      cells.push_back(f);
    }
  return run_sweep(o, cells, [&](std::mt19937_64& rng, std::vector<Sample>& s) {
    Jet g = random_generator(rng, pi.dim(), o.degcap);
    g *= log_uniform(rng, 1e-3, 1e-1);
    const MomentumMap mu = pullback(lambda, time1_flow(g, pi));
    const auto f = difference(mu, lambda);
    const Cochain df = delta(Cochain::from_components(lambda.algebra, f), lambda, pi);
    std::size_t cell = 0;
    for (int k = 0; k <= 2; ++k)
      for (double r : radii) {
        const double fn = ck_norm(std::span<const Jet>(f), {k + 1, r});
        s[cell++] = {df.norm({k, r}), bivector_norm(pi, {k, r}) * fn * fn};
      }
  });
}

}  // namespace nmjet
