#include "nmjet/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nmjet/errors.hpp"

namespace nmjet {

PoissonBivector::PoissonBivector(int dim, int degcap) : dim_(dim), degcap_(degcap) {
  if (dim <= 0) throw Error(ErrorCode::BadInput, "bivector dimension must be positive");
  upper_.assign(static_cast<std::size_t>(dim) * (dim - 1) / 2, Jet(dim, degcap));
}

std::size_t PoissonBivector::slot(int i, int j) const {
  // Row-major over i < j.
  return static_cast<std::size_t>(i) * (2 * dim_ - i - 1) / 2 + (j - i - 1);
}

Jet PoissonBivector::entry(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
    throw Error(ErrorCode::IndexOutOfRange, "bivector index out of range");
  if (i == j) return Jet(dim_, degcap_);
  if (i < j) return upper_[slot(i, j)];
  return -upper_[slot(j, i)];
}

void PoissonBivector::set_entry(int i, int j, const Jet& value) {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_ || i == j)
    throw Error(ErrorCode::IndexOutOfRange, "bivector index out of range");
  if (value.nvars() != dim_) throw Error(ErrorCode::DimensionMismatch, "bivector entry arity");
  Jet v = value.with_degcap(degcap_);
  if (i < j)
    upper_[slot(i, j)] = std::move(v);
  else
    upper_[slot(j, i)] = -std::move(v);
}

bool PoissonBivector::is_linear(double tol) const {
  for (const Jet& e : upper_) {
    const MonomialBasis& b = e.basis();
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b.degree(i) != 1 && std::abs(e[i]) > tol) return false;
  }
  return true;
}

PoissonBivector linear_poisson(const LieAlgebra& g, int degcap) {
  const int n = g.dim();
  PoissonBivector pi(n, degcap);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Jet e(n, degcap);
      for (int k = 0; k < n; ++k)
        if (degcap >= 1) e[1 + k] = g.c(i, j, k);
      pi.set_entry(i, j, e);
    }
  return pi;
}

Jet bracket(const Jet& f_in, const Jet& g_in, const PoissonBivector& pi) {
  require_same_nvars(f_in, g_in);
  if (f_in.nvars() != pi.dim())
    throw Error(ErrorCode::DimensionMismatch, "bracket operands do not match bivector dimension");
  const int cap = std::max({f_in.degcap(), g_in.degcap(), pi.degcap()});
  const Jet f = f_in.with_degcap(cap);
  const Jet g = g_in.with_degcap(cap);
  const int n = pi.dim();
  std::vector<Jet> df, dg;
  df.reserve(n);
  dg.reserve(n);
  for (int v = 0; v < n; ++v) {
    df.push_back(partial(f, v));
    dg.push_back(partial(g, v));
  }
  Jet out(n, cap);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Jet& pij = pi.upper()[static_cast<std::size_t>(i) * (2 * n - i - 1) / 2 + (j - i - 1)];
      if (pij.is_zero()) continue;
      Jet cross = df[i] * dg[j] - df[j] * dg[i];
      if (cross.is_zero()) continue;
      out += pij * cross;
    }
  return out;
}

double jacobi_residual(const PoissonBivector& pi) {
  const int n = pi.dim();
  const int cap = pi.degcap();
  std::vector<Jet> x;
  for (int i = 0; i < n; ++i) x.push_back(Jet::variable(n, cap, i));
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Jet cyc = bracket(pi.entry(i, j), x[k], pi) + bracket(pi.entry(j, k), x[i], pi) +
                  bracket(pi.entry(k, i), x[j], pi);
        worst = std::max(worst, cyc.max_abs_coeff());
      }
  return worst;
}

std::vector<Jet> hamiltonian_vf(const Jet& g, const PoissonBivector& pi) {
  std::vector<Jet> x;
  x.reserve(pi.dim());
  for (int i = 0; i < pi.dim(); ++i)
    x.push_back(bracket(g, Jet::variable(pi.dim(), std::max(g.degcap(), pi.degcap()), i), pi));
  return x;
}

double bivector_norm(const PoissonBivector& pi, NormParams p) {
  return ck_norm(std::span<const Jet>(pi.upper()), p);
}

MomentumMap identity_momentum_map(LieAlgebraPtr algebra, int degcap) {
  MomentumMap mu;
  const int m = algebra->dim();
  mu.algebra = std::move(algebra);
  for (int i = 0; i < m; ++i) mu.components.push_back(Jet::variable(m, degcap, i));
  return mu;
}

std::vector<Jet> difference(const MomentumMap& mu, const MomentumMap& lambda) {
  if (mu.size() != lambda.size())
    throw Error(ErrorCode::DimensionMismatch, "momentum maps have different sizes");
  std::vector<Jet> out;
  out.reserve(mu.size());
  for (int i = 0; i < mu.size(); ++i) out.push_back(mu.components[i] - lambda.components[i]);
  return out;
}

double equivariance_residual(const MomentumMap& mu, const PoissonBivector& pi) {
  const LieAlgebra& g = *mu.algebra;
  const int m = g.dim();
  if (mu.size() != m)
    throw Error(ErrorCode::DimensionMismatch, "momentum map needs one component per basis element");
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Jet r = bracket(mu.components[i], mu.components[j], pi);
      for (int p = 0; p < m; ++p)
        if (g.c(i, j, p) != 0.0) r -= g.c(i, j, p) * mu.components[p];
      worst = std::max(worst, ck_norm(r, {0, 1.0}));
    }
  return worst;
}

void require_momentum_map(const MomentumMap& mu, const PoissonBivector& pi, double tol) {
  const double r = equivariance_residual(mu, pi);
  if (!(r <= tol)) {
    std::ostringstream os;
    os << "equivariance residual " << r << " exceeds tolerance " << tol;
    throw Error(ErrorCode::NotMomentumMap, os.str());
  }
}

}  // namespace nmjet
