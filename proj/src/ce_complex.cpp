#include "nmjet/ce_complex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "nmjet/errors.hpp"

namespace nmjet {

namespace {

// Sorts indices in place; returns the permutation sign, or 0 on a repeated index.
int sort_with_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

std::vector<int> without(const std::vector<int>& x, std::size_t a) {
  std::vector<int> out;
  out.reserve(x.size() - 1);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i != a) out.push_back(x[i]);
  return out;
}

std::vector<int> without(const std::vector<int>& x, std::size_t a, std::size_t b) {
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i != a && i != b) out.push_back(x[i]);
  return out;
}

std::size_t tuple_position(const std::vector<std::vector<int>>& tuples, const std::vector<int>& t) {
  auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
  if (it == tuples.end() || *it != t)
    throw Error(ErrorCode::IndexOutOfRange, "tuple is not strictly increasing or out of range");
  return static_cast<std::size_t>(it - tuples.begin());
}

void check_linear(const MomentumMap& lambda, const PoissonBivector& pi) {
  if (!pi.is_linear(1e-14)) throw Error(ErrorCode::NotLinear, "Poisson bivector is not linear");
  for (const Jet& c : lambda.components) {
    const MonomialBasis& b = c.basis();
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b.degree(i) != 1 && std::abs(c[i]) > 1e-14)
        throw Error(ErrorCode::NotLinear, "reference momentum map is not linear");
  }
}

Eigen::MatrixXd kron_identity(std::size_t copies, const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(copies * m.rows(), copies * m.cols());
  for (std::size_t t = 0; t < copies; ++t)
    out.block(t * m.rows(), t * m.cols(), m.rows(), m.cols()) = m;
  return out;
}

// Assembles delta_q on one degree block from the rho matrices.
Eigen::MatrixXd assemble_delta(int q, const LieAlgebra& g, const std::vector<Eigen::MatrixXd>& rho,
                               std::size_t n_mono) {
  const int m = g.dim();
  const auto in = increasing_tuples(m, q);
  const auto out = increasing_tuples(m, q + 1);
  const auto n = static_cast<Eigen::Index>(n_mono);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(out.size() * n_mono, in.size() * n_mono);
  for (std::size_t o = 0; o < out.size(); ++o) {
    const auto& x = out[o];
    for (std::size_t a = 0; a < x.size(); ++a) {
      const std::size_t i = tuple_position(in, without(x, a));
      const double sign = (a % 2 == 0) ? 1.0 : -1.0;
      d.block(o * n, i * n, n, n) += sign * rho[x[a]];
    }
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t b = a + 1; b < x.size(); ++b) {
        const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
        const auto rest = without(x, a, b);
        for (int p = 0; p < m; ++p) {
          const double cp = g.c(x[a], x[b], p);
          if (cp == 0.0) continue;
          std::vector<int> idx{p};
          idx.insert(idx.end(), rest.begin(), rest.end());
          const int s = sort_with_sign(idx);
          if (s == 0) continue;
          const std::size_t i = tuple_position(in, idx);
          d.block(o * n, i * n, n, n).diagonal().array() += sign * s * cp;
        }
      }
  }
  return d;
}

int numeric_rank(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, s.size() ? s[0] : 0.0);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol) ++r;
  return r;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& a) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::MatrixXd::Zero(a.cols(), a.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, s.size() ? s[0] : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > tol) inv[i] = 1.0 / s[i];
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

// Inverse of a symmetric positive definite Laplacian; WhiteheadViolation if singular.
Eigen::MatrixXd invert_laplacian(const Eigen::MatrixXd& lap, int q, int degree, double* min_eig) {
  if (lap.rows() == 0) {
    *min_eig = 0.0;
    return lap;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  const auto& ev = eig.eigenvalues();
  *min_eig = ev.minCoeff();
  const double tol = 1e-10 * std::max(1.0, ev.maxCoeff());
  if (!(*min_eig > tol)) {
    std::ostringstream os;
    os << "Laplacian on C^" << q << " is singular in degree " << degree << " (min eigenvalue "
       << *min_eig << "): H^" << q << " != 0";
    throw Error(ErrorCode::WhiteheadViolation, os.str());
  }
  return eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

double max_abs(const Eigen::MatrixXd& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

DegreeBlock build_block(int d, const MomentumMap& lambda, const PoissonBivector& pi, int degcap) {
  const LieAlgebra& g = *lambda.algebra;
  const int m = g.dim();
  const int n = pi.dim();
  DegreeBlock blk;
  blk.degree = d;
  blk.monomials = MonomialBasis::get(n, degcap)->degree_size(d);
  const std::size_t nm = blk.monomials;

  std::vector<Eigen::MatrixXd> rho;
  for (int i = 0; i < m; ++i) rho.push_back(rho_block(i, d, lambda, pi));
  blk.d0 = assemble_delta(0, g, rho, nm);
  blk.d1 = assemble_delta(1, g, rho, nm);
  blk.d2 = assemble_delta(2, g, rho, nm);

  const std::size_t t0 = 1, t1 = m, t2 = increasing_tuples(m, 2).size(),
                    t3 = increasing_tuples(m, 3).size();

  // Orthonormal coordinates: v~ = L^T v with W = L L^T.
  const Eigen::MatrixXd w = monomial_gram(n, d);
  Eigen::LLT<Eigen::MatrixXd> llt(w);
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd lt = l.transpose();
  const Eigen::MatrixXd lt_inv =
      lt.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(nm, nm));
  auto to_ortho = [&](const Eigen::MatrixXd& a, std::size_t out_t, std::size_t in_t) {
    return Eigen::MatrixXd(kron_identity(out_t, lt) * a * kron_identity(in_t, lt_inv));
  };
  auto from_ortho = [&](const Eigen::MatrixXd& a, std::size_t out_t, std::size_t in_t) {
    return Eigen::MatrixXd(kron_identity(out_t, lt_inv) * a * kron_identity(in_t, lt));
  };
  const Eigen::MatrixXd o0 = to_ortho(blk.d0, t1, t0);
  const Eigen::MatrixXd o1 = to_ortho(blk.d1, t2, t1);
  const Eigen::MatrixXd o2 = to_ortho(blk.d2, t3, t2);

  BlockDiagnostics& diag = blk.diagnostics;
  diag.degree = d;
  diag.dim_c0 = t0 * nm;
  diag.dim_c1 = t1 * nm;
  diag.dim_c2 = t2 * nm;
  diag.dim_c3 = t3 * nm;

  const Eigen::MatrixXd lap1 = o0 * o0.transpose() + o1.transpose() * o1;
  const Eigen::MatrixXd lap2 = o1 * o1.transpose() + o2.transpose() * o2;
  const Eigen::MatrixXd g1 = invert_laplacian(lap1, 1, d, &diag.laplacian1_min_eig);
  const Eigen::MatrixXd g2 = invert_laplacian(lap2, 2, d, &diag.laplacian2_min_eig);

  blk.h0 = from_ortho(o0.transpose() * g1, t0, t1);
  blk.h1 = from_ortho(o1.transpose() * g2, t1, t2);
  blk.h2 = from_ortho(pseudo_inverse(o2), t2, t3);

  diag.rank_d0 = numeric_rank(o0);
  diag.rank_d1 = numeric_rank(o1);
  diag.rank_d2 = numeric_rank(o2);
  diag.h0 = static_cast<int>(diag.dim_c0) - diag.rank_d0;
  diag.h1 = static_cast<int>(diag.dim_c1) - diag.rank_d0 - diag.rank_d1;
  diag.h2 = static_cast<int>(diag.dim_c2) - diag.rank_d1 - diag.rank_d2;
  diag.d1d0_residual = max_abs(blk.d1 * blk.d0);
  diag.d2d1_residual = max_abs(blk.d2 * blk.d1);
  diag.homotopy_c1_residual = max_abs(blk.d0 * blk.h0 + blk.h1 * blk.d1 -
                                      Eigen::MatrixXd::Identity(diag.dim_c1, diag.dim_c1));
  diag.homotopy_c2_residual = max_abs(blk.d1 * blk.h1 + blk.h2 * blk.d2 -
                                      Eigen::MatrixXd::Identity(diag.dim_c2, diag.dim_c2));
  return blk;
}

}  // namespace

std::vector<std::vector<int>> increasing_tuples(int m, int q) {
  std::vector<std::vector<int>> out;
  if (q < 0 || q > m) return out;
  std::vector<int> cur(q);
  for (int i = 0; i < q; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = q - 1;
    while (i >= 0 && cur[i] == m - q + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < q; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

Cochain::Cochain(LieAlgebraPtr algebra, int q, int nvars, int degcap)
    : algebra_(std::move(algebra)), q_(q), nvars_(nvars), degcap_(degcap) {
  if (!algebra_) throw Error(ErrorCode::BadInput, "cochain needs a Lie algebra");
  if (q < 0 || q > 3) throw Error(ErrorCode::DegreeTooHigh, "cochain degree must be in [0, 3]");
  tuples_ = increasing_tuples(algebra_->dim(), q);
  values_.assign(tuples_.size(), Jet(nvars, degcap));
}

Cochain Cochain::from_function(LieAlgebraPtr algebra, const Jet& f) {
  Cochain c(std::move(algebra), 0, f.nvars(), f.degcap());
  c.values_[0] = f;
  return c;
}

Cochain Cochain::from_components(LieAlgebraPtr algebra, std::vector<Jet> components) {
  if (components.empty()) throw Error(ErrorCode::BadInput, "empty 1-cochain");
  if (static_cast<int>(components.size()) != algebra->dim())
    throw Error(ErrorCode::DimensionMismatch, "1-cochain needs one value per basis element");
  int cap = 0;
  for (const Jet& j : components) cap = std::max(cap, j.degcap());
  Cochain c(std::move(algebra), 1, components.front().nvars(), cap);
  for (std::size_t i = 0; i < components.size(); ++i) {
    require_same_nvars(components[i], components.front());
    c.values_[i] = components[i].with_degcap(cap);
  }
  return c;
}

std::size_t Cochain::index_of(std::span<const int> increasing) const {
  return tuple_position(tuples_, std::vector<int>(increasing.begin(), increasing.end()));
}

Jet Cochain::evaluate(std::span<const int> indices) const {
  if (indices.size() != static_cast<std::size_t>(q_))
    throw Error(ErrorCode::DimensionMismatch, "cochain evaluated on wrong number of arguments");
  std::vector<int> idx(indices.begin(), indices.end());
  for (int i : idx)
    if (i < 0 || i >= algebra_->dim())
      throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(i));
  const int sign = sort_with_sign(idx);
  if (sign == 0) return Jet(nvars_, degcap_);
  const Jet& v = values_[tuple_position(tuples_, idx)];
  return sign > 0 ? v : -v;
}

double Cochain::norm(NormParams p) const { return ck_norm(std::span<const Jet>(values_), p); }

Cochain& Cochain::operator+=(const Cochain& other) {
  if (other.q_ != q_ || other.size() != size())
    throw Error(ErrorCode::DegreeMismatch, "adding cochains of different degree");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  degcap_ = std::max(degcap_, other.degcap_);
  return *this;
}

Cochain& Cochain::operator-=(const Cochain& other) {
  if (other.q_ != q_ || other.size() != size())
    throw Error(ErrorCode::DegreeMismatch, "subtracting cochains of different degree");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  degcap_ = std::max(degcap_, other.degcap_);
  return *this;
}

Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }

Jet rho(int i, const Jet& h, const MomentumMap& lambda, const PoissonBivector& pi) {
  if (i < 0 || i >= lambda.size())
    throw Error(ErrorCode::IndexOutOfRange, "basis index " + std::to_string(i));
  return bracket(lambda.components[i], h, pi);
}

Cochain delta(const Cochain& c, const MomentumMap& lambda, const PoissonBivector& pi) {
  if (c.degree() > 2) throw Error(ErrorCode::DegreeTooHigh, "delta is only built up to C^3");
  const LieAlgebra& g = *c.algebra();
  const int m = g.dim();
  const int cap = std::max({c.degcap(), lambda.degcap(), pi.degcap()});
  Cochain out(c.algebra(), c.degree() + 1, c.nvars(), cap);
  for (std::size_t o = 0; o < out.size(); ++o) {
    const auto& x = out.tuple(o);
    Jet acc(c.nvars(), cap);
    for (std::size_t a = 0; a < x.size(); ++a) {
      Jet term = rho(x[a], c.evaluate(without(x, a)), lambda, pi);
      if (a % 2 == 0)
        acc += term;
      else
        acc -= term;
    }
    for (std::size_t a = 0; a < x.size(); ++a)
      for (std::size_t b = a + 1; b < x.size(); ++b) {
        const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
        const auto rest = without(x, a, b);
        for (int p = 0; p < m; ++p) {
          const double cp = g.c(x[a], x[b], p);
          if (cp == 0.0) continue;
          std::vector<int> idx{p};
          idx.insert(idx.end(), rest.begin(), rest.end());
          acc += (sign * cp) * c.evaluate(idx);
        }
      }
    out.value(o) = std::move(acc);
  }
  return out;
}

Eigen::MatrixXd rho_block(int i, int d, const MomentumMap& lambda, const PoissonBivector& pi) {
  check_linear(lambda, pi);
  const int n = pi.dim();
  const int cap = std::max({d, 1, lambda.degcap(), pi.degcap()});
  const auto basis = MonomialBasis::get(n, cap);
  const std::size_t begin = basis->degree_begin(d);
  const std::size_t nm = basis->degree_size(d);
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(nm, nm);
  for (std::size_t j = 0; j < nm; ++j) {
    Jet mono(basis);
    mono[begin + j] = 1.0;
    const Jet image = rho(i, mono, lambda, pi).with_degcap(cap);
    for (std::size_t t = 0; t < basis->size(); ++t) {
      if (image[t] == 0.0) continue;
      if (basis->degree(t) != d)
        throw Error(ErrorCode::NotLinear, "rho does not preserve homogeneous degree");
      r(static_cast<Eigen::Index>(t - begin), static_cast<Eigen::Index>(j)) = image[t];
    }
  }
  return r;
}

Eigen::MatrixXd monomial_gram(int nvars, int d) {
  const auto basis = MonomialBasis::get(nvars, d);
  const std::size_t begin = basis->degree_begin(d);
  const std::size_t nm = basis->degree_size(d);
  Eigen::MatrixXd w(nm, nm);
  std::vector<int> gamma(nvars);
  for (std::size_t a = 0; a < nm; ++a)
    for (std::size_t b = 0; b < nm; ++b) {
      const auto ea = basis->exponent(begin + a);
      const auto eb = basis->exponent(begin + b);
      for (int v = 0; v < nvars; ++v) gamma[v] = ea[v] + eb[v];
      w(a, b) = ball_monomial_integral(gamma, 1.0);
    }
  return w;
}

HomotopySet HomotopySet::build(const MomentumMap& lambda, const PoissonBivector& pi, int degcap,
                               Exec exec) {
  if (!lambda.algebra) throw Error(ErrorCode::BadInput, "momentum map has no algebra");
  if (lambda.size() != lambda.algebra->dim())
    throw Error(ErrorCode::DimensionMismatch, "momentum map size differs from algebra dimension");
  if (degcap < 0) throw Error(ErrorCode::BadInput, "degree cap must be nonnegative");
  check_linear(lambda, pi);
  HomotopySet hs;
  hs.degcap_ = degcap;
  hs.nvars_ = pi.dim();
  hs.algebra_ = lambda.algebra;
  hs.blocks_.resize(static_cast<std::size_t>(degcap) + 1);
  for_each_index(hs.blocks_.size(), exec, [&](std::size_t d) {
    hs.blocks_[d] = build_block(static_cast<int>(d), lambda, pi, degcap);
  });
  return hs;
}

Cochain HomotopySet::apply(const Cochain& c, int out_q, const Eigen::MatrixXd DegreeBlock::*op) const {
  if (c.nvars() != nvars_) throw Error(ErrorCode::DimensionMismatch, "cochain arity");
  for (const Jet& v : c.values())
    if (v.degcap() > degcap_ && v.highest_degree() > degcap_)
      throw Error(ErrorCode::DegreeMismatch, "cochain has terms above the homotopy degree cap");
  const auto basis = MonomialBasis::get(nvars_, degcap_);
  Cochain out(algebra_, out_q, nvars_, degcap_);
  std::vector<Jet> in;
  in.reserve(c.size());
  for (const Jet& v : c.values()) in.push_back(v.with_degcap(degcap_));
  for (const DegreeBlock& blk : blocks_) {
    const std::size_t nm = blk.monomials;
    const std::size_t begin = basis->degree_begin(blk.degree);
    Eigen::VectorXd x(static_cast<Eigen::Index>(in.size() * nm));
    for (std::size_t t = 0; t < in.size(); ++t)
      for (std::size_t j = 0; j < nm; ++j) x[t * nm + j] = in[t][begin + j];
    const Eigen::VectorXd y = (blk.*op) * x;
    for (std::size_t t = 0; t < out.size(); ++t)
      for (std::size_t j = 0; j < nm; ++j) out.value(t)[begin + j] = y[t * nm + j];
  }
  return out;
}

Cochain HomotopySet::apply_h(const Cochain& c) const {
  switch (c.degree()) {
    case 1: return apply(c, 0, &DegreeBlock::h0);
    case 2: return apply(c, 1, &DegreeBlock::h1);
    case 3: return apply(c, 2, &DegreeBlock::h2);
    default:
      throw Error(ErrorCode::DegreeMismatch, "homotopy operators act on 1-, 2- and 3-cochains");
  }
}

Cochain HomotopySet::apply_delta(const Cochain& c) const {
  switch (c.degree()) {
    case 0: return apply(c, 1, &DegreeBlock::d0);
    case 1: return apply(c, 2, &DegreeBlock::d1);
    case 2: return apply(c, 3, &DegreeBlock::d2);
    default: throw Error(ErrorCode::DegreeTooHigh, "delta is only built up to C^3");
  }
}

Jet HomotopySet::correction(const std::vector<Jet>& difference) const {
  return apply_h(Cochain::from_components(algebra_, difference)).value(0);
}

int derivative_shift(int n) { return n / 2 + 1; }

double HomotopyBoundReport::radius_spread(int j, int k) const {
  double lo = INFINITY, hi = 0.0;
  for (const auto& e : entries)
    if (e.j == j && e.k == k) {
      lo = std::min(lo, e.constant);
      hi = std::max(hi, e.constant);
    }
  if (hi == 0.0) return 1.0;
  return hi / lo;
}

HomotopyBoundReport homotopy_norm_bound(const HomotopySet& hs, int trials, std::uint64_t seed,
                                        Exec exec) {
  const int n = hs.nvars();
  const int s = derivative_shift(n);
  const std::vector<int> ks{1, 2, 3};
  const std::vector<double> radii{0.25, 0.5, 1.0};
  const std::size_t cells = 2 * ks.size() * radii.size();
  // ratios[trial * cells + cell]
  std::vector<double> ratios(static_cast<std::size_t>(trials) * cells, 0.0);
  for_each_index(static_cast<std::size_t>(trials), exec, [&](std::size_t t) {
    auto rng = trial_rng(seed, t);
    Cochain s1(hs.algebra(), 1, n, hs.degcap());
    Cochain s2(hs.algebra(), 2, n, hs.degcap());
    for (std::size_t i = 0; i < s1.size(); ++i) s1.value(i) = random_jet(rng, n, hs.degcap(), 0, hs.degcap());
    for (std::size_t i = 0; i < s2.size(); ++i) s2.value(i) = random_jet(rng, n, hs.degcap(), 0, hs.degcap());
    const Cochain out0 = hs.apply_h(s1);
    const Cochain out1 = hs.apply_h(s2);
    std::size_t cell = 0;
    for (int j = 0; j < 2; ++j)
      for (int k : ks)
        for (double r : radii) {
          const Cochain& in = j == 0 ? s1 : s2;
          const Cochain& out = j == 0 ? out0 : out1;
          const double num = out.norm({k, r});
          const double den = in.norm({k + s, r});
          ratios[t * cells + cell++] = den > 0.0 ? num / den : (num > 0.0 ? INFINITY : 0.0);
        }
  });
  HomotopyBoundReport report;
  report.shift = s;
  std::size_t cell = 0;
  for (int j = 0; j < 2; ++j)
    for (int k : ks)
      for (double r : radii) {
        HomotopyBoundEntry e{j, k, r, 0.0, static_cast<std::size_t>(trials), 0};
        for (int t = 0; t < trials; ++t) {
          const double v = ratios[static_cast<std::size_t>(t) * cells + cell];
          if (!std::isfinite(v))
            ++e.unbounded;
          else
            e.constant = std::max(e.constant, v);
        }
        report.entries.push_back(e);
        ++cell;
      }
  return report;
}

}  // namespace nmjet
