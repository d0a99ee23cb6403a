#include "nmjet/jetgroup.hpp"

#include <cmath>
#include <sstream>

#include "nmjet/errors.hpp"

namespace nmjet {

namespace {

std::vector<Jet> coordinate_functions(int n, int cap) {
  std::vector<Jet> xs;
  xs.reserve(n);
  for (int i = 0; i < n; ++i) xs.push_back(Jet::variable(n, cap, i));
  return xs;
}

}  // namespace

JetMap::JetMap(int nvars, int degcap) : nvars_(nvars), degcap_(degcap) {
  if (nvars < 1 || degcap < 1) throw Error(ErrorCode::BadInput, "JetMap needs n >= 1 and D >= 1");
  chi_.assign(nvars, Jet(nvars, degcap));
}

JetMap JetMap::from_displacement(std::vector<Jet> chi) {
  if (chi.empty()) throw Error(ErrorCode::BadInput, "empty displacement");
  const int n = chi.front().nvars();
  if (static_cast<int>(chi.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "a map of R^n needs n components");
  int cap = 1;
  for (const Jet& c : chi) {
    require_same_nvars(c, chi.front());
    cap = std::max(cap, c.degcap());
    if (c[0] != 0.0) throw Error(ErrorCode::BadInput, "displacement must vanish at the origin");
  }
  JetMap m(n, cap);
  for (int i = 0; i < n; ++i) m.chi_[i] = chi[i].with_degcap(cap);
  return m;
}

JetMap JetMap::from_components(const std::vector<Jet>& phi) {
  std::vector<Jet> chi;
  chi.reserve(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    Jet c = phi[i];
    if (c.nvars() != static_cast<int>(phi.size()))
      throw Error(ErrorCode::DimensionMismatch, "a map of R^n needs n components");
    if (c.degcap() >= 1) c[1 + i] -= 1.0;
    chi.push_back(std::move(c));
  }
  return from_displacement(std::move(chi));
}

Jet JetMap::component(int i) const {
  if (i < 0 || i >= nvars_) throw Error(ErrorCode::IndexOutOfRange, "component " + std::to_string(i));
  Jet c = chi_[i];
  c[1 + i] += 1.0;
  return c;
}

std::vector<Jet> JetMap::components() const {
  std::vector<Jet> out;
  out.reserve(nvars_);
  for (int i = 0; i < nvars_; ++i) out.push_back(component(i));
  return out;
}

Eigen::MatrixXd JetMap::linear_part() const {
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(nvars_, nvars_);
  for (int i = 0; i < nvars_; ++i)
    for (int j = 0; j < nvars_; ++j) l(i, j) += chi_[i][1 + j];
  return l;
}

bool JetMap::is_identity(double tol) const {
  for (const Jet& c : chi_)
    if (c.max_abs_coeff() > tol) return false;
  return true;
}

RadiusLedger::RadiusLedger(double radius, double c, double floor)
    : radius_(radius), c_(c), floor_(floor) {
  if (!(radius > 0.0 && radius <= 1.0)) throw Error(ErrorCode::BadInput, "radius must lie in (0, 1]");
  if (!(c > 0.0)) throw Error(ErrorCode::BadInput, "contraction constant must be positive");
  if (!(floor > 0.0 && floor <= radius)) throw Error(ErrorCode::BadInput, "floor must lie in (0, radius]");
}

double RadiusLedger::charge(const std::string& op, double norm, double factor) {
  const double to = radius_ * factor;
  if (!(factor > 0.0) || to < floor_ * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << op << " would shrink the radius from " << radius_ << " to " << to << " below the floor "
       << floor_ << " (charged norm " << norm << ")";
    throw Error(ErrorCode::RadiusExhausted, os.str());
  }
  events_.push_back({op, radius_, to, norm});
  radius_ = to;
  return to;
}

double RadiusLedger::charge_compose(const JetMap& inner, const std::string& op) {
  const double norm = inner.displacement_norm({1, radius_});
  return charge(op, norm, 1.0 - c_ * norm);
}

double RadiusLedger::charge_invert(const JetMap& phi) {
  const double norm = phi.displacement_norm({1, radius_});
  if (norm >= 1.0 / c_) {
    std::ostringstream os;
    os << "||phi - Id||_{1," << radius_ << "} = " << norm << " >= 1/c = " << 1.0 / c_;
    throw Error(ErrorCode::SmallnessViolated, os.str());
  }
  return charge("invert", norm, 1.0 - 0.5 * c_ * norm);
}

Substitution::Substitution(std::vector<Jet> y, int degcap)
    : degcap_(degcap), basis_(MonomialBasis::get(y.empty() ? 1 : y.front().nvars(), degcap)) {
  const int n = basis_->nvars();
  if (static_cast<int>(y.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "substitution needs one jet per variable");
  for (Jet& c : y) {
    if (c.nvars() != n) throw Error(ErrorCode::DimensionMismatch, "substitution arity");
    if (c[0] != 0.0) throw Error(ErrorCode::BadInput, "substituted jets must vanish at the origin");
    c = c.with_degcap(degcap);
  }
  images_.reserve(basis_->size());
  images_.push_back(Jet::constant(n, degcap, 1.0));
  std::vector<int> parent(n);
  for (std::size_t idx = 1; idx < basis_->size(); ++idx) {
    const auto alpha = basis_->exponent(idx);
    int v = 0;
    while (alpha[v] == 0) ++v;
    std::copy(alpha.begin(), alpha.end(), parent.begin());
    --parent[v];
    images_.push_back(images_[basis_->index_of(parent)] * y[v]);
  }
}

Jet Substitution::apply(const Jet& f_in) const {
  if (f_in.nvars() != basis_->nvars()) throw Error(ErrorCode::DimensionMismatch, "substitution arity");
  const Jet f = f_in.with_degcap(degcap_);
  Jet out(basis_);
  auto oc = out.coeffs();
  for (std::size_t idx = 0; idx < basis_->size(); ++idx) {
    const double a = f[idx];
    if (a == 0.0) continue;
    const auto ic = images_[idx].coeffs();
    // images of degree-d monomials start at degree d
    for (std::size_t t = basis_->degree_begin(basis_->degree(idx)); t < ic.size(); ++t)
      oc[t] += a * ic[t];
  }
  return out;
}

Jet substitute(const Jet& f, const JetMap& phi) {
  const int cap = std::max(f.degcap(), phi.degcap());
  return Substitution(phi.components(), cap).apply(f);
}

JetMap compose(const JetMap& phi, const JetMap& psi) {
  if (phi.nvars() != psi.nvars()) throw Error(ErrorCode::DimensionMismatch, "compose arity");
  const int cap = std::max(phi.degcap(), psi.degcap());
  const Substitution sub(psi.components(), cap);
  std::vector<Jet> chi;
  chi.reserve(phi.nvars());
  for (int i = 0; i < phi.nvars(); ++i)
    chi.push_back(psi.displacement()[i].with_degcap(cap) + sub.apply(phi.displacement()[i]));
  return JetMap::from_displacement(std::move(chi));
}

JetMap compose(const JetMap& phi, const JetMap& psi, RadiusLedger& ledger) {
  ledger.charge_compose(psi);
  return compose(phi, psi);
}

JetMap invert(const JetMap& phi) {
  const int n = phi.nvars();
  const int cap = phi.degcap();
  const Eigen::MatrixXd l = phi.linear_part();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(l);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12)
    throw Error(ErrorCode::NotInvertible, "linear part of the map is singular");
  const Eigen::MatrixXd linv = lu.inverse();

  // phi = L + N with N of order >= 2; iterate psi <- L^{-1}(x - N o psi),
  // each pass fixing one more degree.
  std::vector<Jet> nonlinear;
  for (int i = 0; i < n; ++i) {
    Jet c = phi.displacement()[i];
    for (int j = 0; j < n; ++j) c[1 + j] = 0.0;
    nonlinear.push_back(std::move(c));
  }
  const std::vector<Jet> xs = coordinate_functions(n, cap);
  std::vector<Jet> psi(n, Jet(n, cap));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) psi[i] += linv(i, j) * xs[j];
  for (int pass = 1; pass < cap; ++pass) {
    const Substitution sub(psi, cap);
    std::vector<Jet> rhs;
    for (int j = 0; j < n; ++j) rhs.push_back(xs[j] - sub.apply(nonlinear[j]));
    for (int i = 0; i < n; ++i) {
      Jet c(n, cap);
      for (int j = 0; j < n; ++j) c += linv(i, j) * rhs[j];
      psi[i] = std::move(c);
    }
  }
  return JetMap::from_components(psi);
}

JetMap invert(const JetMap& phi, RadiusLedger& ledger) {
  ledger.charge_invert(phi);
  return invert(phi);
}

JetMap time1_flow(const Jet& g, const PoissonBivector& pi, FlowOptions opts) {
  if (g.nvars() != pi.dim()) throw Error(ErrorCode::DimensionMismatch, "flow arity");
  const int n = pi.dim();
  const int cap = std::max(g.degcap(), pi.degcap());
  const std::vector<Jet> field = hamiltonian_vf(g, pi);
  for (const Jet& x : field)
    if (std::abs(x[0]) > 1e-14)
      throw Error(ErrorCode::FlowNotFixingOrigin, "Hamiltonian vector field does not vanish at 0");
  std::vector<Jet> phi;
  phi.reserve(n);
  for (int i = 0; i < n; ++i) {
    Jet term = Jet::variable(n, cap, i);
    Jet sum = term;
    int k = 1;
    for (;; ++k) {
      if (k > opts.max_terms) {
        std::ostringstream os;
        os << "Lie series for component " << i << " did not converge in " << opts.max_terms
           << " terms";
        throw Error(ErrorCode::SeriesNotConverged, os.str());
      }
      term = bracket(g, term, pi);
      term *= 1.0 / k;
      if (term.max_abs_coeff() <= opts.tol * std::max(1.0, sum.max_abs_coeff())) break;
      sum += term;
    }
    phi.push_back(sum.with_degcap(cap));
  }
  return JetMap::from_components(phi);
}

MomentumMap pullback(const MomentumMap& mu, const JetMap& phi) {
  const int cap = std::max(mu.degcap(), phi.degcap());
  const Substitution sub(phi.components(), cap);
  MomentumMap out{mu.algebra, {}};
  for (const Jet& c : mu.components) out.components.push_back(sub.apply(c));
  return out;
}

MomentumMap pullback(const MomentumMap& mu, const JetMap& phi, RadiusLedger& ledger) {
  ledger.charge_compose(phi, "pullback");
  return pullback(mu, phi);
}

double poisson_defect(const JetMap& phi, const PoissonBivector& pi, int floor) {
  if (phi.nvars() != pi.dim()) throw Error(ErrorCode::DimensionMismatch, "Poisson defect arity");
  const int cap = std::max(phi.degcap(), pi.degcap());
  const Substitution sub(phi.components(), cap);
  const std::vector<Jet> comps = phi.components();
  double worst = 0.0;
  for (int i = 0; i < pi.dim(); ++i)
    for (int j = i + 1; j < pi.dim(); ++j) {
      const Jet d = bracket(comps[i], comps[j], pi) - sub.apply(pi.entry(i, j));
      worst = std::max(worst, d.max_abs_coeff_upto(floor));
    }
  return worst;
}

double map_distance(const JetMap& a, const JetMap& b, int floor) {
  if (a.nvars() != b.nvars()) throw Error(ErrorCode::DimensionMismatch, "map arity");
  double worst = 0.0;
  for (int i = 0; i < a.nvars(); ++i)
    worst = std::max(worst, (a.displacement()[i] - b.displacement()[i]).max_abs_coeff_upto(floor));
  return worst;
}

}  // namespace nmjet
