#include "nmjet/jet.hpp"

#include <algorithm>
#include <cmath>

#include "nmjet/errors.hpp"

namespace nmjet {

Jet::Jet(int nvars, int degcap) : Jet(MonomialBasis::get(nvars, degcap)) {}

Jet::Jet(BasisPtr basis) : basis_(std::move(basis)), coeffs_(basis_->size(), 0.0) {}

Jet Jet::constant(int nvars, int degcap, double value) {
  Jet j(nvars, degcap);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int nvars, int degcap, int var) {
  if (var < 0 || var >= nvars)
    throw Error(ErrorCode::IndexOutOfRange, "variable index " + std::to_string(var));
  Jet j(nvars, degcap);
  if (degcap >= 1) j.coeffs_[1 + var] = 1.0;
  return j;
}

Jet Jet::monomial(int nvars, int degcap, std::span<const int> alpha, double coeff) {
  Jet j(nvars, degcap);
  j.set_coeff(alpha, coeff);
  return j;
}

double Jet::coeff(std::span<const int> alpha) const {
  const std::size_t idx = basis_->index_of(alpha);
  return idx == MonomialBasis::npos ? 0.0 : coeffs_[idx];
}

void Jet::set_coeff(std::span<const int> alpha, double value) {
  if (alpha.size() != static_cast<std::size_t>(nvars()))
    throw Error(ErrorCode::DimensionMismatch, "exponent arity does not match number of variables");
  const std::size_t idx = basis_->index_of(alpha);
  if (idx == MonomialBasis::npos)
    throw Error(ErrorCode::IndexOutOfRange, "exponent exceeds the degree cap");
  coeffs_[idx] = value;
}

void require_same_nvars(const Jet& a, const Jet& b) {
  if (a.nvars() != b.nvars())
    throw Error(ErrorCode::DimensionMismatch, "jets have " + std::to_string(a.nvars()) + " and " +
                                                  std::to_string(b.nvars()) + " variables");
}

Jet& Jet::operator+=(const Jet& other) {
  require_same_nvars(*this, other);
  if (other.degcap() > degcap()) *this = with_degcap(other.degcap());
  // Both bases are graded with identical ordering, so the prefix is shared.
  const std::size_t n = std::min(coeffs_.size(), other.coeffs_.size());
  for (std::size_t i = 0; i < n; ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  require_same_nvars(*this, other);
  if (other.degcap() > degcap()) *this = with_degcap(other.degcap());
  const std::size_t n = std::min(coeffs_.size(), other.coeffs_.size());
  for (std::size_t i = 0; i < n; ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) noexcept {
  for (double& c : coeffs_) c *= s;
  return *this;
}

double Jet::evaluate(std::span<const double> point) const {
  if (point.size() != static_cast<std::size_t>(nvars()))
    throw Error(ErrorCode::DimensionMismatch, "evaluation point has wrong dimension");
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0.0) continue;
    double term = coeffs_[i];
    auto alpha = basis_->exponent(i);
    for (int v = 0; v < nvars(); ++v)
      for (int e = 0; e < alpha[v]; ++e) term *= point[v];
    sum += term;
  }
  return sum;
}

int Jet::lowest_degree() const noexcept {
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0.0) return basis_->degree(i);
  return degcap() + 1;
}

int Jet::highest_degree() const noexcept {
  for (std::size_t i = coeffs_.size(); i-- > 0;)
    if (coeffs_[i] != 0.0) return basis_->degree(i);
  return -1;
}

bool Jet::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

Jet Jet::homogeneous_part(int d) const {
  Jet out(basis_);
  if (d < 0 || d > degcap()) return out;
  for (std::size_t i = basis_->degree_begin(d); i < basis_->degree_begin(d + 1); ++i)
    out.coeffs_[i] = coeffs_[i];
  return out;
}

Jet Jet::truncated(int d) const {
  Jet out(basis_);
  if (d < 0) return out;
  const std::size_t end = basis_->degree_begin(std::min(d, degcap()) + 1);
  std::copy(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(end), out.coeffs_.begin());
  return out;
}

Jet Jet::with_degcap(int new_cap) const {
  if (new_cap == degcap()) return *this;
  Jet out(nvars(), new_cap);
  const std::size_t n = std::min(coeffs_.size(), out.coeffs_.size());
  std::copy(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(n), out.coeffs_.begin());
  return out;
}

double Jet::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Jet::max_abs_coeff_upto(int d) const noexcept {
  if (d < 0) return 0.0;
  const std::size_t end = basis_->degree_begin(std::min(d, degcap()) + 1);
  double m = 0.0;
  for (std::size_t i = 0; i < end; ++i) m = std::max(m, std::abs(coeffs_[i]));
  return m;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet operator*(const Jet& a_in, const Jet& b_in) {
  require_same_nvars(a_in, b_in);
  const int cap = std::max(a_in.degcap(), b_in.degcap());
  const Jet a = a_in.with_degcap(cap);
  const Jet b = b_in.with_degcap(cap);
  Jet out(a.basis_ptr());
  const MonomialBasis& basis = a.basis();
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  auto oc = out.coeffs();
  const int b_low = b.lowest_degree();
  if (b_low > cap) return out;
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i] == 0.0) continue;
    const int room = cap - basis.degree(i);
    if (room < b_low) break;  // later monomials only have higher degree
    const std::size_t end = basis.degree_begin(room + 1);
    for (std::size_t j = basis.degree_begin(b_low); j < end; ++j) {
      if (bc[j] == 0.0) continue;
      oc[basis.product(i, j)] += ac[i] * bc[j];
    }
  }
  return out;
}

Jet partial(const Jet& f, int var) {
  if (var < 0 || var >= f.nvars())
    throw Error(ErrorCode::IndexOutOfRange, "partial derivative index " + std::to_string(var));
  Jet out(f.basis_ptr());
  const MonomialBasis& basis = f.basis();
  const auto fc = f.coeffs();
  auto oc = out.coeffs();
  for (std::size_t i = 1; i < fc.size(); ++i) {
    if (fc[i] == 0.0) continue;
    const auto d = basis.derivative(i, var);
    if (d.factor != 0.0) oc[d.target] += d.factor * fc[i];
  }
  return out;
}

}  // namespace nmjet
