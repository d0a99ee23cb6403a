#pragma once

#include <span>
#include <vector>

#include "nmjet/monomials.hpp"

namespace nmjet {

/// Polynomial in n variables truncated at total degree degcap. Coefficients are
/// stored densely in MonomialBasis order; absent monomials are zero.
/// Variables are 0-based in code (x_0 ... x_{n-1}).
class Jet {
 public:
  Jet() = default;
  Jet(int nvars, int degcap);
  explicit Jet(BasisPtr basis);

  static Jet constant(int nvars, int degcap, double value);
  static Jet variable(int nvars, int degcap, int var);
  static Jet monomial(int nvars, int degcap, std::span<const int> alpha, double coeff = 1.0);

  int nvars() const noexcept { return basis_->nvars(); }
  int degcap() const noexcept { return basis_->degcap(); }
  const MonomialBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  bool valid() const noexcept { return basis_ != nullptr; }

  std::span<const double> coeffs() const noexcept { return coeffs_; }
  std::span<double> coeffs() noexcept { return coeffs_; }
  double operator[](std::size_t idx) const noexcept { return coeffs_[idx]; }
  double& operator[](std::size_t idx) noexcept { return coeffs_[idx]; }

  /// Zero for exponents above the cap.
  double coeff(std::span<const int> alpha) const;
  /// Throws IndexOutOfRange for exponents above the cap.
  void set_coeff(std::span<const int> alpha, double value);

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(double s) noexcept;

  double evaluate(std::span<const double> point) const;

  /// Lowest degree carrying a nonzero coefficient; degcap + 1 for the zero jet.
  int lowest_degree() const noexcept;
  /// Highest degree carrying a nonzero coefficient; -1 for the zero jet.
  int highest_degree() const noexcept;
  bool is_zero() const noexcept;

  Jet homogeneous_part(int d) const;
  /// Keeps degrees <= d (the cap is unchanged).
  Jet truncated(int d) const;
  /// Re-expresses in a basis with a different cap; higher terms are dropped.
  Jet with_degcap(int degcap) const;

  double max_abs_coeff() const noexcept;
  double max_abs_coeff_upto(int d) const noexcept;

 private:
  BasisPtr basis_;
  std::vector<double> coeffs_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
/// Truncated product; the result cap is the larger of the two caps.
Jet operator*(const Jet& a, const Jet& b);

/// Exact symbolic derivative d/dx_var.
Jet partial(const Jet& f, int var);

/// Brings two jets to a common basis (the larger cap). Throws DimensionMismatch
/// when the numbers of variables differ.
void require_same_nvars(const Jet& a, const Jet& b);

}  // namespace nmjet
