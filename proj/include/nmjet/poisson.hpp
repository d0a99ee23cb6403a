#pragma once

#include <vector>

#include "nmjet/jet.hpp"
#include "nmjet/jetspace.hpp"
#include "nmjet/lie_algebra.hpp"

namespace nmjet {

/// Antisymmetric matrix of jets Pi_ij = {x_i, x_j}; only i < j is stored.
class PoissonBivector {
 public:
  PoissonBivector(int dim, int degcap);

  int dim() const noexcept { return dim_; }
  int degcap() const noexcept { return degcap_; }

  /// Pi_ij with the antisymmetric extension (Pi_ii = 0).
  Jet entry(int i, int j) const;
  /// Sets Pi_ij (and implicitly Pi_ji = -Pi_ij). Throws for i == j.
  void set_entry(int i, int j, const Jet& value);
  const std::vector<Jet>& upper() const noexcept { return upper_; }

  /// Every entry homogeneous of degree one.
  bool is_linear(double tol = 0.0) const;

 private:
  std::size_t slot(int i, int j) const;

  int dim_;
  int degcap_;
  std::vector<Jet> upper_;
};

/// Pi_ij = sum_k c(i,j,k) x_k on g*, so {x_i, x_j} = sum_k c_ij^k x_k.
PoissonBivector linear_poisson(const LieAlgebra& g, int degcap);

/// Max coefficient of the cyclic sums {{x_i,x_j},x_k} + {{x_j,x_k},x_i} + {{x_k,x_i},x_j}.
double jacobi_residual(const PoissonBivector& pi);

/// {f,g} = sum_{i<j} Pi_ij (d_i f d_j g - d_j f d_i g), truncated at the cap.
Jet bracket(const Jet& f, const Jet& g, const PoissonBivector& pi);

/// X_g with components X_i = {g, x_i}, so X_g(F) = {g, F}.
std::vector<Jet> hamiltonian_vf(const Jet& g, const PoissonBivector& pi);

/// max_{i<j} ck_norm(Pi_ij, p).
double bivector_norm(const PoissonBivector& pi, NormParams p);

/// Components mu_i = xi_i o mu in the algebra's basis.
struct MomentumMap {
  LieAlgebraPtr algebra;
  std::vector<Jet> components;

  int size() const noexcept { return static_cast<int>(components.size()); }
  int degcap() const noexcept { return components.empty() ? 0 : components.front().degcap(); }
};

/// lambda_i = x_i on g* (requires the ambient dimension to equal dim g).
MomentumMap identity_momentum_map(LieAlgebraPtr algebra, int degcap);

/// mu - lambda componentwise.
std::vector<Jet> difference(const MomentumMap& mu, const MomentumMap& lambda);

/// max_{i<j} ck_norm({mu_i, mu_j} - sum_p c_ij^p mu_p, (0, 1)).
double equivariance_residual(const MomentumMap& mu, const PoissonBivector& pi);

/// Throws NotMomentumMap when the equivariance residual exceeds tol.
void require_momentum_map(const MomentumMap& mu, const PoissonBivector& pi, double tol = 1e-9);

}  // namespace nmjet
