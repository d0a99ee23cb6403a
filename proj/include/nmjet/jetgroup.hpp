#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nmjet/jet.hpp"
#include "nmjet/jetspace.hpp"
#include "nmjet/poisson.hpp"

namespace nmjet {

/// Local diffeomorphism Id + chi fixing the origin, as n jets chi_i with chi_i(0) = 0.
class JetMap {
 public:
  /// The identity map.
  JetMap(int nvars, int degcap);

  static JetMap identity(int nvars, int degcap) { return JetMap(nvars, degcap); }
  /// Throws BadInput if some chi_i(0) != 0, DimensionMismatch on arity errors.
  static JetMap from_displacement(std::vector<Jet> chi);
  /// Map with components phi_i (so chi_i = phi_i - x_i).
  static JetMap from_components(const std::vector<Jet>& phi);

  int nvars() const noexcept { return nvars_; }
  int degcap() const noexcept { return degcap_; }

  const std::vector<Jet>& displacement() const noexcept { return chi_; }
  /// x_i + chi_i.
  Jet component(int i) const;
  std::vector<Jet> components() const;

  /// Jacobian at the origin, Id + D chi(0).
  Eigen::MatrixXd linear_part() const;
  /// ||chi||_{k,r} (max over components).
  double displacement_norm(NormParams p) const { return ck_norm(std::span<const Jet>(chi_), p); }
  bool is_identity(double tol = 0.0) const;

 private:
  int nvars_;
  int degcap_;
  std::vector<Jet> chi_;
};

struct ShrinkEvent {
  std::string op;
  double from = 0.0;
  double to = 0.0;
  double norm = 0.0;  // the ||.||_{1,rho} that was charged
};

/// Bookkeeping of the shrinking domain. Composition with an inner map Id + xi
/// costs rho' = rho (1 - c ||xi||_{1,rho}); inversion of Id + chi costs
/// rho' = rho (1 - c ||chi||_{1,rho} / 2).
class RadiusLedger {
 public:
  explicit RadiusLedger(double radius = 1.0, double c = 2.0, double floor = 0.5);

  double radius() const noexcept { return radius_; }
  double c() const noexcept { return c_; }
  double floor() const noexcept { return floor_; }
  const std::vector<ShrinkEvent>& events() const noexcept { return events_; }

  /// Radius after composing with the inner map `inner`; RadiusExhausted below the floor.
  double charge_compose(const JetMap& inner, const std::string& op = "compose");
  /// SmallnessViolated if ||chi||_{1,rho} >= 1/c; RadiusExhausted below the floor.
  double charge_invert(const JetMap& phi);

 private:
  double charge(const std::string& op, double norm, double factor);

  double radius_;
  double c_;
  double floor_;
  std::vector<ShrinkEvent> events_;
};

/// Precomputed substitution f -> f o y for a fixed tuple y of n jets without
/// constant terms. Monomial images are built once and reused.
class Substitution {
 public:
  Substitution(std::vector<Jet> y, int degcap);
  Jet apply(const Jet& f) const;
  int degcap() const noexcept { return degcap_; }

 private:
  int degcap_;
  BasisPtr basis_;
  std::vector<Jet> images_;
};

/// f o phi truncated at max(cap f, cap phi). Exact through that degree.
Jet substitute(const Jet& f, const JetMap& phi);

/// phi o psi. Exact through the cap since psi fixes the origin.
JetMap compose(const JetMap& phi, const JetMap& psi);
/// phi o psi, charging the ledger for the inner map psi.
JetMap compose(const JetMap& phi, const JetMap& psi, RadiusLedger& ledger);

/// Two-sided inverse through the cap. NotInvertible for a singular linear part.
JetMap invert(const JetMap& phi);
/// Inverse with the radius law; SmallnessViolated, RadiusExhausted.
JetMap invert(const JetMap& phi, RadiusLedger& ledger);

struct FlowOptions {
  int max_terms = 200;
  double tol = 1e-14;
};

/// Time-1 flow of X_g by the Lie series x_i + sum_k X_g^k(x_i)/k!.
/// FlowNotFixingOrigin if X_g(0) != 0; SeriesNotConverged after max_terms.
JetMap time1_flow(const Jet& g, const PoissonBivector& pi, FlowOptions opts = {});

/// Right action mu . phi = mu o phi.
MomentumMap pullback(const MomentumMap& mu, const JetMap& phi);
MomentumMap pullback(const MomentumMap& mu, const JetMap& phi, RadiusLedger& ledger);

/// max_{i<j} max coefficient of degree <= floor of {phi_i, phi_j} - Pi_ij o phi.
/// Zero exactly for Poisson maps.
double poisson_defect(const JetMap& phi, const PoissonBivector& pi, int floor);

/// max_i max coefficient of degree <= floor of (a_i - b_i).
double map_distance(const JetMap& a, const JetMap& b, int floor);

}  // namespace nmjet
