#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nmjet/exec.hpp"
#include "nmjet/jet.hpp"
#include "nmjet/jetspace.hpp"
#include "nmjet/lie_algebra.hpp"
#include "nmjet/poisson.hpp"

namespace nmjet {

/// Strictly increasing q-tuples of {0, ..., m-1} in lexicographic order.
std::vector<std::vector<int>> increasing_tuples(int m, int q);

/// Alternating q-linear map g^q -> jets, stored on increasing tuples only.
class Cochain {
 public:
  Cochain(LieAlgebraPtr algebra, int q, int nvars, int degcap);

  /// q = 0 cochain holding f.
  static Cochain from_function(LieAlgebraPtr algebra, const Jet& f);
  /// q = 1 cochain with alpha(xi_i) = components[i].
  static Cochain from_components(LieAlgebraPtr algebra, std::vector<Jet> components);

  int degree() const noexcept { return q_; }
  int nvars() const noexcept { return nvars_; }
  int degcap() const noexcept { return degcap_; }
  const LieAlgebraPtr& algebra() const noexcept { return algebra_; }

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<int>& tuple(std::size_t idx) const noexcept { return tuples_[idx]; }
  const Jet& value(std::size_t idx) const noexcept { return values_[idx]; }
  Jet& value(std::size_t idx) noexcept { return values_[idx]; }
  const std::vector<Jet>& values() const noexcept { return values_; }

  /// Index of an increasing tuple; throws IndexOutOfRange if absent.
  std::size_t index_of(std::span<const int> increasing) const;
  /// Value on xi_{i_1} ^ ... ^ xi_{i_q} for arbitrary indices (sign of the
  /// sorting permutation applied; zero on repeated indices).
  Jet evaluate(std::span<const int> indices) const;

  /// Max over values of ck_norm.
  double norm(NormParams p) const;

  Cochain& operator+=(const Cochain& other);
  Cochain& operator-=(const Cochain& other);

 private:
  LieAlgebraPtr algebra_;
  int q_;
  int nvars_;
  int degcap_;
  std::vector<std::vector<int>> tuples_;
  std::vector<Jet> values_;
};

Cochain operator+(Cochain a, const Cochain& b);
Cochain operator-(Cochain a, const Cochain& b);

/// rho_{xi_i}(h) = {lambda_i, h}.
Jet rho(int i, const Jet& h, const MomentumMap& lambda, const PoissonBivector& pi);

/// Chevalley-Eilenberg differential for the representation rho:
///   (d w)(x_0..x_q) = sum_a (-1)^a rho_{x_a} w(..^x_a..)
///                   + sum_{a<b} (-1)^{a+b} w([x_a,x_b], ..^x_a..^x_b..).
/// Throws DegreeTooHigh for q > 2.
Cochain delta(const Cochain& c, const MomentumMap& lambda, const PoissonBivector& pi);

/// Matrix of rho_{xi_i} on homogeneous polynomials of degree d (columns indexed
/// by the degree-d monomials). Requires linear lambda and pi.
Eigen::MatrixXd rho_block(int i, int d, const MomentumMap& lambda, const PoissonBivector& pi);

/// Gram matrix of the degree-d monomials under the L2 inner product on the unit ball.
Eigen::MatrixXd monomial_gram(int nvars, int d);

struct BlockDiagnostics {
  int degree = 0;
  std::size_t dim_c0 = 0, dim_c1 = 0, dim_c2 = 0, dim_c3 = 0;
  int rank_d0 = 0, rank_d1 = 0, rank_d2 = 0;
  /// Cohomology dimensions from rank accounting.
  int h0 = 0, h1 = 0, h2 = 0;
  double d1d0_residual = 0.0, d2d1_residual = 0.0;
  double homotopy_c1_residual = 0.0, homotopy_c2_residual = 0.0;
  double laplacian1_min_eig = 0.0, laplacian2_min_eig = 0.0;
};

/// One homogeneous degree of the complex. Coordinates of a q-cochain are
/// tuple-major: entry t * N + j is the coefficient of monomial j on tuple t.
struct DegreeBlock {
  int degree = 0;
  std::size_t monomials = 0;
  Eigen::MatrixXd d0, d1, d2;
  Eigen::MatrixXd h0, h1, h2;
  BlockDiagnostics diagnostics;
};

/// Per-degree differentials and homotopy operators for the reference momentum
/// map lambda. h_{q-1} = d_{q-1}^* Lap_q^{-1} (q = 1, 2) and h_2 = d_2^+, with
/// adjoints taken in the L2(B_1) inner product. Immutable after build().
class HomotopySet {
 public:
  /// Throws NotLinear if lambda or pi is not linear, WhiteheadViolation if a
  /// Laplacian on C^1 or C^2 is singular.
  static HomotopySet build(const MomentumMap& lambda, const PoissonBivector& pi, int degcap,
                           Exec exec = Exec::serial);

  int degcap() const noexcept { return degcap_; }
  int nvars() const noexcept { return nvars_; }
  const LieAlgebraPtr& algebra() const noexcept { return algebra_; }
  const DegreeBlock& block(int d) const { return blocks_.at(static_cast<std::size_t>(d)); }
  const std::vector<DegreeBlock>& blocks() const noexcept { return blocks_; }

  /// h_{q-1} applied blockwise to a q-cochain, q in {1, 2, 3}; DegreeMismatch otherwise.
  Cochain apply_h(const Cochain& c) const;
  /// delta_q via the block matrices, q in {0, 1, 2}.
  Cochain apply_delta(const Cochain& c) const;

  /// H(f) = h_0(mu - lambda) as a function.
  Jet correction(const std::vector<Jet>& difference) const;

 private:
  Cochain apply(const Cochain& c, int out_q, const Eigen::MatrixXd DegreeBlock::*op) const;

  int degcap_ = 0;
  int nvars_ = 0;
  LieAlgebraPtr algebra_;
  std::vector<DegreeBlock> blocks_;
};

/// s = [n/2] + 1.
int derivative_shift(int n);

struct HomotopyBoundEntry {
  int j = 0;         // h_j
  int k = 0;         // smoothness order of the output norm
  double r = 1.0;
  double constant = 0.0;  // sup ||h_j S||_{k,r} / ||S||_{k+s,r}
  std::size_t samples = 0;
  std::size_t unbounded = 0;
};

struct HomotopyBoundReport {
  int shift = 0;
  std::vector<HomotopyBoundEntry> entries;
  /// max_r C / min_r C for (j, k).
  double radius_spread(int j, int k) const;
};

/// Randomized sweep of ||h_j(S)||_{k,r} <= C_k ||S||_{k+s,r} for j in {0,1},
/// k in {1,2,3}, r in {0.25, 0.5, 1}.
HomotopyBoundReport homotopy_norm_bound(const HomotopySet& hs, int trials, std::uint64_t seed,
                                        Exec exec = Exec::serial);

}  // namespace nmjet
