#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nmjet {

/// A real Lie algebra given by structure constants [e_i, e_j] = sum_p c(i,j,p) e_p.
/// Instances are only produced by validate_structure / orthonormalize / builtin,
/// so every LieAlgebra in circulation is antisymmetric, satisfies Jacobi and has a
/// negative definite Killing form.
class LieAlgebra {
 public:
  int dim() const noexcept { return dim_; }
  double c(int i, int j, int p) const noexcept {
    return constants_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + p];
  }
  const std::vector<double>& constants() const noexcept { return constants_; }
  const Eigen::MatrixXd& killing() const noexcept { return killing_; }
  bool orthonormal() const noexcept { return orthonormal_; }
  const std::string& name() const noexcept { return name_; }

  /// Coordinates of [u, v] for coordinate vectors u, v.
  Eigen::VectorXd bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;

 private:
  friend LieAlgebra validate_structure(int, std::vector<double>, std::string);
  friend LieAlgebra orthonormalize(const LieAlgebra&);

  int dim_ = 0;
  std::vector<double> constants_;
  Eigen::MatrixXd killing_;
  bool orthonormal_ = false;
  std::string name_;
};

using LieAlgebraPtr = std::shared_ptr<const LieAlgebra>;

/// K_ij = sum_{k,l} c(i,k,l) c(j,l,k), computed by direct summation.
Eigen::MatrixXd killing_form(int dim, const std::vector<double>& constants);

/// Worst violation of the Jacobi identity over all quadruples (i,j,k,l).
struct JacobiReport {
  double residual = 0.0;
  std::array<int, 4> worst{0, 0, 0, 0};
};
JacobiReport jacobi_residual(int dim, const std::vector<double>& constants);

/// Checks antisymmetry, Jacobi (1e-12) and negative definiteness of the Killing
/// form (all eigenvalues below -1e-10). Constants are c[(i*m + j)*m + p].
LieAlgebra validate_structure(int dim, std::vector<double> constants,
                              std::string name = "custom");

/// Basis change T = L^{-T} with -K = L L^T, so that -K' = Id. Returns the input
/// unchanged (flag set) when -K already equals Id to 1e-12.
LieAlgebra orthonormalize(const LieAlgebra& g);

/// The matrix T used by orthonormalize: column a holds e'_a in the old basis.
/// Brackets satisfy T [u, v]' = [T u, T v].
Eigen::MatrixXd orthonormal_basis_change(const LieAlgebra& g);

/// "so3" or "su2", validated and orthonormalized. Throws UnknownAlgebra otherwise.
LieAlgebra builtin(const std::string& name);

/// Largest |c(i,j,p) + c(i,p,j)|; zero for totally antisymmetric constants.
double total_antisymmetry_defect(const LieAlgebra& g);

}  // namespace nmjet
