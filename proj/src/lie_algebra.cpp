#include "nmjet/lie_algebra.hpp"

#include <cmath>
#include <sstream>

#include "nmjet/errors.hpp"

namespace nmjet {

namespace {

std::size_t at(int m, int i, int j, int p) {
  return (static_cast<std::size_t>(i) * m + j) * m + p;
}

}  // namespace

Eigen::VectorXd LieAlgebra::bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (u[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double w = u[i] * v[j];
      if (w == 0.0) continue;
      for (int p = 0; p < dim_; ++p) out[p] += w * c(i, j, p);
    }
  }
  return out;
}

Eigen::MatrixXd killing_form(int dim, const std::vector<double>& constants) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double sum = 0.0;
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
          sum += constants[at(dim, i, a, b)] * constants[at(dim, j, b, a)];
      k(i, j) = sum;
    }
  return k;
}

JacobiReport jacobi_residual(int dim, const std::vector<double>& constants) {
  JacobiReport report;
  auto c = [&](int i, int j, int p) { return constants[at(dim, i, j, p)]; };
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int k = 0; k < dim; ++k)
        for (int l = 0; l < dim; ++l) {
          double sum = 0.0;
          for (int m = 0; m < dim; ++m)
            sum += c(i, j, m) * c(m, k, l) + c(j, k, m) * c(m, i, l) + c(k, i, m) * c(m, j, l);
          if (std::abs(sum) > report.residual) {
            report.residual = std::abs(sum);
            report.worst = {i, j, k, l};
          }
        }
  return report;
}

LieAlgebra validate_structure(int dim, std::vector<double> constants, std::string name) {
  if (dim <= 0)
    throw Error(ErrorCode::BadInput, "Lie algebra dimension must be positive");
  const std::size_t expected = static_cast<std::size_t>(dim) * dim * dim;
  if (constants.size() != expected)
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(expected) + " structure constants, got " +
                    std::to_string(constants.size()));
  for (double v : constants)
    if (!std::isfinite(v)) throw Error(ErrorCode::BadInput, "structure constants must be finite");

  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int p = 0; p < dim; ++p)
        if (std::abs(constants[at(dim, i, j, p)] + constants[at(dim, j, i, p)]) > 1e-12) {
          std::ostringstream os;
          os << "c[" << i << "][" << j << "][" << p << "] != -c[" << j << "][" << i << "][" << p
             << "]";
          throw Error(ErrorCode::NotAntisymmetric, os.str());
        }

  const JacobiReport jac = jacobi_residual(dim, constants);
  if (jac.residual > 1e-12) {
    std::ostringstream os;
    os << "worst quadruple (" << jac.worst[0] << "," << jac.worst[1] << "," << jac.worst[2] << ","
       << jac.worst[3] << ") residual " << jac.residual;
    throw Error(ErrorCode::JacobiViolation, os.str());
  }

  Eigen::MatrixXd k = killing_form(dim, constants);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (k + k.transpose()));
  const double top = eig.eigenvalues().maxCoeff();
  if (!(top < -1e-10)) {
    std::ostringstream os;
    os << "largest Killing eigenvalue " << top << " (algebra is not compact semisimple)";
    throw Error(ErrorCode::KillingNotNegativeDefinite, os.str());
  }

  LieAlgebra g;
  g.dim_ = dim;
  g.constants_ = std::move(constants);
  g.killing_ = std::move(k);
  g.orthonormal_ = (g.killing_ + Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-12;
  g.name_ = std::move(name);
  return g;
}

Eigen::MatrixXd orthonormal_basis_change(const LieAlgebra& g) {
  const int m = g.dim();
  Eigen::LLT<Eigen::MatrixXd> llt(-g.killing());
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::KillingNotNegativeDefinite, "-K is not positive definite");
  // New basis e'_a = sum_i T(i,a) e_i with T^T (-K) T = Id.
  const Eigen::MatrixXd l = llt.matrixL();
  return l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(m, m));
}

LieAlgebra orthonormalize(const LieAlgebra& g) {
  const int m = g.dim();
  const Eigen::MatrixXd minus_k = -g.killing();
  if ((minus_k - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-12) {
    LieAlgebra out = g;
    out.orthonormal_ = true;
    return out;
  }
  const Eigen::MatrixXd t = orthonormal_basis_change(g);
  const Eigen::MatrixXd t_inv = t.inverse();

  std::vector<double> out(static_cast<std::size_t>(m) * m * m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Eigen::VectorXd br = g.bracket(t.col(a), t.col(b));
      Eigen::VectorXd coords = t_inv * br;
      for (int p = 0; p < m; ++p) out[at(m, a, b, p)] = coords[p];
    }
  // Rounding can leave 1e-17 asymmetries; restore exact antisymmetry.
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b)
      for (int p = 0; p < m; ++p) {
        const double v = 0.5 * (out[at(m, a, b, p)] - out[at(m, b, a, p)]);
        out[at(m, a, b, p)] = v;
        out[at(m, b, a, p)] = -v;
      }
  LieAlgebra result = validate_structure(m, std::move(out), g.name());
  result.orthonormal_ = true;
  return result;
}

double total_antisymmetry_defect(const LieAlgebra& g) {
  double worst = 0.0;
  const int m = g.dim();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int p = 0; p < m; ++p) worst = std::max(worst, std::abs(g.c(i, j, p) + g.c(i, p, j)));
  return worst;
}

LieAlgebra builtin(const std::string& name) {
  const int m = 3;
  std::vector<double> c(27, 0.0);
  auto eps = [&](double scale) {
    const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
    for (const auto& t : cyc) {
      c[at(m, t[0], t[1], t[2])] = scale;
      c[at(m, t[1], t[0], t[2])] = -scale;
    }
  };
  if (name == "so3") {
    eps(1.0);  // [L_i, L_j] = eps_ijk L_k
  } else if (name == "su2") {
    eps(-2.0);  // basis i*sigma_k: [i s_i, i s_j] = -2 eps_ijk i s_k
  } else {
    throw Error(ErrorCode::UnknownAlgebra, "unknown builtin algebra '" + name + "'");
  }
  return orthonormalize(validate_structure(m, std::move(c), name));
}

}  // namespace nmjet
