#pragma once

// Dense complex linear algebra used throughout: Hermitian eigendecomposition
// and the Moore-Penrose pseudo-inverse. Thin contracts over Eigen's solvers.

#include "vsa/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>
#include <vector>

namespace vsa {

template <typename Real>
struct HermitianEig {
  RVector<Real> values;   // descending
  CMatrix<Real> vectors;  // column i pairs with values(i)
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(std::real(a(i, j))) || !std::isfinite(std::imag(a(i, j)))) return false;
  return true;
}

template <typename Real>
Real max_abs(const CMatrix<Real>& a) {
  return a.size() == 0 ? Real(0) : a.cwiseAbs().maxCoeff();
}

/// Eigendecomposition A = V diag(values) V^H of a Hermitian matrix, with the
/// eigenvalues in descending order. Equal eigenvalues keep the solver's
/// relative order.
template <typename Real>
HermitianEig<Real> hermitian_eig(const CMatrix<Real>& a) {
  if (a.rows() != a.cols()) throw ContractError("hermitian_eig: matrix is not square");
  if (!all_finite(a)) throw ContractError("hermitian_eig: non-finite entry");
  const Real scale = max_abs(a);
  if ((a - a.adjoint()).cwiseAbs().maxCoeff() > Real(1e-8) * scale)
    throw ContractError("hermitian_eig: matrix is not Hermitian");

  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(a);
  if (solver.info() != Eigen::Success) throw ContractError("hermitian_eig: solver did not converge");

  const auto n = a.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return ev(i) > ev(j); });

  HermitianEig<Real> out{RVector<Real>(n), CMatrix<Real>(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = ev(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

/// Moore-Penrose pseudo-inverse. Singular values at or below
/// `rel_tol * sigma_max` are treated as zero; an all-zero input yields the
/// all-zero transpose-shaped matrix.
template <typename Real>
CMatrix<Real> pseudo_inverse(const CMatrix<Real>& a, Real rel_tol = Real(1e-12)) {
  if (!(rel_tol > Real(0) && rel_tol < Real(1)))
    throw ContractError("pseudo_inverse: tolerance must lie in (0, 1)");
  if (!all_finite(a)) throw ContractError("pseudo_inverse: non-finite entry");
  CMatrix<Real> out = CMatrix<Real>::Zero(a.cols(), a.rows());
  if (a.size() == 0) return out;

  Eigen::JacobiSVD<CMatrix<Real>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == Real(0)) return out;
  const Real cutoff = rel_tol * s(0);
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) <= cutoff) break;
    out.noalias() += (svd.matrixV().col(k) / s(k)) * svd.matrixU().col(k).adjoint();
  }
  return out;
}

/// Number of singular values above `rel_tol * sigma_max`.
template <typename Real>
Eigen::Index numerical_rank(const CMatrix<Real>& a, Real rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix<Real>> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == Real(0)) return 0;
  return (s.array() > rel_tol * s(0)).count();
}

}  // namespace vsa
