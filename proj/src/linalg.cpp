#include "concavelift/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace clift::la {

CMatrix adjoint(const CMatrix& m) { return m.adjoint(); }

bool all_finite(const CMatrix& m) { return m.allFinite(); }

double op_norm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.isZero(0.0)) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es;
  // ||m||^2 = lambda_max(m* m); cheaper and more accurate than full SVD here.
  if (m.rows() >= m.cols()) {
    es.compute(CMatrix(m.adjoint() * m), Eigen::EigenvaluesOnly);
  } else {
    es.compute(CMatrix(m * m.adjoint()), Eigen::EigenvaluesOnly);
  }
  double l = es.eigenvalues().maxCoeff();
  return l > 0.0 ? std::sqrt(l) : 0.0;
}

double smallest_singular_value(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es;
  if (m.rows() >= m.cols()) {
    es.compute(CMatrix(m.adjoint() * m), Eigen::EigenvaluesOnly);
  } else {
    es.compute(CMatrix(m * m.adjoint()), Eigen::EigenvaluesOnly);
  }
  double l = es.eigenvalues().minCoeff();
  return l > 0.0 ? std::sqrt(l) : 0.0;
}

bool is_hermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return op_norm(m - m.adjoint()) <= tol * std::max(1.0, op_norm(m));
}

namespace {

// Deterministic phase: rotate each eigenvector so its largest-magnitude entry
// is real and positive.
void normalize_phases(CMatrix& u) {
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      double a = std::abs(u(i, j));
      if (a > best + 1e-14) {
        best = a;
        imax = i;
      }
    }
    Complex v = u(imax, j);
    if (std::abs(v) > 0.0) u.col(j) *= std::conj(v) / std::abs(v);
  }
}

}  // namespace

HermEig herm_eig(const CMatrix& m, double tol) {
  if (m.rows() != m.cols())
    fail(ErrorCode::NotHermitian, "matrix is not square");
  if (!is_hermitian(m, tol))
    fail(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");
  CMatrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
  HermEig out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  normalize_phases(out.vectors);
  return out;
}

bool is_psd(const CMatrix& m, double tol) {
  HermEig e = herm_eig(m, tol);
  if (e.values.size() == 0) return true;
  return e.values.minCoeff() >= -tol * std::max(1.0, op_norm(m));
}

CMatrix herm_sqrt(const CMatrix& m, double tol) {
  HermEig e = herm_eig(m, tol);
  double scale = std::max(1.0, e.values.size() ? std::abs(e.values.cwiseAbs().maxCoeff()) : 0.0);
  if (e.values.size() && e.values.minCoeff() < -tol * scale)
    fail(ErrorCode::NotPSD, "herm_sqrt requires a PSD matrix");
  RVector r = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * r.asDiagonal() * e.vectors.adjoint();
}

CMatrix inverse(const CMatrix& m, double tol) {
  if (m.rows() != m.cols())
    fail(ErrorCode::Singular, "inverse requires a square matrix");
  if (smallest_singular_value(m) <= tol)
    fail(ErrorCode::Singular, "smallest singular value below threshold");
  return m.inverse();
}

CMatrix pseudo_inverse_psd(const CMatrix& m, double tol) {
  HermEig e = herm_eig(m);
  double scale = std::max(1.0, e.values.size() ? e.values.cwiseAbs().maxCoeff() : 0.0);
  RVector inv = e.values;
  for (Eigen::Index i = 0; i < inv.size(); ++i)
    inv[i] = e.values[i] > tol * scale ? 1.0 / e.values[i] : 0.0;
  return e.vectors * inv.asDiagonal() * e.vectors.adjoint();
}

namespace {

CMatrix eig_span(const CMatrix& m, double tol, bool kernel_side) {
  HermEig e = herm_eig(m);
  double cut = tol * std::max(1.0, op_norm(m));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < e.values.size(); ++i) {
    bool in_kernel = std::abs(e.values[i]) <= cut;
    if (in_kernel == kernel_side) cols.push_back(i);
  }
  CMatrix b(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) b.col(static_cast<Eigen::Index>(j)) = e.vectors.col(cols[j]);
  return b;
}

}  // namespace

CMatrix kernel_projector(const CMatrix& m, double tol) {
  CMatrix b = eig_span(m, tol, true);
  return b * b.adjoint();
}

CMatrix range_basis(const CMatrix& m, double tol) { return eig_span(m, tol, false); }

CMatrix kernel_basis(const CMatrix& m, double tol) { return eig_span(m, tol, true); }

}  // namespace clift::la
