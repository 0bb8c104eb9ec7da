#pragma once

#include <Eigen/Dense>

#include "concavelift/errors.hpp"

namespace clift::la {

using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Complex = std::complex<double>;

// Default tolerances. Constructions stack 3-4 matrix factorizations; each
// layer gets a decade of headroom over the previous one.
struct Tol {
  static constexpr double eig = 1e-12;
  static constexpr double rank = 1e-9;
  static constexpr double identity = 1e-8;
};

struct HermEig {
  RVector values;   // ascending
  CMatrix vectors;  // unitary, columns match values
};

CMatrix adjoint(const CMatrix& m);

// Frobenius-free operator (spectral) norm: largest singular value.
double op_norm(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol = Tol::identity);

// Eigendecomposition of a Hermitian matrix, with deterministic ordering and
// phase normalization so decompositions are reproducible run to run.
// Throws NotHermitian when the input fails the symmetry precondition.
HermEig herm_eig(const CMatrix& m, double tol = Tol::identity);

bool is_psd(const CMatrix& m, double tol = Tol::identity);

// PSD square root; eigenvalues below zero (round-off) are clamped before
// rooting. Throws NotPSD.
CMatrix herm_sqrt(const CMatrix& m, double tol = Tol::identity);

// Inverse of a square matrix whose smallest singular value exceeds tol.
CMatrix inverse(const CMatrix& m, double tol = Tol::rank);

// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix with relative
// eigenvalue cutoff tol.
CMatrix pseudo_inverse_psd(const CMatrix& m, double tol = Tol::rank);

// Orthogonal projector onto the numerical kernel of a Hermitian PSD matrix.
CMatrix kernel_projector(const CMatrix& m, double tol = Tol::rank);

// Orthonormal basis (columns) of the numerical range of a Hermitian PSD
// matrix: eigenvectors with eigenvalue > tol * max(1, ||m||).
CMatrix range_basis(const CMatrix& m, double tol = Tol::rank);

// Kernel-side counterpart of range_basis.
CMatrix kernel_basis(const CMatrix& m, double tol = Tol::rank);

double smallest_singular_value(const CMatrix& m);

bool all_finite(const CMatrix& m);

}  // namespace clift::la
