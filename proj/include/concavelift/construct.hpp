#pragma once

#include "concavelift/verify.hpp"

namespace clift::construct {

using la::CMatrix;

// Canonical block decomposition of a Delta_T-regular concave operator along
// H = N(Delta_T) (+) closure(R(Delta_T)).
struct CanonicalBlocks {
  Operator V;      // isometry on the kernel side
  Operator Z;      // injective contraction, range side -> kernel side
  Operator Z_hat;  // sigma * Z
  Operator T_hat;  // contraction on the range side
  double sigma = 0.0;
  CMatrix delta0;        // Delta_T restricted to its range closure
  CMatrix basis_kernel;  // recorded orthonormal bases (columns)
  CMatrix basis_range;
  std::vector<std::pair<std::string, double>> residuals;

  double residual(const std::string& name) const;
};

struct LiftingResult {
  Operator S;
  Operator J;  // embedding of H into the ambient space
  CMatrix W;   // restriction of S to the complement of J(H)
  CMatrix X;   // complement block mapping H into it
  GradedSpace ambient;
  WindowSpec window;
  double covariance = 0.0;
  std::string tag;
  bool degenerate = false;
  std::vector<std::pair<std::string, double>> residuals;

  double residual(const std::string& name) const;
};

struct DualBlocks {
  Operator V;
  Operator Zp;   // Z' = sigma Z
  CMatrix Dinv;  // Delta^{-1} on the range side
  Operator T0p;  // T'_0 = T_hat Delta^{-1}
  Operator T1p;  // T'_1 = Z_hat Delta^{-1}
  CMatrix basis_kernel;
  CMatrix basis_range;
  std::vector<std::pair<std::string, double>> residuals;

  double residual(const std::string& name) const;
};

// Data of an extension in Brownian-type block form; only verified here, never
// constructed (the construction relies on non-constructive ingredients).
struct BrownianForm {
  CMatrix C;    // contraction on M0
  CMatrix E;    // contraction M1 -> M0
  CMatrix U;    // unitary on M1
  CMatrix J_C;  // isometry on range(D_C), into a common auxiliary space
  CMatrix J_E;  // isometry on range(D_E), same auxiliary space
  CMatrix J_H;  // embedding of the extended operator's space into M0 (+) M1
  double delta = 0.0;
};

// Theorem 2.1(i): two-step shift-tower lifting with
// cov(S) = sqrt(2) max{1, ||Delta_T||^{1/2}}.
LiftingResult lift_basic(const Operator& t, const WindowSpec& w, int depth,
                         double tol = la::Tol::identity);

// Theorem 2.1(ii): minimal lifting from a caller-supplied invariant majorant
// A with T*AT = A, A >= Delta_T, ||A|| = ||Delta_T||.
LiftingResult lift_minimal(const Operator& t, const CMatrix& a, const WindowSpec& w, int depth,
                           double tol = la::Tol::identity);

CanonicalBlocks canonical_blocks(const Operator& t, const WindowSpec& w,
                                 double tol = la::Tol::identity);

// Theorem 2.3(iii): regular lifting with sigma^{-2} Delta_S an orthogonal
// projection, built from the canonical blocks and a minimal isometric lifting
// of T_hat.
LiftingResult lift_regular(const Operator& t, const WindowSpec& w, int depth,
                           double tol = la::Tol::identity);

// Minimal isometric lifting of a contraction: first column (C, D_C, 0, ...),
// subdiagonal identities, on the contraction's space plus a defect tower.
Operator schaffer_lift(const Operator& c, int depth, double tol = la::Tol::identity);

// T' = T (T*T)^{-1}; the inverse is a window-aware pseudo-inverse so the
// boundary-zero modes of a truncated tower do not poison it.
Operator cauchy_dual(const Operator& t, double tol = la::Tol::rank);

DualBlocks dual_blocks(const Operator& t, const WindowSpec& w, double tol = la::Tol::identity,
                       int samples = 100, unsigned seed = 7);

// Surjectivity direction of Theorem 3.1: recover the regular concave T with
// cauchy_dual(T) = c from a left-invertible D_C^2-regular 2-hypercontraction.
Operator inverse_dual(const Operator& c, const WindowSpec& w, double tol = la::Tol::identity);

struct RangeCompressions {
  Operator T_hat;  // compression of T to closure(R(Delta_T))
  Operator Z_hat;  // P_{N(Delta_T)} T restricted to closure(R(Delta_T))
  CMatrix basis_kernel;
  CMatrix basis_range;
};

RangeCompressions compress_to_range_delta(const Operator& t, const WindowSpec& w,
                                          double tol = la::Tol::identity);

verify::TheoremVerdict verify_brownian_form(const BrownianForm& bf, const Operator& t,
                                            const WindowSpec& w,
                                            double tol = la::Tol::identity);

}  // namespace clift::construct
