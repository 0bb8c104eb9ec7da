#pragma once

#include <map>

#include "concavelift/operators.hpp"

namespace clift::classify {

using la::CMatrix;

struct PredicateResult {
  bool verdict = false;
  double residual = 0.0;
};

struct ClassificationReport {
  // insertion-ordered predicate -> result
  std::vector<std::pair<std::string, PredicateResult>> entries;
  double tol = 0.0;
  int window_budget = 0;
  double covariance = 0.0;  // ||Delta_T||^{1/2} on the window

  const PredicateResult& at(const std::string& name) const;
};

enum class Side { Expansive, Contractive };

struct HyperProfile {
  int order = 0;
  Side side = Side::Expansive;
  // per order m=1..M: min eigenvalue of the window-restricted -B_m (expansive
  // side) or B_m (contractive side); the order-m verdict is min_eig >= -tol.
  std::vector<double> bracket_min_eigs;
  std::vector<bool> verdicts;

  bool passes_upto(int m, double tol) const;
  bool all_pass(double tol) const;
};

// Delta_T = T*T - I.
Operator delta(const Operator& t);

// Omega_T = Delta_T - T* Delta_T T.
Operator omega(const Operator& t);

// B_A^m(T) = sum_{j=0}^m (-1)^j C(m,j) T*^j A T^j, binomials exact.
Operator bracket(const CMatrix& a, const Operator& t, int m);

// A_n(T) = -B_n(T); equals Delta_T at n = 1.
Operator a_n(const Operator& t, int n);

// Window-clamped PSD version of Delta_T (boundary rows dropped, negative
// round-off eigenvalues clamped). Budget 1.
CMatrix delta_windowed(const Operator& t, const WindowSpec& w);

bool is_concave(const Operator& t, const WindowSpec& w, double tol = la::Tol::identity);
bool is_two_isometry(const Operator& t, const WindowSpec& w, double tol = la::Tol::identity);
bool is_isometry(const Operator& t, const WindowSpec& w, double tol = la::Tol::identity);

double two_isometry_residual(const Operator& t, const WindowSpec& w);
double delta_regular_residual(const Operator& t, const WindowSpec& w);

HyperProfile hyper_profile(const Operator& t, const WindowSpec& w, int order,
                           double tol = la::Tol::identity, Side side = Side::Expansive);

bool is_delta_regular(const Operator& t, const WindowSpec& w, double tol = la::Tol::identity);

bool is_quasinormal(const Operator& t, double tol = la::Tol::identity);
double quasinormal_residual(const Operator& t);

bool is_hyponormal(const Operator& t, double tol = la::Tol::identity);

bool is_a_contraction(const Operator& t, const CMatrix& a, const WindowSpec& w,
                      double tol = la::Tol::identity, int a_budget = 0);

// Limit of T*^n A T^n on the window; requires the first iterates to be
// nonincreasing in the PSD order.
CMatrix asymptotic_limit(const Operator& t, const CMatrix& a, const WindowSpec& w,
                         double tol = la::Tol::identity, int max_iter = 200);

// Windowed covariance ||Delta_T||^{1/2}.
double covariance(const Operator& t, const WindowSpec& w);

// Orthogonal projector (full-size) onto the numerical kernel of the windowed
// Delta_{T^n}.
CMatrix delta_kernel_projector(const Operator& t, const WindowSpec& w, int n = 1,
                               double rank_tol = la::Tol::rank);

ClassificationReport classify_all(const Operator& t, const WindowSpec& w, int order,
                                  double tol = la::Tol::identity);

}  // namespace clift::classify
