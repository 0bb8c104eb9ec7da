#pragma once

#include "concavelift/classify.hpp"

namespace clift::verify {

struct Clause {
  std::string id;
  bool verdict = false;
  double residual = 0.0;
};

struct TheoremVerdict {
  std::string theorem_id;
  std::vector<Clause> clauses;
  bool agreement = false;  // all clause verdicts share one truth value
  double tol = 0.0;
  int window_budget = 0;
  std::vector<std::string> notes;

  void push(const std::string& id, bool verdict, double residual);
  void finalize();  // computes agreement
  const Clause& at(const std::string& id) const;
};

// Theorem 2.3: Delta_T-regularity <=> canonical block form <=> regular
// 2-isometric lifting with sigma^{-2} Delta_S a projection.
TheoremVerdict check_thm23(const Operator& t, const WindowSpec& w, int depth,
                           double tol = la::Tol::identity);

// Theorem 3.1: the Cauchy dual of a Delta_T-regular concave operator is a
// left-invertible D^2-regular 2-hypercontraction; round-trip through the
// inverse map recovers T.
TheoremVerdict check_thm31(const Operator& t, const WindowSpec& w, int samples,
                           double tol = la::Tol::identity, unsigned seed = 1);

// Proposition 3.3: T m-hyperexpansive <=> compression to range(Delta_T)
// (m-1)-hypercontractive.
TheoremVerdict check_prop33(const Operator& t, const WindowSpec& w, int m,
                            double tol = la::Tol::identity);

// Theorem 3.4 at finite order M (subnormality surrogates; clauses labeled as
// order-M hypercontractivity, never as subnormality).
TheoremVerdict check_thm34(const Operator& t, const WindowSpec& w, int order,
                           double tol = la::Tol::identity);

// Theorem 4.1 six-way equivalence plus the unconditional first assertion.
TheoremVerdict check_thm41(const Operator& t, const WindowSpec& w, int mmax,
                           double tol = la::Tol::identity);

// Theorem 4.6: A_n-regularity chain.
TheoremVerdict check_thm46(const Operator& t, const WindowSpec& w, int nmax,
                           double tol = la::Tol::identity);

// Corollary 4.4(b): with sigma^{-1} Z_hat isometric, regularity <=>
// quasinormality of the compression.
TheoremVerdict check_cor44b(const Operator& t, const WindowSpec& w,
                            double tol = la::Tol::identity);

}  // namespace clift::verify
