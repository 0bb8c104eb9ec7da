#include "concavelift/classify.hpp"

#include <cmath>

namespace clift::classify {

namespace {

int budget_unit(const Operator& t) { return std::max(1, t.boundary_depth); }

// Exact integer binomials, m <= 30.
unsigned long long binom(int m, int j) {
  if (j < 0 || j > m) return 0;
  unsigned long long r = 1;
  for (int k = 1; k <= j; ++k) r = r * static_cast<unsigned long long>(m - k + 1) / k;
  return r;
}

CMatrix mat_power(const CMatrix& m, int n) {
  CMatrix r = CMatrix::Identity(m.rows(), m.cols());
  for (int i = 0; i < n; ++i) r = m * r;
  return r;
}

}  // namespace

const PredicateResult& ClassificationReport::at(const std::string& name) const {
  for (const auto& [k, v] : entries)
    if (k == name) return v;
  fail(ErrorCode::InvalidArgument, "no predicate '" + name + "' in report");
}

bool HyperProfile::passes_upto(int m, double tol) const {
  for (int i = 0; i < m && i < static_cast<int>(bracket_min_eigs.size()); ++i)
    if (bracket_min_eigs[i] < -tol) return false;
  return true;
}

bool HyperProfile::all_pass(double tol) const { return passes_upto(order, tol); }

Operator delta(const Operator& t) {
  if (!t.square()) fail(ErrorCode::SpaceMismatch, "delta requires a square operator");
  CMatrix d = t.matrix.adjoint() * t.matrix - CMatrix::Identity(t.dom_dim(), t.dom_dim());
  return Operator{std::move(d), t.dom, t.dom, t.boundary_depth};
}

Operator omega(const Operator& t) {
  Operator d = delta(t);
  CMatrix o = d.matrix - t.matrix.adjoint() * d.matrix * t.matrix;
  return Operator{std::move(o), t.dom, t.dom, 2 * t.boundary_depth};
}

Operator bracket(const CMatrix& a, const Operator& t, int m) {
  if (!t.square() || a.rows() != t.dom_dim() || a.cols() != t.dom_dim())
    fail(ErrorCode::DimensionMismatch, "bracket: dimension mismatch");
  if (m < 1 || m > 30) fail(ErrorCode::InvalidArgument, "bracket order out of range [1,30]");
  CMatrix sum = CMatrix::Zero(a.rows(), a.cols());
  CMatrix tj = CMatrix::Identity(a.rows(), a.cols());  // T^j
  for (int j = 0; j <= m; ++j) {
    double c = static_cast<double>(binom(m, j));
    double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * c * (tj.adjoint() * a * tj);
    if (j < m) tj = t.matrix * tj;
  }
  return Operator{std::move(sum), t.dom, t.dom, m * t.boundary_depth};
}

Operator a_n(const Operator& t, int n) {
  Operator b = bracket(CMatrix::Identity(t.dom_dim(), t.dom_dim()), t, n);
  b.matrix = -b.matrix;
  return b;
}

CMatrix delta_windowed(const Operator& t, const WindowSpec& w) {
  Operator d = delta(t);
  return windowed_clamped_psd(d.matrix, window_mask(w, budget_unit(t)));
}

double two_isometry_residual(const Operator& t, const WindowSpec& w) {
  Operator b2 = bracket(CMatrix::Identity(t.dom_dim(), t.dom_dim()), t, 2);
  return windowed_norm(b2.matrix, window_mask(w, 2 * budget_unit(t)));
}

bool is_two_isometry(const Operator& t, const WindowSpec& w, double tol) {
  return two_isometry_residual(t, w) <= tol;
}

bool is_isometry(const Operator& t, const WindowSpec& w, double tol) {
  Operator d = delta(t);
  return windowed_norm(d.matrix, window_mask(w, budget_unit(t))) <= tol;
}

bool is_concave(const Operator& t, const WindowSpec& w, double tol) {
  Operator b2 = bracket(CMatrix::Identity(t.dom_dim(), t.dom_dim()), t, 2);
  auto mask2 = window_mask(w, 2 * budget_unit(t));
  // concave: B_2 <= 0; checked jointly with expansivity (concave => expansive).
  double top = -windowed_min_eig(-b2.matrix, mask2);
  if (top > tol) return false;
  Operator d = delta(t);
  return windowed_min_eig(d.matrix, window_mask(w, budget_unit(t))) >= -tol;
}

HyperProfile hyper_profile(const Operator& t, const WindowSpec& w, int order, double tol,
                           Side side) {
  if (order < 1) fail(ErrorCode::InvalidArgument, "hyper_profile order must be positive");
  HyperProfile p;
  p.order = order;
  p.side = side;
  CMatrix id = CMatrix::Identity(t.dom_dim(), t.dom_dim());
  for (int m = 1; m <= order; ++m) {
    Operator b = bracket(id, t, m);
    auto mask = window_mask(w, m * budget_unit(t));
    CMatrix signed_b = (side == Side::Expansive) ? CMatrix(-b.matrix) : b.matrix;
    double mn = windowed_min_eig(signed_b, mask);
    if (!std::isfinite(mn)) mn = 0.0;  // empty window: vacuous pass
    p.bracket_min_eigs.push_back(mn);
    p.verdicts.push_back(mn >= -tol);
  }
  return p;
}

double delta_regular_residual(const Operator& t, const WindowSpec& w) {
  CMatrix dw = delta_windowed(t, w);
  CMatrix root = la::herm_sqrt(dw);
  CMatrix lhs = dw * t.matrix;
  CMatrix rhs = root * t.matrix * root;
  return windowed_norm(lhs - rhs, window_mask(w, 2 * budget_unit(t)));
}

bool is_delta_regular(const Operator& t, const WindowSpec& w, double tol) {
  Operator d = delta(t);
  double mn = windowed_min_eig(d.matrix, window_mask(w, budget_unit(t)));
  if (mn < -tol * std::max(1.0, la::op_norm(d.matrix)))
    fail(ErrorCode::NotPSD, "Delta_T is not PSD on the window");
  return delta_regular_residual(t, w) <= tol;
}

double quasinormal_residual(const Operator& t) {
  const CMatrix& m = t.matrix;
  return la::op_norm(m * m.adjoint() * m - m.adjoint() * m * m);
}

bool is_quasinormal(const Operator& t, double tol) {
  double n = la::op_norm(t.matrix);
  return quasinormal_residual(t) <= tol * std::max(1.0, n * n * n);
}

bool is_hyponormal(const Operator& t, double tol) {
  const CMatrix& m = t.matrix;
  return la::is_psd(m.adjoint() * m - m * m.adjoint(), tol);
}

bool is_a_contraction(const Operator& t, const CMatrix& a, const WindowSpec& w, double tol,
                      int a_budget) {
  auto amask = window_mask(w, a_budget);
  if (windowed_min_eig(a, amask) < -tol * std::max(1.0, la::op_norm(a)))
    fail(ErrorCode::NotPSD, "is_a_contraction: A is not PSD on the window");
  CMatrix diff = a - t.matrix.adjoint() * a * t.matrix;
  return windowed_min_eig(diff, window_mask(w, a_budget + budget_unit(t))) >= -tol;
}

CMatrix asymptotic_limit(const Operator& t, const CMatrix& a, const WindowSpec& w, double tol,
                         int max_iter) {
  auto mask = window_mask(w, 2 * budget_unit(t));
  CMatrix cur = a;
  double scale = std::max(1.0, la::op_norm(a));
  for (int n = 0; n < max_iter; ++n) {
    CMatrix next = t.matrix.adjoint() * cur * t.matrix;
    if (n < 3 && windowed_min_eig(cur - next, mask) < -tol * scale)
      fail(ErrorCode::NotMonotone, "iterates T*^n A T^n are not nonincreasing on the window");
    if (windowed_norm(cur - next, mask) <= tol) return next;
    cur = next;
  }
  fail(ErrorCode::NoConvergence, "asymptotic_limit did not converge");
}

double covariance(const Operator& t, const WindowSpec& w) {
  Operator d = delta(t);
  return std::sqrt(windowed_norm(d.matrix, window_mask(w, budget_unit(t))));
}

CMatrix delta_kernel_projector(const Operator& t, const WindowSpec& w, int n, double rank_tol) {
  CMatrix tn = mat_power(t.matrix, n);
  CMatrix dn = tn.adjoint() * tn - CMatrix::Identity(tn.rows(), tn.cols());
  auto mask = window_mask(w, n * budget_unit(t));
  CMatrix r = restrict_to(dn, mask);
  // clamp boundary round-off before the kernel split
  la::HermEig e = la::herm_eig(r);
  la::RVector clamped = e.values.cwiseMax(0.0);
  CMatrix rk = la::kernel_projector(
      CMatrix(e.vectors * clamped.asDiagonal() * e.vectors.adjoint()), rank_tol);
  // kernel projector on the kept coordinates; dropped (boundary) coordinates
  // count as kernel, matching the untruncated model
  CMatrix p = CMatrix::Identity(dn.rows(), dn.cols());
  for (size_t i = 0; i < mask.size(); ++i)
    for (size_t j = 0; j < mask.size(); ++j)
      p(mask[i], mask[j]) = rk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return p;
}

ClassificationReport classify_all(const Operator& t, const WindowSpec& w, int order, double tol) {
  ClassificationReport rep;
  rep.tol = tol;
  int unit = budget_unit(t);
  rep.window_budget = 2 * unit;

  Operator d = delta(t);
  auto mask1 = window_mask(w, unit);
  double exp_min = windowed_min_eig(d.matrix, mask1);
  double dnorm = windowed_norm(d.matrix, mask1);
  rep.covariance = std::sqrt(std::max(0.0, dnorm));
  rep.entries.emplace_back("expansive",
                           PredicateResult{exp_min >= -tol, std::max(0.0, -exp_min)});
  rep.entries.emplace_back("isometry", PredicateResult{dnorm <= tol, dnorm});

  double b2res = two_isometry_residual(t, w);
  rep.entries.emplace_back("two_isometry", PredicateResult{b2res <= tol, b2res});
  rep.entries.emplace_back("concave", PredicateResult{is_concave(t, w, tol), b2res});

  bool reg = false;
  double regres = std::numeric_limits<double>::quiet_NaN();
  if (exp_min >= -tol) {
    regres = delta_regular_residual(t, w);
    reg = regres <= tol;
  }
  rep.entries.emplace_back("delta_regular", PredicateResult{reg, regres});

  double qres = quasinormal_residual(t);
  rep.entries.emplace_back("quasinormal", PredicateResult{is_quasinormal(t, tol), qres});
  const CMatrix& tm = t.matrix;
  double hyp_min = la::herm_eig(tm.adjoint() * tm - tm * tm.adjoint()).values.minCoeff();
  rep.entries.emplace_back("hyponormal",
                           PredicateResult{is_hyponormal(t, tol), std::max(0.0, -hyp_min)});

  HyperProfile hp = hyper_profile(t, w, order, tol, Side::Expansive);
  for (int m = 1; m <= order; ++m)
    rep.entries.emplace_back("hyperexpansive_order_" + std::to_string(m),
                             PredicateResult{hp.verdicts[m - 1],
                                             std::max(0.0, -hp.bracket_min_eigs[m - 1])});
  rep.entries.emplace_back("completely_hyperexpansive_upto_" + std::to_string(order),
                           PredicateResult{hp.all_pass(tol), 0.0});
  return rep;
}

}  // namespace clift::classify
