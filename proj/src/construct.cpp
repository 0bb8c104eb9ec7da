#include "concavelift/construct.hpp"

#include <cmath>
#include <random>

namespace clift::construct {

namespace {

using classify::delta_windowed;

constexpr double kSqrt2 = 1.4142135623730951;

int budget_unit(const Operator& t) { return std::max(1, t.boundary_depth); }

double lookup(const std::vector<std::pair<std::string, double>>& rs, const std::string& name) {
  for (const auto& [k, v] : rs)
    if (k == name) return v;
  fail(ErrorCode::InvalidArgument, "no residual named '" + name + "'");
}

CMatrix clamp_psd(const CMatrix& m) {
  la::HermEig e = la::herm_eig(m);
  la::RVector c = e.values.cwiseMax(0.0);
  return e.vectors * c.asDiagonal() * e.vectors.adjoint();
}

// Window projector transported into a compressed orthonormal basis.
CMatrix compressed_window(const WindowSpec& w, int budget, const CMatrix& basis) {
  return basis.adjoint() * window_projector(w, budget) * basis;
}

Operator plain_embedding(const GradedSpace& whole, const GradedSpace& sub, int offset) {
  int n = sub.total_dim();
  la::CMatrix j = la::CMatrix::Zero(whole.total_dim(), n);
  j.block(offset, 0, n, n) = la::CMatrix::Identity(n, n);
  return Operator{std::move(j), sub, whole, 0};
}

LiftingResult trivial_lift(const Operator& t, const WindowSpec& w, const std::string& tag) {
  LiftingResult lr;
  lr.S = t;
  lr.J = identity_on(t.dom);
  lr.W = CMatrix::Zero(0, 0);
  lr.X = CMatrix::Zero(0, t.dom_dim());
  lr.ambient = t.dom;
  lr.window = w;
  lr.tag = tag;
  lr.degenerate = true;
  lr.covariance = classify::covariance(t, w);
  lr.residuals.emplace_back("two_isometry", classify::two_isometry_residual(t, w));
  lr.residuals.emplace_back("lifting", 0.0);
  return lr;
}

}  // namespace

double CanonicalBlocks::residual(const std::string& name) const { return lookup(residuals, name); }
double LiftingResult::residual(const std::string& name) const { return lookup(residuals, name); }
double DualBlocks::residual(const std::string& name) const { return lookup(residuals, name); }

LiftingResult lift_basic(const Operator& t, const WindowSpec& w, int depth, double tol) {
  if (!t.square()) fail(ErrorCode::SpaceMismatch, "lift_basic requires a square operator");
  if (depth < w.margin + 4)
    fail(ErrorCode::InvalidDepth, "lift_basic: depth too small for the requested margin");
  if (!classify::is_concave(t, w, tol))
    fail(ErrorCode::NotConcave, "lift_basic requires a concave operator");

  const int n = t.dom_dim();
  const int unit = budget_unit(t);
  CMatrix dw = delta_windowed(t, w);
  double dnorm = la::op_norm(dw);
  if (dnorm <= tol) return trivial_lift(t, w, "degenerate-isometry");

  // Omega_T = Delta_T - T* Delta_T T, computed from the window-clamped Delta
  // so boundary rows cannot leak in.
  CMatrix cpart = t.matrix.adjoint() * dw * t.matrix;  // Delta - Omega
  CMatrix om = clamp_psd(dw - cpart);
  if (la::op_norm(om) <= tol) {
    LiftingResult lr = lift_minimal(t, dw, w, depth, tol);
    lr.tag = "degenerate-two-isometry";
    lr.degenerate = true;
    return lr;
  }
  CMatrix cp = clamp_psd(cpart);

  CMatrix r_om = la::range_basis(om);
  CMatrix om_half = la::herm_sqrt(om);
  CMatrix r_c = la::range_basis(cp);
  CMatrix c_half = la::herm_sqrt(cp);
  const int q = static_cast<int>(r_om.cols());
  const int p = static_cast<int>(r_c.cols());

  GradedSpace h0 = make_tower("lift.H0", q, depth);
  GradedSpace h1 = make_tower("lift.H1", q * depth + std::max(p, 1), depth);
  GradedSpace K = direct_sum({h1, h0, t.dom});
  const int d1 = h1.total_dim(), d0 = h0.total_dim();
  const int off1 = 0, off0 = d1, offh = d1 + d0;
  const int N = K.total_dim();

  la::CMatrix m = la::CMatrix::Zero(N, N);
  m.block(off1, off1, d1, d1) = forward_shift(h1).matrix;
  m.block(off0, off0, d0, d0) = forward_shift(h0).matrix;
  m.block(off1, off0, d0, d0) = kSqrt2 * la::CMatrix::Identity(d0, d0);  // sqrt(2) E_0
  if (p > 0) m.block(off1 + q * depth, offh, p, n) = r_c.adjoint() * c_half;  // J_1 (D-O)^{1/2}
  m.block(off0, offh, q, n) = r_om.adjoint() * om_half;                       // J_0 O^{1/2}
  m.block(offh, offh, n, n) = t.matrix;

  LiftingResult lr;
  lr.S = Operator{m, K, K, std::max(1, t.boundary_depth)};
  lr.J = plain_embedding(K, t.dom, offh);
  lr.W = m.topLeftCorner(d1 + d0, d1 + d0);
  lr.X = m.block(0, offh, d1 + d0, n);
  lr.ambient = K;
  lr.window = WindowSpec{K, w.margin};
  lr.tag = "thm2.1(i)";

  double two_iso = classify::two_isometry_residual(lr.S, lr.window);
  double lift_res = lifting_residual(lr.S, lr.J, t, lr.window);
  lr.covariance = classify::covariance(lr.S, lr.window);
  double cov_formula = kSqrt2 * std::max(1.0, std::sqrt(dnorm));

  // Delta_S = 0 (+) 2 I_{H0} (+) 2 Delta_T on the window
  CMatrix delta_s = lr.S.matrix.adjoint() * lr.S.matrix - la::CMatrix::Identity(N, N);
  CMatrix expected = la::CMatrix::Zero(N, N);
  expected.block(off0, off0, d0, d0) = 2.0 * la::CMatrix::Identity(d0, d0);
  expected.block(offh, offh, n, n) = 2.0 * dw;
  double block_id = windowed_norm(delta_s - expected, window_mask(lr.window, unit));

  lr.residuals.emplace_back("two_isometry", two_iso);
  lr.residuals.emplace_back("lifting", lift_res);
  lr.residuals.emplace_back("covariance_formula", std::abs(lr.covariance - cov_formula));
  lr.residuals.emplace_back("wx_orthogonality", la::op_norm(lr.W.adjoint() * lr.X));
  lr.residuals.emplace_back("delta_block_identity", block_id);
  return lr;
}

LiftingResult lift_minimal(const Operator& t, const CMatrix& a, const WindowSpec& w, int depth,
                           double tol) {
  if (!t.square()) fail(ErrorCode::SpaceMismatch, "lift_minimal requires a square operator");
  if (depth < w.margin + 4)
    fail(ErrorCode::InvalidDepth, "lift_minimal: depth too small for the requested margin");
  if (!classify::is_concave(t, w, tol))
    fail(ErrorCode::NotConcave, "lift_minimal requires a concave operator");
  const int n = t.dom_dim();
  if (a.rows() != n || a.cols() != n)
    fail(ErrorCode::InvalidMajorant, "majorant has wrong dimensions");
  if (!la::is_hermitian(a)) fail(ErrorCode::InvalidMajorant, "majorant is not Hermitian");

  const int unit = budget_unit(t);
  CMatrix dw = delta_windowed(t, w);
  double dnorm = la::op_norm(dw);
  double ascale = std::max(1.0, la::op_norm(a));
  auto mask2 = window_mask(w, 2 * unit);

  double inv_res = windowed_norm(t.matrix.adjoint() * a * t.matrix - a, mask2);
  if (inv_res > tol * ascale)
    fail(ErrorCode::InvalidMajorant, "majorant is not T-invariant (T*AT != A)");
  if (windowed_min_eig(a - dw, window_mask(w, unit)) < -tol * ascale)
    fail(ErrorCode::InvalidMajorant, "majorant does not dominate Delta_T");
  double anorm = windowed_norm(a, window_mask(w, unit));
  if (std::abs(anorm - dnorm) > tol * std::max(1.0, dnorm))
    fail(ErrorCode::InvalidMajorant, "||A|| != ||Delta_T||");

  CMatrix g = clamp_psd(a - dw);
  CMatrix rg = la::range_basis(g);
  const int gr = static_cast<int>(rg.cols());
  if (gr == 0) {
    LiftingResult lr = trivial_lift(t, w, "thm2.1(ii)-trivial");
    lr.residuals.emplace_back("delta_majorant_identity",
                              windowed_norm(t.matrix.adjoint() * t.matrix -
                                                la::CMatrix::Identity(n, n) - a,
                                            window_mask(w, unit)));
    lr.residuals.emplace_back("minimality_deficiency", 0.0);
    return lr;
  }
  CMatrix g_half = la::herm_sqrt(g);

  GradedSpace hp = make_tower("lift.Hp", gr, depth);
  GradedSpace K = direct_sum({hp, t.dom});
  const int dp = hp.total_dim();
  const int N = K.total_dim();
  la::CMatrix m = la::CMatrix::Zero(N, N);
  m.block(0, 0, dp, dp) = forward_shift(hp).matrix;
  m.block(0, dp, gr, n) = rg.adjoint() * g_half;  // J (A - Delta)^{1/2}
  m.block(dp, dp, n, n) = t.matrix;

  LiftingResult lr;
  lr.S = Operator{m, K, K, std::max(1, t.boundary_depth)};
  lr.J = plain_embedding(K, t.dom, dp);
  lr.W = m.topLeftCorner(dp, dp);
  lr.X = m.block(0, dp, dp, n);
  lr.ambient = K;
  lr.window = WindowSpec{K, w.margin};
  lr.tag = "thm2.1(ii)";
  lr.covariance = classify::covariance(lr.S, lr.window);

  CMatrix delta_s = m.adjoint() * m - la::CMatrix::Identity(N, N);
  CMatrix expected = la::CMatrix::Zero(N, N);
  expected.block(dp, dp, n, n) = a;
  lr.residuals.emplace_back("two_isometry", classify::two_isometry_residual(lr.S, lr.window));
  lr.residuals.emplace_back("lifting", lifting_residual(lr.S, lr.J, t, lr.window));
  lr.residuals.emplace_back("covariance_formula", std::abs(lr.covariance - std::sqrt(dnorm)));
  lr.residuals.emplace_back("delta_majorant_identity",
                            windowed_norm(delta_s - expected, window_mask(lr.window, unit)));

  // Minimality witness: the S-orbit of J(H) spans the truncated ambient space.
  la::CMatrix orbit(N, static_cast<Eigen::Index>(n) * (depth + 1));
  la::CMatrix cur = lr.J.matrix;
  for (int k = 0; k <= depth; ++k) {
    orbit.block(0, static_cast<Eigen::Index>(k) * n, N, n) = cur;
    cur = m * cur;
  }
  Eigen::JacobiSVD<la::CMatrix> svd(orbit);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int reached = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > la::Tol::rank * std::max(1.0, smax)) ++reached;
  lr.residuals.emplace_back("minimality_deficiency", static_cast<double>(N - reached));
  return lr;
}

CanonicalBlocks canonical_blocks(const Operator& t, const WindowSpec& w, double tol) {
  if (!t.square()) fail(ErrorCode::SpaceMismatch, "canonical_blocks requires a square operator");
  if (!classify::is_concave(t, w, tol))
    fail(ErrorCode::NotConcave, "canonical_blocks requires a concave operator");
  CMatrix dw = delta_windowed(t, w);
  double dnorm = la::op_norm(dw);
  if (dnorm <= tol) fail(ErrorCode::IsIsometric, "Delta_T vanishes on the window");
  if (!classify::is_delta_regular(t, w, tol))
    fail(ErrorCode::NotRegular, "operator is not Delta_T-regular");

  const int unit = budget_unit(t);
  CanonicalBlocks cb;
  cb.basis_kernel = la::kernel_basis(dw);
  cb.basis_range = la::range_basis(dw);
  const CMatrix& bn = cb.basis_kernel;
  const CMatrix& br = cb.basis_range;
  const int k = static_cast<int>(bn.cols());
  const int r = static_cast<int>(br.cols());
  cb.sigma = std::sqrt(dnorm + 1.0);

  GradedSpace sn = k > 0 ? make_block_space("kernel", k) : GradedSpace{};
  GradedSpace sr = make_block_space("range", r);
  CMatrix vm = bn.adjoint() * t.matrix * bn;
  CMatrix zh = bn.adjoint() * t.matrix * br;
  CMatrix th = br.adjoint() * t.matrix * br;
  cb.V = Operator{vm, sn, sn, t.boundary_depth};
  cb.Z_hat = Operator{zh, sr, sn, t.boundary_depth};
  cb.Z = Operator{zh / cb.sigma, sr, sn, t.boundary_depth};
  cb.T_hat = Operator{th, sr, sr, 0};
  cb.delta0 = br.adjoint() * dw * br;

  CMatrix pn = compressed_window(w, 2 * unit, bn);
  cb.residuals.emplace_back("v_isometry",
                            la::op_norm(pn * (vm.adjoint() * vm - la::CMatrix::Identity(k, k)) * pn));
  cb.residuals.emplace_back("vz_orthogonality", la::op_norm(pn * vm.adjoint() * zh));
  cb.residuals.emplace_back("lower_corner", la::op_norm(br.adjoint() * t.matrix * bn *
                                                        compressed_window(w, 2 * unit, bn)));
  cb.residuals.emplace_back("z_injectivity_gap", la::smallest_singular_value(cb.Z.matrix));
  CMatrix d0c = cb.sigma * cb.sigma * cb.Z.matrix.adjoint() * cb.Z.matrix + th.adjoint() * th -
                la::CMatrix::Identity(r, r);
  cb.residuals.emplace_back("delta0_consistency", la::op_norm(d0c - cb.delta0));
  cb.residuals.emplace_back("that_commutes_delta0", la::op_norm(th * d0c - d0c * th));

  CMatrix u(t.dom_dim(), k + r);
  if (k > 0) u.leftCols(k) = bn;
  u.rightCols(r) = br;
  CMatrix rec = la::CMatrix::Zero(k + r, k + r);
  rec.topLeftCorner(k, k) = vm;
  rec.topRightCorner(k, r) = zh;
  rec.bottomRightCorner(r, r) = th;
  cb.residuals.emplace_back(
      "reassembly", windowed_norm(t.matrix - u * rec * u.adjoint(), window_mask(w, 2 * unit)));
  return cb;
}

Operator schaffer_lift(const Operator& c, int depth, double tol) {
  if (!c.square()) fail(ErrorCode::SpaceMismatch, "schaffer_lift requires a square operator");
  double cn = la::op_norm(c.matrix);
  if (cn > 1.0 + tol) fail(ErrorCode::NotContraction, "schaffer_lift requires a contraction");
  const int n = c.dom_dim();
  CMatrix d2 = clamp_psd(la::CMatrix::Identity(n, n) - c.matrix.adjoint() * c.matrix);
  CMatrix rd = la::range_basis(d2);
  const int d = static_cast<int>(rd.cols());
  if (d == 0) return c;  // already an isometry
  CMatrix d_half = la::herm_sqrt(d2);

  GradedSpace tower = make_tower("sch.D", d, depth);
  GradedSpace K = direct_sum({c.dom, tower});
  const int N = K.total_dim();
  la::CMatrix m = la::CMatrix::Zero(N, N);
  m.block(0, 0, n, n) = c.matrix;
  m.block(n, 0, d, n) = rd.adjoint() * d_half;  // bottom tower level
  m.block(n, n, tower.total_dim(), tower.total_dim()) = forward_shift(tower).matrix;
  return Operator{std::move(m), K, K, std::max(1, c.boundary_depth)};
}

LiftingResult lift_regular(const Operator& t, const WindowSpec& w, int depth, double tol) {
  if (depth < w.margin + 4)
    fail(ErrorCode::InvalidDepth, "lift_regular: depth too small for the requested margin");
  CMatrix dw0 = delta_windowed(t, w);
  if (la::op_norm(dw0) <= tol) return trivial_lift(t, w, "degenerate-isometry");

  CanonicalBlocks cb = canonical_blocks(t, w, tol);
  const int n = t.dom_dim();
  const int k = static_cast<int>(cb.basis_kernel.cols());
  const int r = static_cast<int>(cb.basis_range.cols());
  const double sigma = cb.sigma;
  const CMatrix& br = cb.basis_range;

  const CMatrix& th = cb.T_hat.matrix;
  const CMatrix& zm = cb.Z.matrix;
  CMatrix dt2 = clamp_psd(la::CMatrix::Identity(r, r) - th.adjoint() * th);
  CMatrix r_dt = la::range_basis(dt2);
  CMatrix dt_half = la::herm_sqrt(dt2);
  const int d_t = static_cast<int>(r_dt.cols());
  CMatrix dz2 = clamp_psd(la::CMatrix::Identity(r, r) - zm.adjoint() * zm);
  CMatrix r_dz = la::range_basis(dz2);
  CMatrix dz_half = la::herm_sqrt(dz2);
  const int dz = static_cast<int>(r_dz.cols());

  const int h2dim = d_t * depth;
  const int k0base = dz + h2dim;

  // H is kept embedded with its own grading so the window sees its towers;
  // the defect rows act through the recorded range basis.
  std::vector<GradedSpace> parts;
  GradedSpace k0, h2;
  if (k0base > 0) {
    k0 = make_tower("lift.K0", k0base, depth);
    parts.push_back(k0);
  }
  parts.push_back(t.dom);
  if (d_t > 0) {
    h2 = make_tower("lift.H2", d_t, depth);
    parts.push_back(h2);
  }
  GradedSpace K = direct_sum(parts);
  const int N = K.total_dim();
  const int offk0 = 0;
  const int k0dim = (k0base > 0 ? k0.total_dim() : 0);
  const int offh = k0dim;
  const int offh2 = offh + n;

  la::CMatrix m = la::CMatrix::Zero(N, N);
  if (k0base > 0) m.block(offk0, offk0, k0dim, k0dim) = forward_shift(k0).matrix;
  m.block(offh, offh, n, n) = t.matrix;
  if (dz > 0)  // sigma J1 D_Z from the range side of H into the K0 bottom
    m.block(offk0, offh, dz, n) = sigma * (r_dz.adjoint() * dz_half) * br.adjoint();
  if (d_t > 0) {
    m.block(offk0 + dz, offh2, h2dim, h2dim) =
        sigma * la::CMatrix::Identity(h2dim, h2dim);  // sigma J2 on H2
    m.block(offh2, offh, d_t, n) =
        (r_dt.adjoint() * dt_half) * br.adjoint();  // defect row of V_hat
    m.block(offh2, offh2, h2dim, h2dim) = forward_shift(h2).matrix;
  }

  LiftingResult lr;
  lr.S = Operator{m, K, K, std::max(1, t.boundary_depth)};
  lr.J = plain_embedding(K, t.dom, offh);
  const la::CMatrix& jm = lr.J.matrix;
  lr.ambient = K;
  lr.window = WindowSpec{K, w.margin};
  lr.tag = "thm2.3(iii)";
  lr.covariance = classify::covariance(lr.S, lr.window);

  // W, X on the split K = (K0 (+) H2) (+) H; the complement of J(H) is
  // non-contiguous, assemble explicitly.
  std::vector<int> perp;
  for (int i = 0; i < k0dim; ++i) perp.push_back(offk0 + i);
  for (int i = 0; i < h2dim; ++i) perp.push_back(offh2 + i);
  la::CMatrix wmat(static_cast<Eigen::Index>(perp.size()), static_cast<Eigen::Index>(perp.size()));
  la::CMatrix xmat(static_cast<Eigen::Index>(perp.size()), n);
  for (size_t i = 0; i < perp.size(); ++i) {
    for (size_t j = 0; j < perp.size(); ++j) wmat(i, j) = m(perp[i], perp[j]);
    xmat.row(static_cast<Eigen::Index>(i)) = (m * jm).row(perp[i]);
  }
  lr.W = wmat;
  lr.X = xmat;

  const int unit = std::max(1, t.boundary_depth);
  auto mask2 = window_mask(lr.window, 2 * unit);
  CMatrix gram = m.adjoint() * m;
  CMatrix delta_s = gram - la::CMatrix::Identity(N, N);
  CMatrix qp = delta_s / (sigma * sigma);
  lr.residuals.emplace_back("two_isometry", classify::two_isometry_residual(lr.S, lr.window));
  lr.residuals.emplace_back("lifting", lifting_residual(lr.S, lr.J, t, lr.window));
  lr.residuals.emplace_back("projection_idempotency", windowed_norm(qp * qp - qp, mask2));
  lr.residuals.emplace_back("covariance_formula", std::abs(lr.covariance - sigma));

  // S*S maps J(H) into J(H)
  CMatrix proj_out = la::CMatrix::Identity(N, N) - jm * jm.adjoint();
  lr.residuals.emplace_back(
      "ssh_invariance",
      la::op_norm(window_projector(lr.window, 2 * unit) * proj_out * gram * jm));
  // N(Delta_T) inside N(Delta_S)
  double kernel_res = 0.0;
  if (k > 0)
    kernel_res = la::op_norm(window_projector(lr.window, 2 * unit) * delta_s *
                             (jm * cb.basis_kernel));
  lr.residuals.emplace_back("kernel_containment", kernel_res);
  lr.residuals.emplace_back("wx_orthogonality", la::op_norm(wmat.adjoint() * xmat));

  CMatrix expected = la::CMatrix::Identity(N, N);
  double s2 = sigma * sigma;
  expected.block(offh, offh, n, n) += s2 * (br * br.adjoint());
  if (d_t > 0)
    expected.block(offh2, offh2, h2dim, h2dim) *= s2 + 1.0;
  lr.residuals.emplace_back("gram_block_identity", windowed_norm(gram - expected, mask2));
  return lr;
}

Operator cauchy_dual(const Operator& t, double tol) {
  if (!t.square()) fail(ErrorCode::SpaceMismatch, "cauchy_dual requires a square operator");
  CMatrix gram = t.matrix.adjoint() * t.matrix;
  WindowSpec w{t.dom, 0};
  double mn = windowed_min_eig(gram, window_mask(w, budget_unit(t)));
  if (mn <= tol)
    fail(ErrorCode::NotLeftInvertible, "T*T is not invertible on the window");
  CMatrix pinv = la::pseudo_inverse_psd(gram, std::max(tol, la::Tol::rank));
  return Operator{t.matrix * pinv, t.dom, t.dom, t.boundary_depth};
}

DualBlocks dual_blocks(const Operator& t, const WindowSpec& w, double tol, int samples,
                       unsigned seed) {
  CanonicalBlocks cb = canonical_blocks(t, w, tol);
  const int r = static_cast<int>(cb.basis_range.cols());
  const int k = static_cast<int>(cb.basis_kernel.cols());

  DualBlocks db;
  db.V = cb.V;
  db.Zp = cb.Z_hat;  // Z' = sigma Z
  CMatrix delta = cb.delta0 + la::CMatrix::Identity(r, r);
  db.Dinv = la::inverse(delta, la::Tol::rank);
  db.T0p = Operator{cb.T_hat.matrix * db.Dinv, cb.T_hat.dom, cb.T_hat.cod, 0};
  db.T1p = Operator{cb.Z_hat.matrix * db.Dinv, cb.Z_hat.dom, cb.Z_hat.cod, cb.Z_hat.boundary_depth};
  db.basis_kernel = cb.basis_kernel;
  db.basis_range = cb.basis_range;

  const int n = t.dom_dim();
  const int unit = budget_unit(t);
  CMatrix u(n, k + r);
  if (k > 0) u.leftCols(k) = db.basis_kernel;
  u.rightCols(r) = db.basis_range;
  CMatrix rec = la::CMatrix::Zero(k + r, k + r);
  rec.topLeftCorner(k, k) = db.V.matrix;
  rec.topRightCorner(k, r) = db.T1p.matrix;
  rec.bottomRightCorner(r, r) = db.T0p.matrix;
  Operator tdual = cauchy_dual(t, la::Tol::rank);
  db.residuals.emplace_back(
      "dual_reassembly",
      windowed_norm(tdual.matrix - u * rec * u.adjoint(), window_mask(w, 2 * unit)));

  // D_{T'}^2 = 0 (+) (I - Delta^{-1})
  CMatrix dtp2 =
      la::CMatrix::Identity(n, n) - tdual.matrix.adjoint() * tdual.matrix;
  CMatrix expected = la::CMatrix::Zero(n, n);
  expected = u *
             [&] {
               CMatrix e = la::CMatrix::Zero(k + r, k + r);
               e.bottomRightCorner(r, r) = la::CMatrix::Identity(r, r) - db.Dinv;
               return e;
             }() *
             u.adjoint();
  db.residuals.emplace_back("defect_block_identity",
                            windowed_norm(dtp2 - expected, window_mask(w, 2 * unit)));

  // N(D_{T'}) = N(Delta_T) via projector distance
  CMatrix dw = delta_windowed(t, w);
  CMatrix dtp2_w = windowed_clamped_psd(dtp2, window_mask(w, 2 * unit));
  // outside the window D_{T'}^2 is boundary-corrupted; compare kernels on it
  CMatrix p_dual = la::CMatrix::Identity(n, n);
  {
    auto mask = window_mask(w, 2 * unit);
    CMatrix rk = la::kernel_projector(restrict_to(dtp2_w, mask));
    for (size_t i = 0; i < mask.size(); ++i)
      for (size_t j = 0; j < mask.size(); ++j)
        p_dual(mask[i], mask[j]) = rk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  CMatrix p_delta_full = la::CMatrix::Identity(n, n);
  {
    auto mask = window_mask(w, 2 * unit);
    CMatrix rk = la::kernel_projector(restrict_to(dw, mask));
    for (size_t i = 0; i < mask.size(); ++i)
      for (size_t j = 0; j < mask.size(); ++j)
        p_delta_full(mask[i], mask[j]) =
            rk(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  db.residuals.emplace_back("kernel_identity", la::op_norm(p_dual - p_delta_full));

  // Theorem 3.1 norm bound sampled over random h in D_{T'}
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  CMatrix p_def = u.rightCols(r) * u.rightCols(r).adjoint();
  for (int s = 0; s < samples; ++s) {
    la::CMatrix h(n, 1);
    for (int i = 0; i < n; ++i) h(i, 0) = la::Complex(gauss(rng), gauss(rng));
    h = p_def * h;
    double hn = h.norm();
    if (hn < 1e-12) continue;
    h /= hn;
    double lhs = (p_def * (tdual.matrix * h)).norm();
    double rhs = (tdual.matrix.adjoint() * (tdual.matrix * h)).norm();
    worst = std::max(worst, lhs - rhs);
  }
  db.residuals.emplace_back("norm_bound_excess", std::max(0.0, worst));
  return db;
}

Operator inverse_dual(const Operator& c, const WindowSpec& w, double tol) {
  if (!c.square()) fail(ErrorCode::SpaceMismatch, "inverse_dual requires a square operator");
  const int n = c.dom_dim();
  const int unit = budget_unit(c);
  if (la::op_norm(c.matrix) > 1.0 + tol)
    fail(ErrorCode::PreconditionFailed, "inverse_dual: C is not a contraction");
  CMatrix gram = c.matrix.adjoint() * c.matrix;
  if (windowed_min_eig(gram, window_mask(w, unit)) <= la::Tol::rank)
    fail(ErrorCode::PreconditionFailed, "inverse_dual: C is not left invertible on the window");

  CMatrix dc2 = windowed_clamped_psd(la::CMatrix::Identity(n, n) - gram, window_mask(w, unit));
  // 2-hypercontraction: C is a D_C^2-contraction
  CMatrix hyper = dc2 - c.matrix.adjoint() * dc2 * c.matrix;
  if (windowed_min_eig(hyper, window_mask(w, 2 * unit)) < -tol)
    fail(ErrorCode::PreconditionFailed, "inverse_dual: C is not a 2-hypercontraction");
  // D_C^2-regularity
  CMatrix root = la::herm_sqrt(dc2);
  double reg_res =
      windowed_norm(dc2 * c.matrix - root * c.matrix * root, window_mask(w, 2 * unit));
  if (reg_res > tol)
    fail(ErrorCode::PreconditionFailed, "inverse_dual: C is not D_C^2-regular");
  // compression bound C_0* C_0 <= D_0^2
  CMatrix br = la::range_basis(dc2);
  const int r = static_cast<int>(br.cols());
  if (r > 0) {
    CMatrix c0 = br.adjoint() * c.matrix * br;
    CMatrix d0 = br.adjoint() * gram * br;
    la::HermEig e = la::herm_eig(CMatrix(d0 * d0 - c0.adjoint() * c0));
    if (e.values.size() && e.values.minCoeff() < -tol)
      fail(ErrorCode::PreconditionFailed, "inverse_dual: compression bound C0*C0 <= D0^2 fails");
  }
  CMatrix pinv = la::pseudo_inverse_psd(gram, la::Tol::rank);
  return Operator{c.matrix * pinv, c.dom, c.dom, c.boundary_depth};
}

RangeCompressions compress_to_range_delta(const Operator& t, const WindowSpec& w, double tol) {
  CMatrix dw = delta_windowed(t, w);
  if (la::op_norm(dw) <= tol)
    fail(ErrorCode::IsIsometric, "Delta_T vanishes on the window");
  RangeCompressions rc;
  rc.basis_kernel = la::kernel_basis(dw);
  rc.basis_range = la::range_basis(dw);
  const int k = static_cast<int>(rc.basis_kernel.cols());
  const int r = static_cast<int>(rc.basis_range.cols());
  GradedSpace sn = k > 0 ? make_block_space("kernel", k) : GradedSpace{};
  GradedSpace sr = make_block_space("range", r);
  rc.T_hat = Operator{rc.basis_range.adjoint() * t.matrix * rc.basis_range, sr, sr, 0};
  rc.Z_hat = Operator{rc.basis_kernel.adjoint() * t.matrix * rc.basis_range, sr, sn,
                      t.boundary_depth};
  return rc;
}

verify::TheoremVerdict verify_brownian_form(const BrownianForm& bf, const Operator& t,
                                            const WindowSpec& w, double tol) {
  const int m0 = static_cast<int>(bf.C.rows());
  const int m1 = static_cast<int>(bf.U.rows());
  if (bf.C.cols() != m0 || bf.U.cols() != m1 || bf.E.rows() != m0 || bf.E.cols() != m1 ||
      bf.J_H.rows() != m0 + m1 || bf.J_H.cols() != t.dom_dim())
    fail(ErrorCode::DimensionMismatch, "verify_brownian_form: inconsistent block dimensions");

  verify::TheoremVerdict v;
  v.theorem_id = "prop2.2";
  v.tol = tol;

  double cnorm = la::op_norm(bf.C), enorm = la::op_norm(bf.E);
  v.push("contractions", cnorm <= 1.0 + tol && enorm <= 1.0 + tol,
         std::max(0.0, std::max(cnorm, enorm) - 1.0));
  double ures = la::op_norm(bf.U.adjoint() * bf.U - la::CMatrix::Identity(m1, m1)) +
                la::op_norm(bf.U * bf.U.adjoint() - la::CMatrix::Identity(m1, m1));
  v.push("unitary_U", ures <= tol, ures);

  double delta_t = classify::covariance(t, w);
  v.push("delta_matches_covariance", std::abs(bf.delta - delta_t) <= tol,
         std::abs(bf.delta - delta_t));

  CMatrix dc2 = clamp_psd(la::CMatrix::Identity(m0, m0) - bf.C.adjoint() * bf.C);
  CMatrix de2 = clamp_psd(la::CMatrix::Identity(m1, m1) - bf.E.adjoint() * bf.E);
  CMatrix dc = la::herm_sqrt(dc2);
  CMatrix de = la::herm_sqrt(de2);
  if (bf.J_C.cols() != m0 || bf.J_E.cols() != m1 || bf.J_C.rows() != bf.J_E.rows())
    fail(ErrorCode::DimensionMismatch, "verify_brownian_form: J_C/J_E dimensions inconsistent");
  double jres = la::op_norm(dc * (bf.J_C.adjoint() * bf.J_C - la::CMatrix::Identity(m0, m0)) * dc) +
                la::op_norm(de * (bf.J_E.adjoint() * bf.J_E - la::CMatrix::Identity(m1, m1)) * de);
  v.push("isometric_on_defects", jres <= tol, jres);

  double eq25 = la::op_norm(bf.C.adjoint() * bf.E + dc * bf.J_C.adjoint() * bf.J_E * de);
  v.push("eq25_identity", eq25 <= tol, eq25);

  la::CMatrix ttilde = la::CMatrix::Zero(m0 + m1, m0 + m1);
  ttilde.block(0, 0, m0, m0) = bf.C;
  ttilde.block(0, m0, m0, m1) = bf.delta * bf.E;
  ttilde.block(m0, m0, m1, m1) = bf.U;
  double ext = la::op_norm((ttilde * bf.J_H - bf.J_H * t.matrix) *
                           window_projector(w, std::max(1, t.boundary_depth)));
  v.push("extension_property", ext <= tol, ext);

  // reported criterion for concavity of the extension
  double ciso = la::op_norm(bf.C.adjoint() * bf.C - la::CMatrix::Identity(m0, m0));
  double ce = la::op_norm(bf.C.adjoint() * bf.E);
  CMatrix ee = bf.E.adjoint() * bf.E;
  la::HermEig eg = la::herm_eig(CMatrix(ee - bf.U.adjoint() * ee * bf.U));
  double emin = eg.values.size() ? eg.values.minCoeff() : 0.0;
  bool concave_ext = ciso <= tol && ce <= tol && emin >= -tol;
  v.push("extension_concavity_criterion", concave_ext,
         std::max({ciso, ce, std::max(0.0, -emin)}));
  v.finalize();
  return v;
}

}  // namespace clift::construct
