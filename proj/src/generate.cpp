#include "concavelift/generate.hpp"

#include <cmath>
#include <random>

namespace clift::generate {

namespace {

using la::CMatrix;

CMatrix clamp_psd(const CMatrix& m) {
  la::HermEig e = la::herm_eig(m);
  la::RVector c = e.values.cwiseMax(0.0);
  return e.vectors * c.asDiagonal() * e.vectors.adjoint();
}

void self_validate_concave(const Operator& t, const char* who, bool want_regular) {
  WindowSpec w{t.dom, 0};
  if (!classify::is_concave(t, w))
    fail(ErrorCode::GenerationFailed, std::string(who) + ": output failed the concavity check");
  if (want_regular && !classify::is_delta_regular(t, w))
    fail(ErrorCode::GenerationFailed, std::string(who) + ": output failed the regularity check");
}

}  // namespace

Operator gen_regular_concave_scalar(const Operator& t_hat, double gamma, int shift_depth) {
  if (!t_hat.square())
    fail(ErrorCode::SpaceMismatch, "gen_regular_concave_scalar: t_hat must be square");
  if (shift_depth < 4)
    fail(ErrorCode::InvalidDepth, "gen_regular_concave_scalar: shift_depth must be at least 4");
  double tn = la::op_norm(t_hat.matrix);
  if (tn > 1.0 + la::Tol::identity)
    fail(ErrorCode::NotContraction, "gen_regular_concave_scalar: t_hat is not a contraction");
  if (gamma <= tn + 1e-9 || gamma <= 1.0)
    fail(ErrorCode::GammaTooSmall,
         "gen_regular_concave_scalar: gamma must exceed both 1 and ||t_hat||");

  const int r = t_hat.dom_dim();
  GradedSpace tower = make_tower("shift", r, shift_depth);
  GradedSpace base = make_block_space("base", r);
  GradedSpace H = direct_sum({tower, base});
  const int td = tower.total_dim();
  const int N = H.total_dim();

  CMatrix zz = clamp_psd(CMatrix(gamma * gamma * CMatrix::Identity(r, r) -
                                 t_hat.matrix.adjoint() * t_hat.matrix));
  CMatrix z_half = la::herm_sqrt(zz);

  CMatrix m = CMatrix::Zero(N, N);
  m.topLeftCorner(td, td) = forward_shift(tower).matrix;
  m.block(0, td, r, r) = z_half;  // into the bottom tower level
  m.block(td, td, r, r) = t_hat.matrix;

  Operator t{std::move(m), H, H, 1};
  self_validate_concave(t, "gen_regular_concave_scalar", true);
  return t;
}

Operator gen_brownian_shift(double sigma, int depth) {
  if (sigma < 0.0) fail(ErrorCode::InvalidArgument, "gen_brownian_shift: sigma must be >= 0");
  if (depth < 4) fail(ErrorCode::InvalidDepth, "gen_brownian_shift: depth must be at least 4");

  GradedSpace tower = make_tower("shift", 1, depth);
  GradedSpace unit = make_block_space("u", 1);
  GradedSpace H = direct_sum({tower, unit});
  CMatrix m = CMatrix::Zero(depth + 1, depth + 1);
  m.topLeftCorner(depth, depth) = forward_shift(tower).matrix;
  m(0, depth) = sigma;
  m(depth, depth) = 1.0;

  Operator t{std::move(m), H, H, 1};
  self_validate_concave(t, "gen_brownian_shift", true);
  return t;
}

Operator gen_weighted_shift(const std::vector<double>& weights, int depth) {
  if (depth < 2) fail(ErrorCode::InvalidDepth, "gen_weighted_shift: depth must be at least 2");
  if (static_cast<int>(weights.size()) < depth - 1)
    fail(ErrorCode::InvalidArgument, "gen_weighted_shift: need at least depth-1 weights");
  for (double l : weights)
    if (!(l > 0.0)) fail(ErrorCode::InvalidArgument, "gen_weighted_shift: weights must be positive");

  GradedSpace tower = make_tower("shift", 1, depth);
  CMatrix m = CMatrix::Zero(depth, depth);
  for (int l = 0; l + 1 < depth; ++l) m(l + 1, l) = weights[static_cast<size_t>(l)];
  return Operator{std::move(m), tower, tower, 1};
}

bool exact_oracle(const std::vector<Rational>& s, const std::string& predicate) {
  const size_t n = s.size();
  auto expansive = [&] {
    for (const auto& v : s)
      if (v < 1) return false;
    return true;
  };
  if (predicate == "expansive") return expansive();
  if (predicate == "isometry") {
    for (const auto& v : s)
      if (v != 1) return false;
    return true;
  }
  if (predicate == "concave" || predicate == "two_isometry") {
    if (!expansive()) return false;
    for (size_t i = 0; i + 1 < n; ++i) {
      Rational b2 = s[i] * s[i + 1] - 2 * s[i] + 1;
      if (predicate == "concave" ? b2 > 0 : b2 != 0) return false;
    }
    return true;
  }
  if (predicate == "delta_regular") {
    if (!expansive()) return false;
    for (size_t i = 0; i + 1 < n; ++i)
      if (s[i + 1] != 1 && s[i + 1] != s[i]) return false;
    return true;
  }
  fail(ErrorCode::InvalidArgument, "exact_oracle: unknown predicate '" + predicate + "'");
}

bool oracle(const std::vector<double>& weights, const std::string& predicate, double guard) {
  const size_t n = weights.size();
  std::vector<double> s(n);
  for (size_t i = 0; i < n; ++i) s[i] = weights[i] * weights[i];
  auto expansive = [&] {
    for (double v : s)
      if (v < 1.0 - guard) return false;
    return true;
  };
  if (predicate == "expansive") return expansive();
  if (predicate == "isometry") {
    for (double v : s)
      if (std::abs(v - 1.0) > guard) return false;
    return true;
  }
  if (predicate == "concave" || predicate == "two_isometry") {
    if (!expansive()) return false;
    for (size_t i = 0; i + 1 < n; ++i) {
      double b2 = s[i] * s[i + 1] - 2.0 * s[i] + 1.0;
      if (predicate == "concave" ? b2 > guard : std::abs(b2) > guard) return false;
    }
    return true;
  }
  if (predicate == "delta_regular") {
    if (!expansive()) return false;
    for (size_t i = 0; i + 1 < n; ++i)
      if (std::abs(s[i + 1] - 1.0) > guard && std::abs(s[i + 1] - s[i]) > guard) return false;
    return true;
  }
  fail(ErrorCode::InvalidArgument, "oracle: unknown predicate '" + predicate + "'");
}

std::vector<Rational> dirichlet_weight_squares(int count) {
  std::vector<Rational> s;
  s.reserve(static_cast<size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) s.emplace_back(i + 2, i + 1);
  return s;
}

std::vector<double> dirichlet_weights(int count) {
  std::vector<double> w;
  w.reserve(static_cast<size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i)
    w.push_back(std::sqrt(static_cast<double>(i + 2) / static_cast<double>(i + 1)));
  return w;
}

Operator gen_two_hypercontraction(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uc(0.1, 0.8);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  constexpr int kDefectDim = 2;
  constexpr int kDepth = 6;

  for (int attempt = 0; attempt < 5; ++attempt) {
    double c = uc(rng);
    double d = c + (0.95 - c) * ud(rng);  // c <= d < 1, so C0*C0 <= D0^2 holds
    if (d <= c * c) continue;

    GradedSpace tower = make_tower("shift", kDefectDim, kDepth);
    GradedSpace defect = make_block_space("defect", kDefectDim);
    GradedSpace H = direct_sum({tower, defect});
    const int td = tower.total_dim();
    const int N = H.total_dim();
    CMatrix m = CMatrix::Zero(N, N);
    m.topLeftCorner(td, td) = forward_shift(tower).matrix;
    m.block(0, td, kDefectDim, kDefectDim) =
        std::sqrt(d - c * c) * CMatrix::Identity(kDefectDim, kDefectDim);
    m.block(td, td, kDefectDim, kDefectDim) = c * CMatrix::Identity(kDefectDim, kDefectDim);
    Operator out{std::move(m), H, H, 1};

    WindowSpec w{H, 0};
    CMatrix gram = out.matrix.adjoint() * out.matrix;
    if (la::op_norm(out.matrix) > 1.0 + la::Tol::identity) continue;
    if (windowed_min_eig(gram, window_mask(w, 1)) <= la::Tol::rank) continue;
    classify::HyperProfile hp =
        classify::hyper_profile(out, w, 2, la::Tol::identity, classify::Side::Contractive);
    if (!hp.all_pass(la::Tol::identity)) continue;
    CMatrix dc2 = windowed_clamped_psd(
        CMatrix(CMatrix::Identity(N, N) - gram), window_mask(w, 1));
    CMatrix root = la::herm_sqrt(dc2);
    if (windowed_norm(dc2 * out.matrix - root * out.matrix * root, window_mask(w, 2)) >
        la::Tol::identity)
      continue;
    return out;
  }
  fail(ErrorCode::GenerationFailed, "gen_two_hypercontraction: no valid instance after retries");
}

}  // namespace clift::generate
