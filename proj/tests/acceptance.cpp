// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "concavelift/construct.hpp"
#include "concavelift/generate.hpp"
#include "concavelift/verify.hpp"

using namespace clift;
using la::CMatrix;
namespace cls = clift::classify;
namespace con = clift::construct;
namespace gen = clift::generate;
namespace ver = clift::verify;

namespace {

int g_failures = 0;

void report(int idx, const char* what, bool ok, const std::string& detail = "") {
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", idx, what,
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++g_failures;
}

CMatrix random_contraction(std::mt19937& rng, int dim, double norm_cap) {
  std::normal_distribution<double> g;
  CMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = la::Complex(g(rng), g(rng));
  double n = la::op_norm(m);
  if (n > 0) m *= norm_cap / n;
  return m;
}

Operator scalar_instance(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> dim_d(1, 3);
  std::uniform_real_distribution<double> gamma_d(1.05, 2.0);
  int dim = dim_d(rng);
  GradedSpace hb = make_block_space("b", dim);
  CMatrix m = random_contraction(rng, dim, 0.9);
  Operator t_hat = make_operator(m, hb, hb);
  return gen::gen_regular_concave_scalar(t_hat, gamma_d(rng), depth);
}

// positive family of criterion 3: quasinormal T_hat (scaled diagonal)
Operator quasinormal_instance(std::mt19937& rng, int dim, int depth) {
  std::uniform_real_distribution<double> c_d(0.0, 0.85);
  std::uniform_real_distribution<double> gamma_d(1.1, 1.8);
  GradedSpace hb = make_block_space("b", dim);
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) m(i, i) = c_d(rng);
  return gen::gen_regular_concave_scalar(make_operator(m, hb, hb), gamma_d(rng), depth);
}

Operator negative_instance(int depth) {
  GradedSpace hb = make_block_space("b", 2);
  CMatrix m(2, 2);
  m << 0.0, 0.5, 0.0, 0.0;
  return gen::gen_regular_concave_scalar(make_operator(m, hb, hb), 1.2, depth);
}

void criterion1() {
  std::mt19937 rng(1001);
  std::uniform_int_distribution<int> depth_d(16, 32);
  double worst = 0.0;
  bool ok = true;
  for (int i = 0; i < 50 && ok; ++i) {
    Operator t = scalar_instance(rng, depth_d(rng));
    WindowSpec w{t.dom, 0};
    double dnorm = la::op_norm(cls::delta_windowed(t, w));

    auto lb = con::lift_basic(t, w, 8);
    auto lr = con::lift_regular(t, w, 8);
    double cov_formula = std::sqrt(2.0) * std::max(1.0, std::sqrt(dnorm));
    double residuals[] = {lb.residual("two_isometry"),
                          lb.residual("lifting"),
                          std::abs(lb.covariance - cov_formula) / std::max(1.0, cov_formula),
                          lr.residual("two_isometry"),
                          lr.residual("lifting"),
                          lr.residual("projection_idempotency")};
    for (double r : residuals) {
      worst = std::max(worst, r);
      if (r > 1e-8) ok = false;
    }
  }
  report(1, "2-isometric liftings (50 seeded instances)", ok,
         "worst residual " + std::to_string(worst));
}

void criterion2() {
  std::mt19937 rng(2002);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> dim_d(2, 16);
  double worst = 0.0;
  bool ok = true;

  for (int i = 0; i < 100; ++i) {
    int n = dim_d(rng);
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = la::Complex(g(rng), g(rng));
    // bounded below: push the spectrum away from zero
    m += 2.0 * (la::op_norm(m) + 1.0) * CMatrix::Identity(n, n);
    GradedSpace h = make_block_space("h", n);
    Operator t = make_operator(m, h, h);
    Operator dd = con::cauchy_dual(con::cauchy_dual(t));
    double r = la::op_norm(dd.matrix - t.matrix) / std::max(1.0, la::op_norm(t.matrix));
    worst = std::max(worst, r);
    if (r > 1e-10) ok = false;
  }

  std::vector<Operator> models;
  models.push_back(gen::gen_weighted_shift(gen::dirichlet_weights(31), 32));
  models.push_back(gen::gen_weighted_shift(std::vector<double>(31, 1.3), 32));
  models.push_back(gen::gen_brownian_shift(2.0, 32));
  models.push_back(gen::gen_two_hypercontraction(5));
  models.push_back(scalar_instance(rng, 24));
  for (const Operator& t : models) {
    WindowSpec w{t.dom, 0};
    Operator dd = con::cauchy_dual(con::cauchy_dual(t));
    double r = windowed_norm(dd.matrix - t.matrix, window_mask(w, std::max(1, t.boundary_depth))) /
               std::max(1.0, la::op_norm(t.matrix));
    worst = std::max(worst, r);
    if (r > 1e-10) ok = false;
  }
  report(2, "Cauchy-dual involution (100 dense + shift models)", ok,
         "worst relative residual " + std::to_string(worst));
}

void criterion3() {
  std::mt19937 rng(3003);
  bool ok = true;
  std::string detail;

  auto verdict_vector = [](const ver::TheoremVerdict& v) {
    std::vector<bool> out;
    for (const auto& c : v.clauses) out.push_back(c.verdict);
    return out;
  };

  auto run_suite = [&](const Operator& t, const char* family) {
    WindowSpec w{t.dom, 0};
    std::vector<ver::TheoremVerdict> vs;
    vs.push_back(ver::check_thm23(t, w, 8, 1e-8));
    vs.push_back(ver::check_thm31(t, w, 40, 1e-8, 7));
    vs.push_back(ver::check_thm41(t, w, 3, 1e-8));
    vs.push_back(ver::check_thm46(t, w, 4, 1e-8));
    for (const auto& v : vs)
      if (!v.agreement) {
        ok = false;
        if (detail.empty()) detail = std::string(family) + " " + v.theorem_id + " disagreed";
      }
    std::vector<std::vector<bool>> sig;
    for (const auto& v : vs) sig.push_back(verdict_vector(v));
    return sig;
  };

  for (int i = 0; i < 4; ++i) {
    std::mt19937 fork(rng());  // same draw for both depths
    std::mt19937 fork2 = fork;
    Operator t16 = quasinormal_instance(fork, 1 + i % 2, 16);
    Operator t32 = quasinormal_instance(fork2, 1 + i % 2, 32);
    auto s16 = run_suite(t16, "positive");
    auto s32 = run_suite(t32, "positive");
    if (s16 != s32) {
      ok = false;
      if (detail.empty()) detail = "positive verdicts unstable under depth doubling";
    }
  }
  auto n16 = run_suite(negative_instance(16), "negative");
  auto n32 = run_suite(negative_instance(32), "negative");
  if (n16 != n32) {
    ok = false;
    if (detail.empty()) detail = "negative verdicts unstable under depth doubling";
  }
  report(3, "equivalence agreement (thm 2.3 / 3.1 / 4.1 / 4.6, depths 16 and 32)", ok, detail);
}

void criterion4() {
  bool ok = true;
  double worst = 0.0;
  auto check_pair = [&](const Operator& t) {
    WindowSpec w{t.dom, 0};
    auto up = cls::hyper_profile(t, w, 8, 1e-9, cls::Side::Expansive);
    for (double e : up.bracket_min_eigs) worst = std::max(worst, std::max(0.0, -e));
    if (!up.all_pass(1e-9)) ok = false;
    Operator d = con::cauchy_dual(t);
    d.boundary_depth = std::max(1, t.boundary_depth);
    auto down = cls::hyper_profile(d, w, 8, 1e-9, cls::Side::Contractive);
    for (double e : down.bracket_min_eigs) worst = std::max(worst, std::max(0.0, -e));
    if (!down.all_pass(1e-9)) ok = false;
  };
  check_pair(gen::gen_weighted_shift(gen::dirichlet_weights(63), 64));
  check_pair(gen::gen_brownian_shift(2.0, 64));
  report(4, "order-8 hyperexpansivity / dual hypercontractivity (Dirichlet, Brownian)", ok,
         "worst deficit " + std::to_string(worst));
}

void criterion5() {
  std::mt19937 rng(5005);
  bool ok = true;
  int checked = 0;
  for (int i = 0; i < 30; ++i) {
    Operator t = scalar_instance(rng, 16);
    WindowSpec w{t.dom, 0};
    for (int m : {2, 3, 4}) {
      auto v = ver::check_prop33(t, w, m, 1e-8);
      ++checked;
      if (!v.agreement) ok = false;
    }
  }
  report(5, "prop 3.3 T-side vs compression-side agreement (30 x m in {2,3,4})", ok,
         std::to_string(checked) + " comparisons");
}

void criterion6() {
  std::mt19937 rng(6006);
  std::uniform_real_distribution<double> u(0.85, 1.3);
  bool ok = true;
  int disagreements = 0;

  std::vector<std::vector<double>> families;
  for (double c : {0.8, 0.95, 1.0, 1.1, 1.5}) families.push_back(std::vector<double>(47, c));
  families.push_back(gen::dirichlet_weights(47));
  families.push_back(gen::dirichlet_weights(63));
  // s_n = 1 + 2^-(n+1): strictly concave
  {
    std::vector<double> v;
    for (int n = 0; n < 47; ++n) v.push_back(std::sqrt(1.0 + std::ldexp(1.0, -(n + 1))));
    families.push_back(v);
  }
  // shifted Dirichlet families (n+a+1)/(n+a): all 2-isometries
  for (int a : {2, 3, 5}) {
    std::vector<double> v;
    for (int n = 0; n < 47; ++n)
      v.push_back(std::sqrt(static_cast<double>(n + a + 1) / (n + a)));
    families.push_back(v);
  }
  // isometry tail after an expanding head: regular by the recurrence
  {
    std::vector<double> v(47, 1.0);
    v[0] = 1.4;
    families.push_back(v);
  }
  while (families.size() < 20) {
    std::vector<double> v;
    for (int n = 0; n < 31; ++n) v.push_back(u(rng));
    families.push_back(v);
  }

  for (const auto& wts : families) {
    int depth = static_cast<int>(wts.size()) + 1;
    Operator t = gen::gen_weighted_shift(wts, depth);
    WindowSpec w{t.dom, 0};
    if (gen::oracle(wts, "concave") != cls::is_concave(t, w, 1e-8)) ++disagreements;
    if (gen::oracle(wts, "two_isometry") != cls::is_two_isometry(t, w, 1e-8)) ++disagreements;
    if (gen::oracle(wts, "expansive") &&
        gen::oracle(wts, "delta_regular") != (cls::delta_regular_residual(t, w) <= 1e-8))
      ++disagreements;
  }
  ok = disagreements == 0;
  report(6, "weighted-shift oracle vs matrix classifiers (20 families)", ok,
         std::to_string(disagreements) + " disagreements");
}

void criterion7() {
  std::mt19937 rng(7007);
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    Operator t = quasinormal_instance(rng, 1 + i % 2, 20);
    WindowSpec w{t.dom, 0};
    CMatrix k1 = cls::delta_kernel_projector(t, w, 1);
    for (int n = 2; n <= 4; ++n) {
      double d = la::op_norm(cls::delta_kernel_projector(t, w, n) - k1);
      worst = std::max(worst, d);
      if (d > 1e-7) ok = false;
    }
    auto v46 = ver::check_thm46(t, w, 3, 1e-8);
    const auto& kc = v46.at("kernel_equality_a2_an");
    worst = std::max(worst, kc.residual);
    if (!kc.verdict) ok = false;
  }
  report(7, "kernel identities N(Delta_T)=N(Delta_T^n) and N(A_2)=N(A_3)", ok,
         "worst projector distance " + std::to_string(worst));
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(8, "runtime budget (< 300 s)", secs < 300.0, std::to_string(secs) + " s");
  return g_failures == 0 ? 0 : 1;
}
