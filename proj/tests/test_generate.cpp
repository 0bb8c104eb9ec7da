#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "concavelift/generate.hpp"

using namespace clift;
using la::CMatrix;
namespace cls = clift::classify;
namespace gen = clift::generate;
using gen::Rational;

TEST_CASE("dirichlet weight squares are (n+2)/(n+1) exactly") {
  auto sq = gen::dirichlet_weight_squares(5);
  REQUIRE(sq.size() == 5);
  CHECK(sq[0] == Rational(2, 1));
  CHECK(sq[3] == Rational(5, 4));
  auto w = gen::dirichlet_weights(3);
  CHECK(w[1] == doctest::Approx(std::sqrt(1.5)));
}

TEST_CASE("exact_oracle: the Dirichlet recurrence closes in rational arithmetic") {
  auto sq = gen::dirichlet_weight_squares(64);
  // s_n s_{n+1} - 2 s_n + 1 = 0 termwise: (n+2)/(n+1) * (n+3)/(n+2) - 2(n+2)/(n+1) + 1
  for (size_t n = 0; n + 1 < sq.size(); ++n)
    CHECK(sq[n] * sq[n + 1] - 2 * sq[n] + 1 == 0);
  CHECK(gen::exact_oracle(sq, "two_isometry"));
  CHECK(gen::exact_oracle(sq, "concave"));
  CHECK(gen::exact_oracle(sq, "expansive"));
  CHECK_FALSE(gen::exact_oracle(sq, "isometry"));
  CHECK_FALSE(gen::exact_oracle(sq, "delta_regular"));
}

TEST_CASE("exact_oracle on constant weights") {
  std::vector<Rational> ones(10, Rational(1));
  CHECK(gen::exact_oracle(ones, "isometry"));
  CHECK(gen::exact_oracle(ones, "two_isometry"));
  CHECK(gen::exact_oracle(ones, "delta_regular"));

  std::vector<Rational> grow(10, Rational(9, 4));  // s_n = 9/4 > 1
  CHECK(gen::exact_oracle(grow, "expansive"));
  CHECK(gen::exact_oracle(grow, "delta_regular"));  // s_{n+1} = s_n
  CHECK_FALSE(gen::exact_oracle(grow, "concave"));  // s^2 - 2s + 1 = 25/16 > 0
  CHECK_FALSE(gen::exact_oracle(grow, "isometry"));

  std::vector<Rational> shrink(10, Rational(4, 9));
  CHECK_FALSE(gen::exact_oracle(shrink, "expansive"));
  CHECK(gen::exact_oracle(shrink, "concave") ==
        (Rational(4, 9) * Rational(4, 9) - 2 * Rational(4, 9) + 1 <= 0));
}

TEST_CASE("floating oracle agrees with the matrix classifiers on weighted shifts") {
  const int depth = 16;
  std::vector<std::vector<double>> families = {
      std::vector<double>(depth - 1, 1.0),
      gen::dirichlet_weights(depth - 1),
      std::vector<double>(depth - 1, 1.2),
      std::vector<double>(depth - 1, 0.8),
  };
  // s_n = 1 + 2^-(n+1): strictly concave (b2 = x(x-1)/2 < 0), not 2-isometric
  std::vector<double> mixed;
  for (int n = 0; n < depth - 1; ++n) mixed.push_back(std::sqrt(1.0 + std::ldexp(1.0, -(n + 1))));
  families.push_back(mixed);

  for (const auto& wts : families) {
    Operator t = gen::gen_weighted_shift(wts, depth);
    WindowSpec w{t.dom, 0};
    CHECK(gen::oracle(wts, "isometry") == cls::is_isometry(t, w, 1e-8));
    CHECK(gen::oracle(wts, "two_isometry") == cls::is_two_isometry(t, w, 1e-8));
    CHECK(gen::oracle(wts, "concave") == cls::is_concave(t, w, 1e-8));
    if (gen::oracle(wts, "expansive"))
      CHECK(gen::oracle(wts, "delta_regular") == (cls::delta_regular_residual(t, w) <= 1e-8));
  }
}

TEST_CASE("gen_brownian_shift produces a regular 2-isometry with ||Delta|| = sigma^2") {
  Operator t = gen::gen_brownian_shift(3.0, 6);
  WindowSpec w{t.dom, 0};
  CHECK(t.dom_dim() == 7);
  CHECK(cls::is_two_isometry(t, w, 1e-10));
  CHECK(cls::is_delta_regular(t, w, 1e-8));
  CHECK(cls::covariance(t, w) == doctest::Approx(3.0));
  CHECK_THROWS_AS(gen::gen_brownian_shift(1.0, 3), Error);  // depth too small
}

TEST_CASE("gen_regular_concave_scalar is concave and regular for any contraction") {
  GradedSpace hb = make_block_space("b", 2);
  CMatrix c(2, 2);
  c << 0.5, 0.2, 0.0, 0.4;
  Operator t_hat = make_operator(c, hb, hb);

  Operator t = gen::gen_regular_concave_scalar(t_hat, std::sqrt(2.0), 8);
  WindowSpec w{t.dom, 0};
  CHECK(cls::is_concave(t, w, 1e-8));
  CHECK(cls::is_delta_regular(t, w, 1e-8));
  // Delta restricted to its range is (gamma^2 - 1) I
  CHECK(cls::covariance(t, w) == doctest::Approx(1.0));

  CHECK_THROWS_AS(gen::gen_regular_concave_scalar(t_hat, 0.9, 8), Error);  // gamma < ||t_hat|| bound
  CHECK_THROWS_AS(gen::gen_regular_concave_scalar(t_hat, std::sqrt(2.0), 2), Error);

  CMatrix e(2, 2);
  e << 2.0, 0.0, 0.0, 0.1;
  CHECK_THROWS_AS(gen::gen_regular_concave_scalar(make_operator(e, hb, hb), 3.0, 8), Error);
}

TEST_CASE("gen_weighted_shift validates its weight list") {
  CHECK_THROWS_AS(gen::gen_weighted_shift({1.0, 1.0}, 8), Error);  // too few
  Operator t = gen::gen_weighted_shift({2.0, 3.0, 4.0}, 4);
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
  e1(1) = 1.0;
  CHECK(std::abs((t.matrix * e1)(2) - la::Complex(3.0, 0)) < 1e-15);
}

TEST_CASE("gen_two_hypercontraction is a left-invertible 2-hypercontraction") {
  for (unsigned seed : {1u, 7u, 42u}) {
    Operator c = gen::gen_two_hypercontraction(seed);
    WindowSpec w{c.dom, 0};
    CHECK(la::op_norm(c.matrix) <= 1.0 + 1e-10);
    // left-invertible away from the absorbing boundary
    CMatrix gram = c.matrix.adjoint() * c.matrix;
    CHECK(windowed_min_eig(gram, window_mask(w, 1)) > 1e-6);
    auto hp = cls::hyper_profile(c, w, 2, 1e-9, cls::Side::Contractive);
    CHECK(hp.all_pass(1e-9));
  }
  // deterministic for a fixed seed
  Operator a = gen::gen_two_hypercontraction(5);
  Operator b = gen::gen_two_hypercontraction(5);
  CHECK(la::op_norm(a.matrix - b.matrix) == doctest::Approx(0.0));
}
