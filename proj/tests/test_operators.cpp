#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "concavelift/operators.hpp"

using namespace clift;
using la::CMatrix;

TEST_CASE("make_operator validates shape and finiteness") {
  GradedSpace h = make_block_space("h", 2);
  CHECK_THROWS_AS(make_operator(CMatrix::Zero(3, 2), h, h), Error);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_operator(bad, h, h), Error);
  Operator t = make_operator(CMatrix::Identity(2, 2), h, h);
  CHECK(t.square());
  CHECK(t.dom_dim() == 2);
}

TEST_CASE("adjoint swaps spaces; double adjoint is the identity map") {
  GradedSpace a = make_block_space("a", 2), b = make_block_space("b", 3);
  CMatrix m = CMatrix::Zero(3, 2);
  m(0, 0) = la::Complex(1, 2);
  Operator t = make_operator(m, a, b, 1);
  Operator ta = adjoint(t);
  CHECK(ta.dom == b);
  CHECK(ta.cod == a);
  CHECK(ta.matrix(0, 0) == la::Complex(1, -2));
  CHECK(la::op_norm(adjoint(ta).matrix - t.matrix) == doctest::Approx(0.0));
}

TEST_CASE("compose checks space identity nominally and adds shift budgets") {
  GradedSpace a = make_block_space("a", 2);
  GradedSpace a2 = make_block_space("a2", 2);  // same shape, different label
  Operator ia = identity_on(a);
  Operator ia2 = identity_on(a2);
  CHECK_THROWS_AS(compose(ia, ia2), Error);

  GradedSpace t = make_tower("t", 1, 4);
  Operator s = forward_shift(t);
  Operator s2 = compose(s, s);
  CHECK(s2.boundary_depth == 2);
  CHECK(la::op_norm(s2.matrix - s.matrix * s.matrix) == doctest::Approx(0.0));
}

TEST_CASE("forward_shift moves level k to level k+1 and kills the top") {
  GradedSpace t = make_tower("t", 2, 3);
  Operator s = forward_shift(t);
  CHECK(s.boundary_depth == 1);
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(6);
  e0(0) = 1.0;
  Eigen::VectorXcd v = s.matrix * e0;
  CHECK(std::abs(v(2) - la::Complex(1, 0)) < 1e-15);
  // top level absorbs
  Eigen::VectorXcd etop = Eigen::VectorXcd::Zero(6);
  etop(4) = 1.0;
  CHECK((s.matrix * etop).norm() == doctest::Approx(0.0));
  CHECK_THROWS_AS(forward_shift(make_block_space("b", 3)), Error);
}

TEST_CASE("assemble and slice round-trip a block matrix") {
  GradedSpace dom = direct_sum({make_block_space("x", 2), make_block_space("y", 1)});
  CMatrix axx(2, 2), axy(2, 1);
  axx << 1, 2, 3, 4;
  axy << 5, 6;
  BlockLayout l;
  l.row_labels = {"x", "y"};
  l.col_labels = {"x", "y"};
  l.cod = dom;
  l.dom = dom;
  l.entries = {{axx, axy}, {std::nullopt, std::nullopt}};
  Operator t = assemble(l);
  CHECK(la::op_norm(slice(t, "x", "x") - axx) == doctest::Approx(0.0));
  CHECK(la::op_norm(slice(t, "x", "y") - axy) == doctest::Approx(0.0));
  CHECK(la::op_norm(slice(t, "y", "x")) == doctest::Approx(0.0));

  l.entries[0][0] = CMatrix::Zero(1, 1);  // wrong block shape
  CHECK_THROWS_AS(assemble(l), Error);
}

TEST_CASE("embed is an isometry into the bottom tower level") {
  GradedSpace sub = make_block_space("m", 2);
  GradedSpace whole = direct_sum({make_block_space("pad", 1), make_tower("t", 2, 3)});
  Operator j = embed(sub, whole, "t");
  CHECK(la::op_norm(j.matrix.adjoint() * j.matrix - CMatrix::Identity(2, 2)) < 1e-15);
  CHECK(std::abs(j.matrix(1, 0) - la::Complex(1, 0)) < 1e-15);  // lands after "pad"

  GradedSpace one = make_block_space("u", 1);
  Operator j1 = embed(one, whole, "t", 1);  // second slot of the base
  CHECK(std::abs(j1.matrix(2, 0) - la::Complex(1, 0)) < 1e-15);
  CHECK_THROWS_AS(embed(sub, whole, "t", 1), Error);  // does not fit
  CHECK_THROWS_AS(embed(sub, whole, "missing"), Error);
}

TEST_CASE("compress to a projector range") {
  GradedSpace h = make_block_space("h", 3);
  CMatrix m(3, 3);
  m << 2, 0, 0, 0, 5, 1, 0, 1, 5;
  Operator t = make_operator(m, h, h);
  CMatrix p = CMatrix::Zero(3, 3);
  p(1, 1) = 1.0;
  p(2, 2) = 1.0;
  Compression c = compress(t, p);
  CHECK(c.op.dom_dim() == 2);
  auto e = la::herm_eig(c.op.matrix);
  CHECK(e.values(0) == doctest::Approx(4.0));
  CHECK(e.values(1) == doctest::Approx(6.0));

  CMatrix notp = 0.5 * CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(compress(t, notp), Error);
}

TEST_CASE("lifting_residual vanishes for an exact lifting and flags a fake one") {
  GradedSpace h = make_tower("h", 1, 4);
  Operator t = forward_shift(h);
  // S = T lifted along the identity embedding is trivially a lifting
  Operator j = identity_on(h);
  WindowSpec w{h, 0};
  CHECK(lifting_residual(t, j, t, w) == doctest::Approx(0.0));

  Operator not_t = identity_on(h);
  CHECK(lifting_residual(not_t, j, t, w) > 0.5);
}
