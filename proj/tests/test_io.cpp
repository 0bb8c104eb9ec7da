#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include "concavelift/generate.hpp"
#include "concavelift/io.hpp"
#include "concavelift/verify.hpp"

using namespace clift;
using la::CMatrix;
using json = nlohmann::json;

TEST_CASE("matrix serialization round-trips complex entries") {
  CMatrix m(2, 2);
  m << la::Complex(1, 2), 3.0, la::Complex(0, -4), 0.5;
  CMatrix back = io::matrix_from_json(io::matrix_to_json(m));
  CHECK(la::op_norm(back - m) == doctest::Approx(0.0));

  // bare numbers are accepted as real entries
  CMatrix r = io::matrix_from_json(json::parse("[[1, 2], [3, 4]]"));
  CHECK(r(1, 0).real() == doctest::Approx(3.0));
}

TEST_CASE("matrix parsing rejects malformed input") {
  CHECK_THROWS_AS(io::matrix_from_json(json::parse("[]")), Error);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse("[[1],[2,3]]")), Error);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse("[[\"x\"]]")), Error);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse("[[[1,2,3]]]")), Error);
}

TEST_CASE("space serialization round-trips towers and plain blocks") {
  GradedSpace s = direct_sum({make_tower("shift", 2, 5), make_block_space("base", 3)});
  json j = io::space_to_json(s);
  GradedSpace parts[2] = {io::space_from_json(j[0]), io::space_from_json(j[1])};
  GradedSpace back = direct_sum({parts[0], parts[1]});
  CHECK(back == s);
}

TEST_CASE("dense operator specs round-trip") {
  Operator t = generate::gen_brownian_shift(2.0, 6);
  json spec = io::operator_to_spec_json(t);
  CHECK(spec["version"] == 1);
  Operator back = io::operator_from_json(spec);
  CHECK(back.dom == t.dom);
  CHECK(back.boundary_depth == t.boundary_depth);
  CHECK(la::op_norm(back.matrix - t.matrix) == doctest::Approx(0.0));
}

TEST_CASE("operator_from_string validates version, kind and JSON shape") {
  CHECK_THROWS_AS(io::operator_from_string("not json"), Error);
  CHECK_THROWS_AS(io::operator_from_string(R"({"version":2,"operator":{}})"), Error);
  CHECK_THROWS_AS(io::operator_from_string(R"({"version":1})"), Error);
  CHECK_THROWS_AS(io::operator_from_string(R"({"version":1,"operator":{"kind":"nope"}})"), Error);
}

TEST_CASE("weighted_shift and generator kinds") {
  Operator t = io::operator_from_string(
      R"({"version":1,"operator":{"kind":"weighted_shift","weights":[2,3],"depth":3}})");
  CHECK(t.dom_dim() == 3);
  CHECK(t.matrix(1, 0).real() == doctest::Approx(2.0));

  Operator d = io::operator_from_string(
      R"({"version":1,"operator":{"kind":"generator","name":"dirichlet","params":{"depth":8}}})");
  CHECK(d.dom_dim() == 8);
  CHECK(classify::is_two_isometry(d, WindowSpec{d.dom, 0}, 1e-9));

  CHECK_THROWS_AS(io::operator_from_string(
                      R"({"version":1,"operator":{"kind":"generator","name":"nope"}})"),
                  Error);
}

TEST_CASE("blocks kind assembles builtins and explicit entries") {
  const char* spec = R"({
    "version": 1,
    "spaces": [
      {"label": "shift", "dim": 4, "tower": {"base_dim": 1, "depth": 4}},
      {"label": "u", "dim": 1}
    ],
    "operator": {"kind": "blocks", "layout": [
      [{"builtin": "shift"}, {"builtin": "embed", "scale": 2.0}],
      [null, {"builtin": "identity"}]
    ]}
  })";
  Operator t = io::operator_from_string(spec);
  // this is exactly the Brownian shift with sigma = 2
  Operator b = generate::gen_brownian_shift(2.0, 4);
  CHECK(la::op_norm(t.matrix - b.matrix) == doctest::Approx(0.0));

  const char* bad = R"({
    "version": 1,
    "spaces": [{"label": "u", "dim": 2}],
    "operator": {"kind": "blocks", "layout": [[{"builtin": "shift"}]]}
  })";
  CHECK_THROWS_AS(io::operator_from_string(bad), Error);
}

TEST_CASE("classification and verdict serialization carry ids and residuals") {
  Operator t = generate::gen_brownian_shift(2.0, 8);
  WindowSpec w{t.dom, 0};
  auto rep = classify::classify_all(t, w, 3, 1e-8);
  json jc = io::classification_to_json(rep);
  CHECK(jc["covariance"].get<double>() == doctest::Approx(2.0));
  bool saw_two_iso = false;
  for (const auto& p : jc["predicates"])
    if (p["id"] == "two_isometry") {
      saw_two_iso = true;
      CHECK(p["verdict"].get<bool>());
    }
  CHECK(saw_two_iso);

  auto v = verify::check_thm23(t, w, 8, 1e-8);
  json jv = io::verdict_to_json(v);
  CHECK(jv["theorem"] == "thm2.3");
  CHECK(jv["agreement"].get<bool>());
  CHECK(jv["clauses"].size() == v.clauses.size());
}

TEST_CASE("report envelope harvests verdicts and residuals from the body") {
  Operator t = generate::gen_brownian_shift(2.0, 8);
  WindowSpec w{t.dom, 0};
  json body = io::verdict_to_json(verify::check_thm23(t, w, 8, 1e-8));
  json env = io::report_envelope("verify", {{"theorem", "2.3"}}, body, 1e-8, 42);
  CHECK(env["version"] == 1);
  CHECK(env["command"] == "verify");
  CHECK(env["seed"] == 42);
  CHECK(env["tolerances"]["tol"].get<double>() == doctest::Approx(1e-8));
  CHECK(env["verdicts"].size() == body["clauses"].size());
  CHECK(env["residuals"].size() == body["clauses"].size());
  CHECK(env["result"] == body);
}

TEST_CASE("lifting serialization includes matrices only on request") {
  Operator t = generate::gen_brownian_shift(2.0, 8);
  WindowSpec w{t.dom, 0};
  auto lr = construct::lift_regular(t, w, 6);
  json lean = io::lifting_to_json(lr, false);
  CHECK_FALSE(lean.contains("S"));
  CHECK(lean["tag"] == lr.tag);
  json full = io::lifting_to_json(lr, true);
  CMatrix s = io::matrix_from_json(full["S"]);
  CHECK(la::op_norm(s - lr.S.matrix) == doctest::Approx(0.0));
}
