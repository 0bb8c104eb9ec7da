#include "concavelift/io.hpp"

#include <nlohmann/json.hpp>

#include "concavelift/generate.hpp"

namespace clift::io {

namespace {

using la::CMatrix;

[[noreturn]] void parse_fail(const std::string& what) { fail(ErrorCode::ParseError, what); }

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) parse_fail(std::string("missing field '") + key + "'");
  return *it;
}

Operator from_generator(const json& op) {
  std::string name = need(op, "name").get<std::string>();
  json params = op.value("params", json::object());
  long seed = op.value("seed", 0L);
  if (name == "brownian")
    return generate::gen_brownian_shift(params.value("sigma", 1.0), params.value("depth", 16));
  if (name == "dirichlet") {
    int depth = params.value("depth", 16);
    return generate::gen_weighted_shift(generate::dirichlet_weights(depth - 1), depth);
  }
  if (name == "weighted_shift") {
    auto weights = need(params, "weights").get<std::vector<double>>();
    return generate::gen_weighted_shift(weights, params.value("depth",
                                                             static_cast<int>(weights.size()) + 1));
  }
  if (name == "regular_concave_scalar") {
    Operator t_hat = [&]() -> Operator {
      if (params.contains("t_hat")) {
        CMatrix m = matrix_from_json(params["t_hat"]);
        GradedSpace s = make_block_space("base", static_cast<int>(m.rows()));
        return Operator{std::move(m), s, s, 0};
      }
      int dim = params.value("dim", 1);
      double c = params.value("c", 0.5);
      GradedSpace s = make_block_space("base", dim);
      return Operator{c * CMatrix::Identity(dim, dim), s, s, 0};
    }();
    return generate::gen_regular_concave_scalar(t_hat, params.value("gamma", 1.5),
                                                params.value("shift_depth", 16));
  }
  if (name == "two_hypercontraction")
    return generate::gen_two_hypercontraction(static_cast<unsigned>(seed));
  fail(ErrorCode::UnknownGenerator, "unknown generator '" + name + "'");
}

GradedSpace spaces_from_json(const json& spec) {
  if (!spec.contains("spaces")) parse_fail("dense/blocks operators need a 'spaces' list");
  std::vector<GradedSpace> parts;
  for (const auto& s : spec["spaces"]) parts.push_back(space_from_json(s));
  return direct_sum(parts);
}

Operator from_blocks(const json& spec, const json& op) {
  GradedSpace space = spaces_from_json(spec);
  const json& layout = need(op, "layout");
  size_t nb = space.blocks.size();
  if (layout.size() != nb) parse_fail("blocks layout row count must match the space list");
  CMatrix m = CMatrix::Zero(space.total_dim(), space.total_dim());
  for (size_t i = 0; i < nb; ++i) {
    if (layout[i].size() != nb) parse_fail("blocks layout must be square over the space list");
    const Block& rb = space.blocks[i];
    int roff = space.block_offset(rb.label);
    for (size_t j = 0; j < nb; ++j) {
      const json& cell = layout[i][j];
      if (cell.is_null()) continue;
      const Block& cb = space.blocks[j];
      int coff = space.block_offset(cb.label);
      if (cell.is_object() && cell.contains("builtin")) {
        std::string b = cell["builtin"].get<std::string>();
        double scale = cell.value("scale", 1.0);
        if (b == "shift") {
          if (i != j || !rb.tower) parse_fail("builtin 'shift' needs a diagonal tower cell");
          GradedSpace sub;
          sub.blocks.push_back(rb);
          m.block(roff, coff, rb.dim, rb.dim) = scale * forward_shift(sub).matrix;
        } else if (b == "identity") {
          if (rb.dim != cb.dim) parse_fail("builtin 'identity' needs equal block dims");
          m.block(roff, coff, rb.dim, cb.dim) = scale * CMatrix::Identity(rb.dim, cb.dim);
        } else if (b == "embed") {
          // sub-block into the bottom tower level
          if (!rb.tower || rb.tower->base_dim < cb.dim)
            parse_fail("builtin 'embed' needs a tower row with base_dim >= col dim");
          m.block(roff, coff, cb.dim, cb.dim) = scale * CMatrix::Identity(cb.dim, cb.dim);
        } else {
          parse_fail("unknown builtin '" + b + "'");
        }
      } else {
        CMatrix e = matrix_from_json(cell.is_object() ? cell["entries"] : cell);
        if (e.rows() > rb.dim || e.cols() != cb.dim)
          parse_fail("block entry dimensions do not fit the declared blocks");
        m.block(roff, coff, e.rows(), e.cols()) = e;
      }
    }
  }
  return Operator{std::move(m), space, space, spec.value("boundary_depth", 1)};
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) parse_fail("matrix must be a non-empty nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) parse_fail("ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j[i][c];
      if (e.is_number()) {
        m(i, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(i, c) = la::Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        parse_fail("matrix entries must be numbers or [re, im] pairs");
      }
    }
  }
  if (!la::all_finite(m)) parse_fail("matrix entries must be finite");
  return m;
}

json space_to_json(const GradedSpace& s) {
  json out = json::array();
  for (const auto& b : s.blocks) {
    json jb{{"label", b.label}, {"dim", b.dim}};
    if (b.tower) jb["tower"] = {{"base_dim", b.tower->base_dim}, {"depth", b.tower->depth}};
    out.push_back(std::move(jb));
  }
  return out;
}

GradedSpace space_from_json(const json& j) {
  std::string label = need(j, "label").get<std::string>();
  if (j.contains("tower")) {
    const json& t = j["tower"];
    return make_tower(label, need(t, "base_dim").get<int>(), need(t, "depth").get<int>());
  }
  return make_block_space(label, need(j, "dim").get<int>());
}

Operator operator_from_json(const json& spec) {
  if (spec.value("version", 0) != 1) parse_fail("unsupported spec version (expected 1)");
  const json& op = need(spec, "operator");
  std::string kind = need(op, "kind").get<std::string>();
  if (kind == "generator") return from_generator(op);
  if (kind == "weighted_shift") {
    auto weights = need(op, "weights").get<std::vector<double>>();
    int depth = op.value("depth", static_cast<int>(weights.size()) + 1);
    return generate::gen_weighted_shift(weights, depth);
  }
  if (kind == "dense") {
    GradedSpace space = spaces_from_json(spec);
    CMatrix m = matrix_from_json(need(op, "entries"));
    if (m.rows() != space.total_dim() || m.cols() != space.total_dim())
      parse_fail("dense entries do not match the declared space dimension");
    return Operator{std::move(m), space, space, spec.value("boundary_depth", 1)};
  }
  if (kind == "blocks") return from_blocks(spec, op);
  parse_fail("unknown operator kind '" + kind + "'");
}

Operator operator_from_string(const std::string& text) {
  json spec = json::parse(text, nullptr, false);
  if (spec.is_discarded()) parse_fail("invalid JSON");
  return operator_from_json(spec);
}

json operator_to_spec_json(const Operator& t) {
  return json{{"version", 1},
              {"spaces", space_to_json(t.dom)},
              {"boundary_depth", t.boundary_depth},
              {"operator", {{"kind", "dense"}, {"entries", matrix_to_json(t.matrix)}}}};
}

json classification_to_json(const classify::ClassificationReport& r) {
  json preds = json::array();
  for (const auto& [name, pr] : r.entries)
    preds.push_back({{"id", name}, {"verdict", pr.verdict}, {"residual", pr.residual}});
  return json{{"predicates", std::move(preds)},
              {"covariance", r.covariance},
              {"window_budget", r.window_budget},
              {"tol", r.tol}};
}

json verdict_to_json(const verify::TheoremVerdict& v) {
  json clauses = json::array();
  for (const auto& c : v.clauses)
    clauses.push_back({{"id", c.id}, {"verdict", c.verdict}, {"residual", c.residual}});
  return json{{"theorem", v.theorem_id}, {"clauses", std::move(clauses)},
              {"agreement", v.agreement}, {"tol", v.tol},
              {"window_budget", v.window_budget}, {"notes", v.notes}};
}

json lifting_to_json(const construct::LiftingResult& lr, bool include_matrices) {
  json residuals = json::array();
  for (const auto& [name, val] : lr.residuals)
    residuals.push_back({{"id", name}, {"residual", val}});
  json out{{"tag", lr.tag},
           {"degenerate", lr.degenerate},
           {"covariance", lr.covariance},
           {"ambient", space_to_json(lr.ambient)},
           {"residuals", std::move(residuals)}};
  if (include_matrices) {
    out["S"] = matrix_to_json(lr.S.matrix);
    out["J"] = matrix_to_json(lr.J.matrix);
    out["W"] = matrix_to_json(lr.W);
    out["X"] = matrix_to_json(lr.X);
  }
  return out;
}

json canonical_blocks_to_json(const construct::CanonicalBlocks& cb, bool include_matrices) {
  json residuals = json::array();
  for (const auto& [name, val] : cb.residuals)
    residuals.push_back({{"id", name}, {"residual", val}});
  json out{{"sigma", cb.sigma},
           {"kernel_dim", cb.basis_kernel.cols()},
           {"range_dim", cb.basis_range.cols()},
           {"residuals", std::move(residuals)}};
  if (include_matrices) {
    out["V"] = matrix_to_json(cb.V.matrix);
    out["Z"] = matrix_to_json(cb.Z.matrix);
    out["T_hat"] = matrix_to_json(cb.T_hat.matrix);
    out["delta0"] = matrix_to_json(cb.delta0);
    out["basis_kernel"] = matrix_to_json(cb.basis_kernel);
    out["basis_range"] = matrix_to_json(cb.basis_range);
  }
  return out;
}

json report_envelope(const std::string& command, const json& params, const json& body,
                     double tol, long seed) {
  json verdicts = json::array();
  json residuals = json::array();
  auto harvest = [&](const json& arr) {
    for (const auto& c : arr) {
      if (c.contains("verdict"))
        verdicts.push_back({{"id", c["id"]}, {"verdict", c["verdict"]}});
      if (c.contains("residual")) residuals.push_back({{"id", c["id"]}, {"value", c["residual"]}});
    }
  };
  if (body.contains("clauses")) harvest(body["clauses"]);
  if (body.contains("predicates")) harvest(body["predicates"]);
  if (body.contains("residuals")) harvest(body["residuals"]);
  return json{{"version", 1},       {"command", command}, {"params", params},
              {"result", body},     {"verdicts", verdicts}, {"residuals", residuals},
              {"seed", seed},       {"tolerances", {{"tol", tol}}}};
}

}  // namespace clift::io
