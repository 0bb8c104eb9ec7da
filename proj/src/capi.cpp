#include "concavelift.h"

#include <cstring>
#include <nlohmann/json.hpp>
#include <string>

#include "concavelift/generate.hpp"
#include "concavelift/io.hpp"

namespace {

using clift::Error;
using clift::ErrorCode;
using clift::Operator;
using clift::WindowSpec;
using json = nlohmann::json;

thread_local std::string g_last_error;
thread_local std::string g_last_error_code;

clift_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::UnknownGenerator:
    case ErrorCode::InvalidArgument:
      return CLIFT_ERR_PARSE;
    case ErrorCode::NotHermitian:
    case ErrorCode::NoConvergence:
    case ErrorCode::NotPSD:
    case ErrorCode::Singular:
    case ErrorCode::NotProjector:
    case ErrorCode::NotMonotone:
      return CLIFT_ERR_NUMERIC;
    default:
      return CLIFT_ERR_PRECONDITION;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
clift_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    g_last_error = e.what();
    g_last_error_code = clift::error_code_name(e.code());
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    g_last_error_code = "Internal";
    return CLIFT_ERR_NUMERIC;
  }
}

json parse_params(const char* params_json) {
  if (params_json == nullptr || params_json[0] == '\0') return json::object();
  json p = json::parse(params_json, nullptr, false);
  if (p.is_discarded() || !p.is_object())
    clift::fail(ErrorCode::ParseError, "params must be a JSON object");
  return p;
}

}  // namespace

struct clift_operator {
  Operator op;
};

extern "C" {

clift_status clift_operator_from_json(const char* spec_json, clift_operator** out) {
  if (spec_json == nullptr || out == nullptr) {
    g_last_error = "null argument";
    g_last_error_code = "InvalidArgument";
    return CLIFT_ERR_PARSE;
  }
  return guarded([&]() -> clift_status {
    auto* h = new clift_operator{clift::io::operator_from_string(spec_json)};
    *out = h;
    return CLIFT_OK;
  });
}

void clift_operator_free(clift_operator* op) { delete op; }

int clift_operator_dim(const clift_operator* op) { return op ? op->op.dom_dim() : -1; }

clift_status clift_operator_to_json(const clift_operator* op, char** out_json) {
  if (op == nullptr || out_json == nullptr) return CLIFT_ERR_PARSE;
  return guarded([&]() -> clift_status {
    *out_json = dup_string(clift::io::operator_to_spec_json(op->op).dump());
    return CLIFT_OK;
  });
}

clift_status clift_classify(const clift_operator* op, const char* params_json, char** out_json) {
  if (op == nullptr || out_json == nullptr) return CLIFT_ERR_PARSE;
  return guarded([&]() -> clift_status {
    json p = parse_params(params_json);
    double tol = p.value("tol", clift::la::Tol::identity);
    int margin = p.value("margin", 0);
    int order = p.value("order", 4);
    WindowSpec w{op->op.dom, margin};
    auto rep = clift::classify::classify_all(op->op, w, order, tol);
    json body = clift::io::classification_to_json(rep);
    *out_json = dup_string(clift::io::report_envelope("classify", p, body, tol, 0).dump());
    return CLIFT_OK;
  });
}

clift_status clift_lift(const clift_operator* op, const char* params_json, char** out_json) {
  if (op == nullptr || out_json == nullptr) return CLIFT_ERR_PARSE;
  return guarded([&]() -> clift_status {
    json p = parse_params(params_json);
    double tol = p.value("tol", clift::la::Tol::identity);
    int margin = p.value("margin", 0);
    int depth = p.value("depth", 8);
    bool mats = p.value("include_matrices", false);
    std::string method = p.value("method", "basic");
    WindowSpec w{op->op.dom, margin};
    clift::construct::LiftingResult lr;
    if (method == "basic") {
      lr = clift::construct::lift_basic(op->op, w, depth, tol);
    } else if (method == "minimal") {
      clift::la::CMatrix a = p.contains("majorant")
                                 ? clift::io::matrix_from_json(p["majorant"])
                                 : clift::classify::delta_windowed(op->op, w);
      lr = clift::construct::lift_minimal(op->op, a, w, depth, tol);
    } else if (method == "regular") {
      lr = clift::construct::lift_regular(op->op, w, depth, tol);
    } else {
      clift::fail(ErrorCode::InvalidArgument, "unknown lift method '" + method + "'");
    }
    json body = clift::io::lifting_to_json(lr, mats);
    *out_json = dup_string(clift::io::report_envelope("lift", p, body, tol, 0).dump());
    return CLIFT_OK;
  });
}

clift_status clift_verify(const clift_operator* op, const char* params_json, char** out_json) {
  if (op == nullptr || out_json == nullptr) return CLIFT_ERR_PARSE;
  return guarded([&]() -> clift_status {
    json p = parse_params(params_json);
    double tol = p.value("tol", clift::la::Tol::identity);
    int margin = p.value("margin", 0);
    int order = p.value("order", 4);
    int depth = p.value("depth", 8);
    int samples = p.value("samples", 50);
    long seed = p.value("seed", 1L);
    std::string theorem = p.value("theorem", "2.3");
    WindowSpec w{op->op.dom, margin};
    clift::verify::TheoremVerdict v;
    if (theorem == "2.3") {
      v = clift::verify::check_thm23(op->op, w, depth, tol);
    } else if (theorem == "3.1") {
      v = clift::verify::check_thm31(op->op, w, samples, tol, static_cast<unsigned>(seed));
    } else if (theorem == "3.3") {
      v = clift::verify::check_prop33(op->op, w, std::max(order, 2), tol);
    } else if (theorem == "3.4") {
      v = clift::verify::check_thm34(op->op, w, order, tol);
    } else if (theorem == "4.1") {
      v = clift::verify::check_thm41(op->op, w, std::max(order, 2), tol);
    } else if (theorem == "4.4b") {
      v = clift::verify::check_cor44b(op->op, w, tol);
    } else if (theorem == "4.6") {
      v = clift::verify::check_thm46(op->op, w, std::max(order, 3), tol);
    } else {
      clift::fail(ErrorCode::InvalidArgument, "unknown theorem '" + theorem + "'");
    }
    json body = clift::io::verdict_to_json(v);
    *out_json = dup_string(clift::io::report_envelope("verify", p, body, tol, seed).dump());
    return v.agreement ? CLIFT_OK : CLIFT_ERR_DISAGREEMENT;
  });
}

clift_status clift_generate(const char* params_json, char** out_json) {
  if (out_json == nullptr) return CLIFT_ERR_PARSE;
  return guarded([&]() -> clift_status {
    json p = parse_params(params_json);
    if (!p.contains("name")) clift::fail(ErrorCode::ParseError, "generator params need 'name'");
    json op{{"kind", "generator"},
            {"name", p["name"]},
            {"params", p.value("params", json::object())},
            {"seed", p.value("seed", 0L)}};
    json spec{{"version", 1}, {"operator", op}};
    Operator t = clift::io::operator_from_json(spec);  // validates via the generators
    json out = clift::io::operator_to_spec_json(t);
    out["provenance"] = op;
    *out_json = dup_string(out.dump());
    return CLIFT_OK;
  });
}

void clift_string_free(char* s) { std::free(s); }

const char* clift_last_error(void) { return g_last_error.c_str(); }
const char* clift_last_error_code(void) { return g_last_error_code.c_str(); }

}  // extern "C"
