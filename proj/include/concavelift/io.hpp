#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "concavelift/construct.hpp"

namespace clift::io {

using json = nlohmann::json;

// OperatorSpecFile v1. Throws Error(ParseError) on malformed input.
Operator operator_from_json(const json& spec);
Operator operator_from_string(const std::string& text);

json matrix_to_json(const la::CMatrix& m);
la::CMatrix matrix_from_json(const json& j);

json space_to_json(const GradedSpace& s);
GradedSpace space_from_json(const json& j);

json operator_to_spec_json(const Operator& t);

json classification_to_json(const classify::ClassificationReport& r);
json verdict_to_json(const verify::TheoremVerdict& v);
json lifting_to_json(const construct::LiftingResult& lr, bool include_matrices);
json canonical_blocks_to_json(const construct::CanonicalBlocks& cb, bool include_matrices);

// Top-level report envelope: {version, command, params, verdicts, residuals,
// seed, tolerances}.
json report_envelope(const std::string& command, const json& params, const json& body,
                     double tol, long seed);

}  // namespace clift::io
