#pragma once

// nlohmann::json forms of the AST, shared by the spec-file readers.

#include "json.hpp"
#include "padicforge/expr.hpp"

namespace pf {

nlohmann::json expr_to_json_value(const FnExpr& e);
FnExpr expr_from_json_value(const nlohmann::json& j);

}  // namespace pf
