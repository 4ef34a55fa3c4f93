#pragma once

// Text and JSON forms of FnExpr.
//
//   bitexpr := sum (("xor" | "and" | "or") sum)*
//   sum     := term (("+" | "-") term)*
//   term    := unary ("*" unary)*
//   unary   := "-" unary | power
//   power   := atom ("^" unary)?            right associative
//   atom    := "x" | integer | integer "/" integer | "(" bitexpr ")"
//            | name "(" bitexpr ("," bitexpr)* ")"
//   name    := xor | and | or | neg | inv | ff | delta
//
// Sub-trees built only from x, constants, +, -, * and ff(x, n) are folded
// into a single POLY node. '#' starts a comment that runs to end of line.

#include <string>
#include <string_view>

#include "padicforge/expr.hpp"

namespace pf {

/// Throws SyntaxError (SYNTAX_ERROR or UNKNOWN_IDENTIFIER) with line/column.
FnExpr parse_dsl(std::string_view text);

std::string expr_to_json(const FnExpr& e);
FnExpr expr_from_json(std::string_view text);

}  // namespace pf
