#pragma once

#include <span>
#include <string_view>

#include "rasp/frontend/ast.hpp"
#include "rasp/frontend/lexer.hpp"

namespace rasp::frontend {

/// Precedence, loosest first: ternary, or, and, not, comparisons and `in`,
/// + -, * / %, unary -, call and index. Throws ParseError.
Program parse(std::span<const SourceToken> tokens);

/// tokenize + parse.
Program parse_source(std::string_view source);

}  // namespace rasp::frontend
