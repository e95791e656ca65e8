#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rasp/error.hpp"

namespace rasp::frontend {

enum class TokenKind : std::uint8_t { Identifier, Number, String, Symbol, Keyword, End };

struct SourceToken {
    TokenKind kind = TokenKind::End;
    std::string text;  // string literals: unescaped contents
    Span span;
};

bool is_keyword(std::string_view word);

/// Splits RASP source into tokens. `#` comments run to end of line. String
/// literals use double or single quotes and accept \" \' \\ \n \t escapes.
/// The returned list does not include an End token.
std::vector<SourceToken> tokenize(std::string_view source);

}  // namespace rasp::frontend
