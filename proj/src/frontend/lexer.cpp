#include "rasp/frontend/lexer.hpp"

#include <array>
#include <cctype>

namespace rasp::frontend {

bool is_keyword(std::string_view word) {
    static constexpr std::array<std::string_view, 11> keywords = {
        "def", "return", "if", "else", "for", "in", "and", "or", "not", "True", "False",
    };
    for (auto k : keywords) {
        if (k == word) return true;
    }
    return false;
}

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<SourceToken> run() {
        std::vector<SourceToken> out;
        while (true) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) break;
            out.push_back(next());
        }
        return out;
    }

private:
    [[nodiscard]] char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    [[nodiscard]] Span here() const { return Span{line_, col_, pos_, 0}; }

    SourceToken finish(TokenKind kind, std::string text, Span start) const {
        start.length = pos_ - start.offset;
        return SourceToken{kind, std::move(text), start};
    }

    SourceToken next() {
        const Span start = here();
        const char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') advance();
            std::string word(src_.substr(start.offset, pos_ - start.offset));
            const auto kind = is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
            return finish(kind, std::move(word), start);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
            if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
                advance();
                while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
            }
            return finish(TokenKind::Number, std::string(src_.substr(start.offset, pos_ - start.offset)), start);
        }
        if (c == '"' || c == '\'') return string_literal(start, c);

        static constexpr std::array<std::string_view, 4> two_char = {"==", "!=", "<=", ">="};
        for (auto op : two_char) {
            if (src_.substr(pos_, 2) == op) {
                advance();
                advance();
                return finish(TokenKind::Symbol, std::string(op), start);
            }
        }
        static constexpr std::string_view single = "=<>+-*/%()[]{},;:";
        if (single.find(c) != std::string_view::npos) {
            advance();
            return finish(TokenKind::Symbol, std::string(1, c), start);
        }
        // Report the whole code point so non-ASCII glyphs read correctly.
        std::size_t len = 1;
        while (pos_ + len < src_.size() && (static_cast<unsigned char>(src_[pos_ + len]) & 0xC0) == 0x80) ++len;
        Span bad = start;
        bad.length = len;
        throw LexError("unexpected character '" + std::string(src_.substr(pos_, len)) +
                           "' (non-ASCII text such as \"\xC2\xA7\" must be inside a string literal)",
                       bad);
    }

    SourceToken string_literal(const Span& start, char quote) {
        advance();
        std::string text;
        while (true) {
            if (pos_ >= src_.size() || peek() == '\n') {
                Span s = start;
                s.length = pos_ - start.offset;
                throw LexError("unterminated string literal", s);
            }
            const char c = peek();
            if (c == quote) {
                advance();
                break;
            }
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size()) continue;
                const char e = peek();
                switch (e) {
                    case 'n': text += '\n'; break;
                    case 't': text += '\t'; break;
                    case '"':
                    case '\'':
                    case '\\': text += e; break;
                    default: {
                        Span s = here();
                        s.length = 1;
                        throw LexError(std::string("unknown escape '\\") + e + "'", s);
                    }
                }
                advance();
                continue;
            }
            text += c;
            advance();
        }
        return finish(TokenKind::String, std::move(text), start);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

}  // namespace

std::vector<SourceToken> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace rasp::frontend
