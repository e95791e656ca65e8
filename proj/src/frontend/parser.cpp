#include "rasp/frontend/parser.hpp"

#include <charconv>
#include <initializer_list>

namespace rasp::frontend {
namespace {

class Parser {
public:
    explicit Parser(std::span<const SourceToken> tokens) : tokens_(tokens) {
        end_.kind = TokenKind::End;
        end_.text = "<end of input>";
        if (!tokens.empty()) {
            const auto& last = tokens.back().span;
            end_.span = Span{last.line, last.column + last.length, last.offset + last.length, 0};
        } else {
            end_.span = Span{1, 1, 0, 0};
        }
    }

    Program program() {
        Program p;
        while (!at_end()) p.statements.push_back(statement());
        return p;
    }

private:
    // --- token helpers -----------------------------------------------------

    [[nodiscard]] const SourceToken& peek(std::size_t ahead = 0) const {
        return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : end_;
    }
    [[nodiscard]] bool at_end() const { return pos_ >= tokens_.size(); }

    const SourceToken& take() {
        const SourceToken& t = peek();
        if (!at_end()) ++pos_;
        return t;
    }

    [[nodiscard]] bool check(std::string_view text) const {
        const auto& t = peek();
        return (t.kind == TokenKind::Symbol || t.kind == TokenKind::Keyword) && t.text == text;
    }

    bool accept(std::string_view text) {
        if (!check(text)) return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
        std::string msg = "syntax error: expected ";
        std::size_t i = 0;
        for (auto e : expected) {
            if (i) msg += i + 1 == expected.size() ? " or " : ", ";
            msg += e;
            ++i;
        }
        const auto& t = peek();
        msg += ", found ";
        msg += t.kind == TokenKind::End ? t.text : "'" + t.text + "'";
        throw ParseError(msg, t.span);
    }

    const SourceToken& expect(std::string_view text) {
        if (!check(text)) fail({"'" + std::string(text) + "'"});
        return take();
    }

    const SourceToken& expect_identifier() {
        if (peek().kind != TokenKind::Identifier) fail({"identifier"});
        return take();
    }

    [[nodiscard]] Span span_from(const Span& start) const {
        Span s = start;
        const auto& prev = pos_ > 0 ? tokens_[pos_ - 1].span : start;
        s.length = prev.offset + prev.length - start.offset;
        return s;
    }

    static ExprPtr make(Span span, Expr::Variant node) {
        return std::make_unique<Expr>(Expr{span, std::move(node)});
    }

    // --- statements --------------------------------------------------------

    Stmt statement() {
        const Span start = peek().span;
        if (check("def")) return function_def();
        if (accept("return")) {
            auto value = expression();
            expect(";");
            return Stmt{span_from(start), Return{std::move(value)}};
        }
        const auto& t = peek();
        if (t.kind == TokenKind::Identifier && t.text == "set" && peek(1).kind == TokenKind::Identifier &&
            peek(1).text == "example") {
            take();
            take();
            if (peek().kind != TokenKind::String) fail({"string literal"});
            std::string value = take().text;
            expect(";");
            return Stmt{span_from(start), SetExample{std::move(value)}};
        }
        if (t.kind == TokenKind::Identifier && t.text == "draw" && peek(1).kind == TokenKind::Symbol &&
            peek(1).text == "(") {
            take();
            take();
            auto target = expression();
            expect(",");
            if (peek().kind != TokenKind::String) fail({"string literal"});
            std::string input = take().text;
            expect(")");
            expect(";");
            return Stmt{span_from(start), Draw{std::move(target), std::move(input)}};
        }
        if (t.kind == TokenKind::Identifier && peek(1).kind == TokenKind::Symbol && peek(1).text == "=") {
            std::string name = take().text;
            take();
            auto value = expression();
            expect(";");
            return Stmt{span_from(start), Assign{std::move(name), std::move(value)}};
        }
        auto value = expression();
        expect(";");
        return Stmt{span_from(start), ExprStmt{std::move(value)}};
    }

    Stmt function_def() {
        const Span start = peek().span;
        expect("def");
        auto def = std::make_shared<FunctionDef>();
        def->name = expect_identifier().text;
        expect("(");
        if (!check(")")) {
            do {
                Param p;
                p.name = expect_identifier().text;
                if (accept("=")) p.default_value = expression();
                def->params.push_back(std::move(p));
            } while (accept(","));
        }
        expect(")");
        expect("{");
        while (!check("return")) {
            if (check("}") || at_end()) fail({"'return'"});
            const Span s = peek().span;
            if (peek().kind != TokenKind::Identifier || !(peek(1).kind == TokenKind::Symbol && peek(1).text == "=")) {
                fail({"assignment", "'return'"});
            }
            std::string name = take().text;
            take();
            auto value = expression();
            expect(";");
            def->body.push_back(Stmt{span_from(s), Assign{std::move(name), std::move(value)}});
        }
        expect("return");
        def->result = expression();
        expect(";");
        expect("}");
        accept(";");
        def->span = span_from(start);
        return Stmt{def->span, std::shared_ptr<const FunctionDef>(std::move(def))};
    }

    // --- expressions -------------------------------------------------------

    ExprPtr expression() { return conditional(); }

    ExprPtr conditional() {
        const Span start = peek().span;
        auto then = or_expr();
        if (!accept("if")) return then;
        auto cond = or_expr();
        expect("else");
        auto otherwise = conditional();
        return make(span_from(start), Conditional{std::move(then), std::move(cond), std::move(otherwise)});
    }

    ExprPtr binary_chain(ExprPtr (Parser::*next)(), std::initializer_list<std::pair<std::string_view, BinaryOp>> ops) {
        const Span start = peek().span;
        auto lhs = (this->*next)();
        while (true) {
            bool matched = false;
            for (const auto& [text, op] : ops) {
                if (accept(text)) {
                    auto rhs = (this->*next)();
                    lhs = make(span_from(start), Binary{op, std::move(lhs), std::move(rhs)});
                    matched = true;
                    break;
                }
            }
            if (!matched) return lhs;
        }
    }

    ExprPtr or_expr() { return binary_chain(&Parser::and_expr, {{"or", BinaryOp::Or}}); }
    ExprPtr and_expr() { return binary_chain(&Parser::not_expr, {{"and", BinaryOp::And}}); }

    ExprPtr not_expr() {
        const Span start = peek().span;
        if (accept("not")) {
            auto operand = not_expr();
            return make(span_from(start), Unary{UnaryOp::Not, std::move(operand)});
        }
        return comparison();
    }

    ExprPtr comparison() {
        return binary_chain(&Parser::additive, {{"==", BinaryOp::Eq},
                                                {"!=", BinaryOp::Ne},
                                                {"<=", BinaryOp::Le},
                                                {">=", BinaryOp::Ge},
                                                {"<", BinaryOp::Lt},
                                                {">", BinaryOp::Gt},
                                                {"in", BinaryOp::In}});
    }

    ExprPtr additive() {
        return binary_chain(&Parser::multiplicative, {{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}});
    }

    ExprPtr multiplicative() {
        return binary_chain(&Parser::unary, {{"*", BinaryOp::Mul}, {"/", BinaryOp::Div}, {"%", BinaryOp::Mod}});
    }

    ExprPtr unary() {
        const Span start = peek().span;
        if (accept("-")) {
            auto operand = unary();
            return make(span_from(start), Unary{UnaryOp::Neg, std::move(operand)});
        }
        return postfix();
    }

    ExprPtr postfix() {
        const Span start = peek().span;
        auto e = primary();
        while (true) {
            if (accept("(")) {
                std::vector<Argument> args;
                if (!check(")")) {
                    do {
                        args.push_back(argument());
                    } while (accept(","));
                }
                expect(")");
                e = make(span_from(start), Call{std::move(e), std::move(args)});
            } else if (accept("[")) {
                auto index = expression();
                expect("]");
                e = make(span_from(start), IndexExpr{std::move(e), std::move(index)});
            } else {
                return e;
            }
        }
    }

    static std::optional<Predicate> predicate_symbol(const SourceToken& t) {
        if (t.kind != TokenKind::Symbol) return std::nullopt;
        if (t.text == "==") return Predicate::Eq;
        if (t.text == "!=") return Predicate::Ne;
        if (t.text == "<") return Predicate::Lt;
        if (t.text == "<=") return Predicate::Le;
        if (t.text == ">") return Predicate::Gt;
        if (t.text == ">=") return Predicate::Ge;
        return std::nullopt;
    }

    Argument argument() {
        const auto& t = peek();
        if (auto p = predicate_symbol(t)) {
            const auto& after = peek(1);
            if (after.kind == TokenKind::Symbol && (after.text == "," || after.text == ")")) {
                const Span s = take().span;
                return Argument{std::nullopt, make(s, PredicateLit{*p})};
            }
        }
        if (t.kind == TokenKind::Identifier && peek(1).kind == TokenKind::Symbol && peek(1).text == "=") {
            std::string keyword = take().text;
            take();
            return Argument{std::move(keyword), expression()};
        }
        return Argument{std::nullopt, expression()};
    }

    ExprPtr primary() {
        const auto& t = peek();
        const Span start = t.span;
        switch (t.kind) {
            case TokenKind::Number: {
                take();
                double v = 0;
                std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
                return make(start, NumberLit{v});
            }
            case TokenKind::String: take(); return make(start, StringLit{t.text});
            case TokenKind::Identifier: take(); return make(start, Ident{t.text});
            case TokenKind::Keyword:
                if (t.text == "True" || t.text == "False") {
                    take();
                    return make(start, BoolLit{t.text == "True"});
                }
                break;
            case TokenKind::Symbol:
                if (accept("(")) {
                    auto inner = expression();
                    expect(")");
                    inner->span = span_from(start);
                    return inner;
                }
                if (accept("[")) return list_or_comprehension(start);
                break;
            default: break;
        }
        fail({"expression"});
    }

    ExprPtr list_or_comprehension(const Span& start) {
        if (accept("]")) return make(span_from(start), ListLit{});
        auto first = expression();
        if (accept("for")) {
            std::string var = expect_identifier().text;
            expect("in");
            auto source = or_expr();
            expect("]");
            return make(span_from(start), Comprehension{std::move(first), std::move(var), std::move(source)});
        }
        std::vector<ExprPtr> items;
        items.push_back(std::move(first));
        while (accept(",")) {
            if (check("]")) break;
            items.push_back(expression());
        }
        expect("]");
        return make(span_from(start), ListLit{std::move(items)});
    }

    std::span<const SourceToken> tokens_;
    std::size_t pos_ = 0;
    SourceToken end_;
};

}  // namespace

Program parse(std::span<const SourceToken> tokens) { return Parser(tokens).program(); }

Program parse_source(std::string_view source) {
    const auto tokens = tokenize(source);
    return parse(tokens);
}

}  // namespace rasp::frontend
