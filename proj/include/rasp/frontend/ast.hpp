#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rasp/atom.hpp"
#include "rasp/error.hpp"

namespace rasp::frontend {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinaryOp : std::uint8_t { Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or, In };
enum class UnaryOp : std::uint8_t { Neg, Not };

std::string_view spelling(BinaryOp op);

struct NumberLit {
    double value = 0;
};
struct StringLit {
    std::string value;
};
struct BoolLit {
    bool value = false;
};
/// A bare comparison symbol passed as the predicate argument of select.
struct PredicateLit {
    Predicate value = Predicate::Eq;
};
struct Ident {
    std::string name;
};
struct Unary {
    UnaryOp op;
    ExprPtr operand;
};
struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
/// `then if cond else otherwise`
struct Conditional {
    ExprPtr then;
    ExprPtr cond;
    ExprPtr otherwise;
};
struct Argument {
    std::optional<std::string> keyword;
    ExprPtr value;
};
struct Call {
    ExprPtr callee;
    std::vector<Argument> args;
};
struct ListLit {
    std::vector<ExprPtr> items;
};
/// `[element for var in source]`
struct Comprehension {
    ExprPtr element;
    std::string var;
    ExprPtr source;
};
struct IndexExpr {
    ExprPtr target;
    ExprPtr index;
};

struct Expr {
    using Variant = std::variant<NumberLit, StringLit, BoolLit, PredicateLit, Ident, Unary, Binary, Conditional, Call,
                                 ListLit, Comprehension, IndexExpr>;
    Span span;
    Variant node;
};

struct Stmt;

struct Param {
    std::string name;
    ExprPtr default_value;  // may be null
};

struct Assign {
    std::string name;
    ExprPtr value;
};
struct ExprStmt {
    ExprPtr value;
};
struct Return {
    ExprPtr value;
};
struct FunctionDef {
    std::string name;
    std::vector<Param> params;
    std::vector<Stmt> body;  // assignments only
    ExprPtr result;
    Span span;
};
/// `set example "<str>";`
struct SetExample {
    std::string value;
};
/// `draw(<expr>, "<str>");`
struct Draw {
    ExprPtr target;
    std::string input;
};

struct Stmt {
    using Variant = std::variant<Assign, ExprStmt, Return, std::shared_ptr<const FunctionDef>, SetExample, Draw>;
    Span span;
    Variant node;
};

struct Program {
    std::vector<Stmt> statements;
};

/// Fully parenthesized source text. Parsing the output yields an isomorphic tree.
std::string to_source(const Expr& e);
std::string to_source(const Stmt& s);
std::string to_source(const Program& p);

}  // namespace rasp::frontend
