#pragma once

// Lowering of parsed RASP into graph-engine nodes. Functions are inlined at
// their call sites and comprehensions expand over static lists, so every
// program becomes one hash-consed DAG.

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "rasp/frontend/ast.hpp"
#include "rasp/graph.hpp"
#include "rasp/printer.hpp"

namespace rasp::frontend {

struct StaticList {
    std::vector<Atom> items;
};
struct FunctionValue {
    std::shared_ptr<const FunctionDef> def;
};
struct BuiltinFunction {
    std::string name;
};

using Value = std::variant<Atom, StaticList, SOp, Selector, Scorer, Predicate, FunctionValue, BuiltinFunction>;

std::string_view value_kind(const Value& v);

class Env {
public:
    explicit Env(const Env* parent = nullptr) : parent_(parent) {}

    [[nodiscard]] const Value* lookup(std::string_view name) const;
    void define(const std::string& name, Value v);
    [[nodiscard]] bool is_global() const noexcept { return parent_ == nullptr; }
    /// Names defined directly in this scope, in first-definition order.
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return order_; }

private:
    const Env* parent_;
    std::unordered_map<std::string, Value> vars_;
    std::vector<std::string> order_;
};

/// Names pre-bound in every global environment.
const std::unordered_set<std::string>& builtin_names();

/// Creates a global scope with the built-ins bound and registers the names of
/// the built-in nodes (length, select_all, ...) in `names`.
std::unique_ptr<Env> make_global_env(NameTable& names);

struct Binding {
    std::string name;
    Value value;
};
struct ExprResult {
    Value value;
    std::string text;
};
struct DrawRequest {
    Value target;
    std::string label;
    std::string input;
};

/// What one top-level statement produced; directives are left for the caller.
using StatementResult = std::variant<Binding, ExprResult, SetExample, DrawRequest>;

class Lowerer {
public:
    Lowerer(Env& global, NameTable& names, Extensions extensions = {})
        : global_(global), names_(names), extensions_(extensions) {}

    /// Throws LowerError, or EvalError subclasses (e.g. FeatureGateError).
    StatementResult lower(const Stmt& stmt);
    std::vector<StatementResult> lower(const Program& program);
    Value lower_expr(const Expr& e, const Env& env);

private:
    Value call(const Call& c, const Env& env, const Span& span);
    Value call_builtin(const std::string& name, std::vector<Value> positional,
                       std::vector<std::pair<std::string, Value>> keywords, const Span& span);
    Value call_function(const FunctionDef& def, std::vector<Value> positional,
                        std::vector<std::pair<std::string, Value>> keywords, const Span& span);
    Value binary(const Binary& b, const Env& env, const Span& span);
    Value index(const IndexExpr& ix, const Env& env, const Span& span);
    void name_value(const Value& v, const std::string& name, bool top_level);

    Env& global_;
    NameTable& names_;
    Extensions extensions_;
    int call_depth_ = 0;
};

}  // namespace rasp::frontend
