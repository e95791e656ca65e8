#include "rasp/frontend/lower.hpp"

#include <cmath>

#include "rasp/error.hpp"
#include "rasp/sequence.hpp"

namespace rasp::frontend {
namespace {

constexpr int kMaxCallDepth = 64;

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

std::optional<Operand> as_operand(const Value& v) {
    if (auto* a = std::get_if<Atom>(&v)) return Operand{*a};
    if (auto* s = std::get_if<SOp>(&v)) return Operand{*s};
    return std::nullopt;
}

Value from_operand(const Operand& o) {
    if (auto* a = std::get_if<Atom>(&o)) return *a;
    return std::get<SOp>(o);
}

Operand need_operand(const Value& v, const Span& span, std::string_view what) {
    if (auto o = as_operand(v)) return *o;
    throw LowerError(std::string(what) + " must be an s-op or constant, got " + std::string(value_kind(v)), span);
}

Selector need_selector(const Value& v, const Span& span, std::string_view what) {
    if (auto* s = std::get_if<Selector>(&v)) return *s;
    throw LowerError(std::string(what) + " must be a selector, got " + std::string(value_kind(v)), span);
}

bool need_bool(const Value& v, const Span& span, std::string_view what) {
    if (auto* a = std::get_if<Atom>(&v); a && a->is_bool()) return a->as_bool();
    throw LowerError(std::string(what) + " must be True or False", span);
}

long long need_int(const Atom& a, const Span& span) {
    if (!a.is_number() || a.as_number() != std::floor(a.as_number())) {
        throw LowerError("index must be an integer, got '" + to_display(a) + "'", span);
    }
    return static_cast<long long>(a.as_number());
}

OpCode opcode(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return OpCode::Add;
        case BinaryOp::Sub: return OpCode::Sub;
        case BinaryOp::Mul: return OpCode::Mul;
        case BinaryOp::Div: return OpCode::Div;
        case BinaryOp::Mod: return OpCode::Mod;
        case BinaryOp::Eq: return OpCode::Eq;
        case BinaryOp::Ne: return OpCode::Ne;
        case BinaryOp::Lt: return OpCode::Lt;
        case BinaryOp::Le: return OpCode::Le;
        case BinaryOp::Gt: return OpCode::Gt;
        case BinaryOp::Ge: return OpCode::Ge;
        case BinaryOp::And: return OpCode::And;
        case BinaryOp::Or: return OpCode::Or;
        case BinaryOp::In: return OpCode::InList;
    }
    return OpCode::None;
}

// Constant folding may fail (1/0, "a" - 1); report it at the source location.
template <class F>
Value folding(const Span& span, F&& f) {
    try {
        return f();
    } catch (const FeatureGateError&) {
        throw;
    } catch (const EvalError& e) {
        throw LowerError(e.what(), span);
    }
}

}  // namespace

std::string_view value_kind(const Value& v) {
    return std::visit(Overloaded{
                          [](const Atom&) { return "constant"; },
                          [](const StaticList&) { return "list"; },
                          [](const SOp&) { return "s-op"; },
                          [](const Selector&) { return "selector"; },
                          [](const Scorer&) { return "scorer"; },
                          [](const Predicate&) { return "comparison operator"; },
                          [](const FunctionValue&) { return "function"; },
                          [](const BuiltinFunction&) { return "built-in function"; },
                      },
                      v);
}

const Value* Env::lookup(std::string_view name) const {
    for (const Env* e = this; e; e = e->parent_) {
        if (auto it = e->vars_.find(std::string(name)); it != e->vars_.end()) return &it->second;
    }
    return nullptr;
}

void Env::define(const std::string& name, Value v) {
    auto [it, inserted] = vars_.insert_or_assign(name, std::move(v));
    if (inserted) order_.push_back(name);
}

const std::unordered_set<std::string>& builtin_names() {
    static const std::unordered_set<std::string> names = {
        "tokens",     "indices", "length", "select",      "aggregate", "selector_width", "indicator",
        "select_all", "select_eq", "round", "score", "select_best",
    };
    return names;
}

std::unique_ptr<Env> make_global_env(NameTable& names) {
    auto env = std::make_unique<Env>();
    const SOp tokens = build::tokens();
    const SOp indices = build::indices();
    const SOp length = build::length();
    const Selector all = build::select_all();
    env->define("tokens", tokens);
    env->define("indices", indices);
    env->define("length", length);
    env->define("select_all", all);
    names.bind(tokens.id(), "tokens", true);
    names.bind(indices.id(), "indices", true);
    names.bind(length.id(), "length", true);
    names.bind(all.id(), "select_all", true);
    for (const char* fn : {"select", "aggregate", "selector_width", "indicator", "select_eq", "round", "score",
                           "select_best"}) {
        env->define(fn, BuiltinFunction{fn});
    }
    return env;
}

void Lowerer::name_value(const Value& v, const std::string& name, bool top_level) {
    if (auto* s = std::get_if<SOp>(&v)) names_.bind(s->id(), name, top_level);
    else if (auto* s = std::get_if<Selector>(&v)) names_.bind(s->id(), name, top_level);
    else if (auto* s = std::get_if<Scorer>(&v)) names_.bind(s->id(), name, top_level);
}

std::vector<StatementResult> Lowerer::lower(const Program& program) {
    std::vector<StatementResult> out;
    for (const auto& s : program.statements) out.push_back(lower(s));
    return out;
}

StatementResult Lowerer::lower(const Stmt& stmt) {
    return std::visit(
        Overloaded{
            [&](const Assign& a) -> StatementResult {
                if (builtin_names().contains(a.name)) {
                    throw LowerError("cannot rebind built-in '" + a.name + "' at top level", stmt.span);
                }
                Value v = lower_expr(*a.value, global_);
                global_.define(a.name, v);
                name_value(v, a.name, true);
                return Binding{a.name, std::move(v)};
            },
            [&](const ExprStmt& e) -> StatementResult {
                return ExprResult{lower_expr(*e.value, global_), to_source(*e.value)};
            },
            [&](const Return&) -> StatementResult { throw LowerError("'return' outside function", stmt.span); },
            [&](const std::shared_ptr<const FunctionDef>& def) -> StatementResult {
                if (builtin_names().contains(def->name)) {
                    throw LowerError("cannot redefine built-in '" + def->name + "'", stmt.span);
                }
                Value v = FunctionValue{def};
                global_.define(def->name, v);
                return Binding{def->name, std::move(v)};
            },
            [&](const SetExample& s) -> StatementResult { return s; },
            [&](const Draw& d) -> StatementResult {
                return DrawRequest{lower_expr(*d.target, global_), to_source(*d.target), d.input};
            },
        },
        stmt.node);
}

Value Lowerer::lower_expr(const Expr& e, const Env& env) {
    const Span& span = e.span;
    return std::visit(
        Overloaded{
            [&](const NumberLit& n) -> Value { return Atom::number(n.value); },
            [&](const StringLit& s) -> Value {
                if (s.value.empty()) throw LowerError("empty string literal", span);
                return Atom::token(s.value);
            },
            [&](const BoolLit& b) -> Value { return Atom::boolean(b.value); },
            [&](const PredicateLit& p) -> Value { return p.value; },
            [&](const Ident& i) -> Value {
                if (const Value* v = env.lookup(i.name)) return *v;
                throw LowerError("unbound identifier '" + i.name + "'", span);
            },
            [&](const Unary& u) -> Value {
                Value operand = lower_expr(*u.operand, env);
                if (u.op == UnaryOp::Not) {
                    if (auto* s = std::get_if<Selector>(&operand)) return build::select_not(*s);
                    const Operand o = need_operand(operand, span, "operand of 'not'");
                    return folding(span, [&] { return from_operand(build::elementwise(OpCode::Not, o)); });
                }
                const Operand o = need_operand(operand, span, "operand of unary '-'");
                return folding(span, [&] { return from_operand(build::elementwise(OpCode::Neg, o)); });
            },
            [&](const Binary& b) -> Value { return binary(b, env, span); },
            [&](const Conditional& c) -> Value {
                Value cond = lower_expr(*c.cond, env);
                if (std::holds_alternative<Atom>(cond)) {
                    return need_bool(cond, c.cond->span, "constant condition") ? lower_expr(*c.then, env)
                                                                               : lower_expr(*c.otherwise, env);
                }
                const Operand co = need_operand(cond, c.cond->span, "condition");
                const Operand t = need_operand(lower_expr(*c.then, env), c.then->span, "ternary branch");
                const Operand o = need_operand(lower_expr(*c.otherwise, env), c.otherwise->span, "ternary branch");
                return from_operand(build::ternary(co, t, o));
            },
            [&](const Call& c) -> Value { return call(c, env, span); },
            [&](const ListLit& l) -> Value {
                StaticList list;
                for (const auto& item : l.items) {
                    Value v = lower_expr(*item, env);
                    auto* a = std::get_if<Atom>(&v);
                    if (!a) throw LowerError("list elements must be constants, got " + std::string(value_kind(v)), item->span);
                    list.items.push_back(*a);
                }
                return list;
            },
            [&](const Comprehension& c) -> Value {
                Value source = lower_expr(*c.source, env);
                auto* list = std::get_if<StaticList>(&source);
                if (!list) {
                    throw LowerError("comprehension source must be a static list, got " +
                                         std::string(value_kind(source)),
                                     c.source->span);
                }
                StaticList out;
                for (const auto& item : list->items) {
                    Env scope(&env);
                    scope.define(c.var, item);
                    Value v = lower_expr(*c.element, scope);
                    auto* a = std::get_if<Atom>(&v);
                    if (!a) {
                        throw LowerError("comprehension elements must be constants, got " +
                                             std::string(value_kind(v)),
                                         c.element->span);
                    }
                    out.items.push_back(*a);
                }
                return out;
            },
            [&](const IndexExpr& ix) -> Value { return index(ix, env, span); },
        },
        e.node);
}

Value Lowerer::binary(const Binary& b, const Env& env, const Span& span) {
    Value lhs = lower_expr(*b.lhs, env);
    Value rhs = lower_expr(*b.rhs, env);

    if (b.op == BinaryOp::And || b.op == BinaryOp::Or) {
        auto* ls = std::get_if<Selector>(&lhs);
        auto* rs = std::get_if<Selector>(&rhs);
        if (ls && rs) return b.op == BinaryOp::And ? build::select_and(*ls, *rs) : build::select_or(*ls, *rs);
        if (ls || rs) throw LowerError("cannot combine a selector with a non-selector", span);
    }

    if (b.op == BinaryOp::In) {
        if (auto* list = std::get_if<StaticList>(&rhs)) {
            const Operand o = need_operand(lhs, b.lhs->span, "left operand of 'in'");
            const Operand ops[] = {o};
            return folding(span, [&] { return from_operand(build::elementwise(OpCode::InList, ops, list->items)); });
        }
        if (auto* seq = std::get_if<SOp>(&rhs)) {
            auto* value = std::get_if<Atom>(&lhs);
            if (!value) throw LowerError("'x in s-op' requires a constant on the left", b.lhs->span);
            return build::contains(*value, *seq);
        }
        throw LowerError("right operand of 'in' must be a static list or an s-op, got " +
                             std::string(value_kind(rhs)),
                         b.rhs->span);
    }

    const Operand l = need_operand(lhs, b.lhs->span, "left operand of '" + std::string(spelling(b.op)) + "'");
    const Operand r = need_operand(rhs, b.rhs->span, "right operand of '" + std::string(spelling(b.op)) + "'");
    return folding(span, [&] { return from_operand(build::elementwise(opcode(b.op), l, r)); });
}

Value Lowerer::index(const IndexExpr& ix, const Env& env, const Span& span) {
    Value target = lower_expr(*ix.target, env);
    Value idx = lower_expr(*ix.index, env);
    if (auto* list = std::get_if<StaticList>(&target)) {
        if (auto* a = std::get_if<Atom>(&idx)) {
            long long i = need_int(*a, ix.index->span);
            const auto size = static_cast<long long>(list->items.size());
            if (i < 0) i += size;
            if (i < 0 || i >= size) throw LowerError("list index out of range", span);
            return list->items[static_cast<std::size_t>(i)];
        }
        if (auto* s = std::get_if<SOp>(&idx)) {
            const Operand ops[] = {*s};
            return from_operand(build::elementwise(OpCode::Index, ops, list->items));
        }
    }
    if (auto* a = std::get_if<Atom>(&target); a && a->is_token()) {
        if (auto* i = std::get_if<Atom>(&idx)) {
            const auto chars = split_code_points(a->as_token());
            long long k = need_int(*i, ix.index->span);
            const auto size = static_cast<long long>(chars.size());
            if (k < 0) k += size;
            if (k < 0 || k >= size) throw LowerError("string index out of range", span);
            return Atom::token(chars[static_cast<std::size_t>(k)]);
        }
    }
    throw LowerError("cannot index " + std::string(value_kind(target)) + " with " + std::string(value_kind(idx)),
                     span);
}

Value Lowerer::call(const Call& c, const Env& env, const Span& span) {
    Value callee = lower_expr(*c.callee, env);
    std::vector<Value> positional;
    std::vector<std::pair<std::string, Value>> keywords;
    for (const auto& arg : c.args) {
        Value v = lower_expr(*arg.value, env);
        if (arg.keyword) {
            for (const auto& [k, _] : keywords) {
                if (k == *arg.keyword) throw LowerError("duplicate keyword argument '" + k + "'", arg.value->span);
            }
            keywords.emplace_back(*arg.keyword, std::move(v));
        } else {
            if (!keywords.empty()) throw LowerError("positional argument after keyword argument", arg.value->span);
            positional.push_back(std::move(v));
        }
    }
    if (auto* b = std::get_if<BuiltinFunction>(&callee)) {
        return call_builtin(b->name, std::move(positional), std::move(keywords), span);
    }
    if (auto* f = std::get_if<FunctionValue>(&callee)) {
        return call_function(*f->def, std::move(positional), std::move(keywords), span);
    }
    throw LowerError("cannot call a " + std::string(value_kind(callee)), c.callee->span);
}

Value Lowerer::call_function(const FunctionDef& def, std::vector<Value> positional,
                             std::vector<std::pair<std::string, Value>> keywords, const Span& span) {
    if (positional.size() > def.params.size()) {
        throw LowerError(def.name + "() takes " + std::to_string(def.params.size()) + " argument(s), got " +
                             std::to_string(positional.size()),
                         span);
    }
    if (call_depth_ >= kMaxCallDepth) throw LowerError("call depth exceeded while inlining " + def.name + "()", span);

    Env local(&global_);
    for (std::size_t i = 0; i < def.params.size(); ++i) {
        const Param& p = def.params[i];
        std::optional<Value> v;
        if (i < positional.size()) v = positional[i];
        for (auto& [k, kv] : keywords) {
            if (k != p.name) continue;
            if (v) throw LowerError(def.name + "() got multiple values for '" + p.name + "'", span);
            v = kv;
        }
        if (!v) {
            if (!p.default_value) throw LowerError(def.name + "() missing argument '" + p.name + "'", span);
            v = lower_expr(*p.default_value, global_);
        }
        local.define(p.name, *v);
    }
    for (const auto& [k, _] : keywords) {
        bool known = false;
        for (const auto& p : def.params) known = known || p.name == k;
        if (!known) throw LowerError(def.name + "() got an unexpected keyword argument '" + k + "'", span);
    }

    ++call_depth_;
    struct Guard {
        int& depth;
        ~Guard() { --depth; }
    } guard{call_depth_};

    for (const auto& stmt : def.body) {
        const auto& a = std::get<Assign>(stmt.node);
        Value v = lower_expr(*a.value, local);
        name_value(v, a.name, false);
        local.define(a.name, std::move(v));
    }
    return lower_expr(*def.result, local);
}

Value Lowerer::call_builtin(const std::string& name, std::vector<Value> positional,
                            std::vector<std::pair<std::string, Value>> keywords, const Span& span) {
    // Binds positional and keyword arguments to a fixed parameter list.
    auto bind = [&](std::initializer_list<std::string_view> params, std::size_t required) {
        std::vector<std::optional<Value>> out(params.size());
        if (positional.size() > params.size()) {
            throw LowerError(name + "() takes at most " + std::to_string(params.size()) + " argument(s)", span);
        }
        for (std::size_t i = 0; i < positional.size(); ++i) out[i] = positional[i];
        for (auto& [k, v] : keywords) {
            std::size_t i = 0;
            for (auto p : params) {
                if (p == k) break;
                ++i;
            }
            if (i == params.size()) throw LowerError(name + "() got an unexpected keyword argument '" + k + "'", span);
            if (out[i]) throw LowerError(name + "() got multiple values for '" + k + "'", span);
            out[i] = v;
        }
        for (std::size_t i = 0; i < required; ++i) {
            if (!out[i]) throw LowerError(name + "() missing required argument", span);
        }
        return out;
    };

    if (name == "select") {
        auto a = bind({"keys", "queries", "predicate"}, 3);
        auto* p = std::get_if<Predicate>(&*a[2]);
        if (!p) throw LowerError("select() expects a comparison operator such as == as its third argument", span);
        return build::select(need_operand(*a[0], span, "select keys"), need_operand(*a[1], span, "select queries"), *p);
    }
    if (name == "select_eq") {
        auto a = bind({"keys", "queries"}, 2);
        return build::select(need_operand(*a[0], span, "select_eq keys"),
                             need_operand(*a[1], span, "select_eq queries"), Predicate::Eq);
    }
    if (name == "aggregate") {
        auto a = bind({"selector", "values", "default"}, 2);
        const Operand fallback = a[2] ? need_operand(*a[2], span, "aggregate default") : Operand{Atom::number(0)};
        return build::aggregate(need_selector(*a[0], span, "aggregate selector"),
                                need_operand(*a[1], span, "aggregate values"), fallback);
    }
    if (name == "selector_width") {
        auto a = bind({"sel", "assume_bos"}, 1);
        const bool bos = a[1] ? need_bool(*a[1], span, "assume_bos") : false;
        return build::selector_width(need_selector(*a[0], span, "selector_width argument"), bos);
    }
    if (name == "indicator" || name == "round") {
        auto a = bind({"value"}, 1);
        const Operand o = need_operand(*a[0], span, name + "() argument");
        const OpCode op = name == "indicator" ? OpCode::Indicator : OpCode::Round;
        return folding(span, [&] { return from_operand(build::elementwise(op, o)); });
    }
    if (name == "score") {
        auto a = bind({"keys", "queries"}, 2);
        return build::score(need_operand(*a[0], span, "score keys"), need_operand(*a[1], span, "score queries"),
                            extensions_);
    }
    if (name == "select_best") {
        auto a = bind({"sel", "scorer"}, 2);
        if (!extensions_.select_best) (void)build::score(Atom::number(0), Atom::number(0), extensions_);
        auto* sc = std::get_if<Scorer>(&*a[1]);
        if (!sc) throw LowerError("select_best() expects a scorer as its second argument", span);
        return build::select_best(need_selector(*a[0], span, "select_best selector"), *sc, extensions_);
    }
    throw LowerError("unknown built-in '" + name + "'", span);
}

}  // namespace rasp::frontend
