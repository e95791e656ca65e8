#include <cmath>

#include "rasp/error.hpp"
#include "rasp/graph.hpp"
#include "store.hpp"

namespace rasp {

std::string_view op_name(OpCode op) {
    switch (op) {
        case OpCode::None: return "?";
        case OpCode::Add: return "+";
        case OpCode::Sub: return "-";
        case OpCode::Mul: return "*";
        case OpCode::Div: return "/";
        case OpCode::Mod: return "%";
        case OpCode::Neg: return "-";
        case OpCode::Eq: return "==";
        case OpCode::Ne: return "!=";
        case OpCode::Lt: return "<";
        case OpCode::Le: return "<=";
        case OpCode::Gt: return ">";
        case OpCode::Ge: return ">=";
        case OpCode::And: return "and";
        case OpCode::Or: return "or";
        case OpCode::Not: return "not";
        case OpCode::Indicator: return "indicator";
        case OpCode::InList: return "in";
        case OpCode::Index: return "index";
        case OpCode::Round: return "round";
    }
    return "?";
}

int op_arity(OpCode op) {
    switch (op) {
        case OpCode::Neg:
        case OpCode::Not:
        case OpCode::Indicator:
        case OpCode::InList:
        case OpCode::Index:
        case OpCode::Round: return 1;
        default: return 2;
    }
}

namespace {

bool truthy(const Atom& a) {
    if (a.is_bool()) return a.as_bool();
    if (a.is_number()) return a.as_number() != 0.0;
    throw EvalError("expected a boolean, got " + std::string(kind_name(a.kind())) + " '" + to_display(a) + "'");
}

std::optional<Predicate> comparison(OpCode op) {
    switch (op) {
        case OpCode::Eq: return Predicate::Eq;
        case OpCode::Ne: return Predicate::Ne;
        case OpCode::Lt: return Predicate::Lt;
        case OpCode::Le: return Predicate::Le;
        case OpCode::Gt: return Predicate::Gt;
        case OpCode::Ge: return Predicate::Ge;
        default: return std::nullopt;
    }
}

SOp leaf(NodeKind kind) {
    Node n;
    n.kind = kind;
    return SOp(detail::intern(std::move(n)));
}

}  // namespace

Atom apply_op(OpCode op, std::span<const Atom> args, std::span<const Atom> table) {
    if (static_cast<int>(args.size()) != op_arity(op)) {
        throw EvalError("operator '" + std::string(op_name(op)) + "' expects " + std::to_string(op_arity(op)) +
                        " operand(s)");
    }
    if (auto p = comparison(op)) return Atom::boolean(apply_predicate(*p, args[0], args[1]));

    switch (op) {
        case OpCode::Add:
            if (args[0].is_token() && args[1].is_token()) return Atom::token(args[0].as_token() + args[1].as_token());
            return Atom::number(coerce_numeric(args[0]) + coerce_numeric(args[1]));
        case OpCode::Sub: return Atom::number(coerce_numeric(args[0]) - coerce_numeric(args[1]));
        case OpCode::Mul: return Atom::number(coerce_numeric(args[0]) * coerce_numeric(args[1]));
        case OpCode::Div: {
            const double d = coerce_numeric(args[1]);
            if (d == 0.0) throw EvalError("division by zero");
            return Atom::number(coerce_numeric(args[0]) / d);
        }
        case OpCode::Mod: {
            const double d = coerce_numeric(args[1]);
            if (d == 0.0) throw EvalError("modulo by zero");
            const double a = coerce_numeric(args[0]);
            double r = std::fmod(a, d);
            if (r != 0.0 && ((r < 0) != (d < 0))) r += d;
            return Atom::number(r);
        }
        case OpCode::Neg: return Atom::number(-coerce_numeric(args[0]));
        case OpCode::And: return Atom::boolean(truthy(args[0]) && truthy(args[1]));
        case OpCode::Or: return Atom::boolean(truthy(args[0]) || truthy(args[1]));
        case OpCode::Not: return Atom::boolean(!truthy(args[0]));
        case OpCode::Indicator: return Atom::number(truthy(args[0]) ? 1.0 : 0.0);
        case OpCode::Round: return Atom::number(std::round(coerce_numeric(args[0])));
        case OpCode::InList: {
            for (const auto& t : table) {
                if (apply_predicate(Predicate::Eq, args[0], t)) return Atom::boolean(true);
            }
            return Atom::boolean(false);
        }
        case OpCode::Index: {
            const double v = coerce_numeric(args[0]);
            const double r = std::round(v);
            if (!numeric_equal(v, r)) throw EvalError("list index " + to_display(args[0]) + " is not an integer");
            auto i = static_cast<long long>(r);
            const auto size = static_cast<long long>(table.size());
            if (i < 0) i += size;
            if (i < 0 || i >= size) throw EvalError("list index " + to_display(args[0]) + " out of range");
            return table[static_cast<std::size_t>(i)];
        }
        default: break;
    }
    throw EvalError("unsupported operator '" + std::string(op_name(op)) + "'");
}

namespace build {

SOp tokens() { return leaf(NodeKind::Tokens); }
SOp indices() { return leaf(NodeKind::Indices); }

SOp constant(const Atom& a) {
    Node n;
    n.kind = NodeKind::Constant;
    n.constant = a;
    return SOp(detail::intern(std::move(n)));
}

SOp as_sop(const Operand& o) {
    if (auto* s = std::get_if<SOp>(&o)) return *s;
    return constant(std::get<Atom>(o));
}

Operand elementwise(OpCode op, std::span<const Operand> operands, std::vector<Atom> table) {
    if (static_cast<int>(operands.size()) != op_arity(op)) {
        throw EvalError("operator '" + std::string(op_name(op)) + "' expects " + std::to_string(op_arity(op)) +
                        " operand(s)");
    }
    bool all_const = true;
    for (const auto& o : operands) all_const = all_const && std::holds_alternative<Atom>(o);
    if (all_const) {
        std::vector<Atom> args;
        for (const auto& o : operands) args.push_back(std::get<Atom>(o));
        return apply_op(op, args, table);
    }
    Node n;
    n.kind = NodeKind::Elementwise;
    n.op = op;
    for (const auto& o : operands) n.operands.push_back(as_sop(o).id());
    n.table = std::move(table);
    return SOp(detail::intern(std::move(n)));
}

Operand elementwise(OpCode op, const Operand& a) {
    const Operand ops[] = {a};
    return elementwise(op, ops);
}

Operand elementwise(OpCode op, const Operand& a, const Operand& b) {
    const Operand ops[] = {a, b};
    return elementwise(op, ops);
}

Operand ternary(const Operand& cond, const Operand& then, const Operand& otherwise) {
    if (auto* c = std::get_if<Atom>(&cond)) {
        if (!c->is_bool()) throw EvalError("ternary condition must be boolean, got " + to_display(*c));
        return c->as_bool() ? then : otherwise;
    }
    Node n;
    n.kind = NodeKind::Ternary;
    n.operands = {as_sop(cond).id(), as_sop(then).id(), as_sop(otherwise).id()};
    return SOp(detail::intern(std::move(n)));
}

Selector select(const Operand& keys, const Operand& queries, Predicate p) {
    Node n;
    n.kind = NodeKind::Select;
    n.predicate = p;
    n.operands = {as_sop(keys).id(), as_sop(queries).id()};
    return Selector(detail::intern(std::move(n)));
}

namespace {
Selector combine(NodeKind kind, std::vector<NodeId> operands) {
    Node n;
    n.kind = kind;
    n.operands = std::move(operands);
    return Selector(detail::intern(std::move(n)));
}
}  // namespace

Selector select_and(Selector a, Selector b) { return combine(NodeKind::SelectorAnd, {a.id(), b.id()}); }
Selector select_or(Selector a, Selector b) { return combine(NodeKind::SelectorOr, {a.id(), b.id()}); }
Selector select_not(Selector a) { return combine(NodeKind::SelectorNot, {a.id()}); }

Selector select_all() { return select(Atom::number(1), Atom::number(1), Predicate::Eq); }

SOp aggregate(Selector sel, const Operand& values, const Operand& fallback) {
    Node n;
    n.kind = NodeKind::Aggregate;
    n.operands = {sel.id(), as_sop(values).id(), as_sop(fallback).id()};
    return SOp(detail::intern(std::move(n)));
}

SOp length() {
    const auto first = elementwise(OpCode::Indicator, elementwise(OpCode::Eq, indices(), Atom::number(0)));
    const auto frac = aggregate(select_all(), first);
    return std::get<SOp>(elementwise(OpCode::Round, elementwise(OpCode::Div, Atom::number(1), frac)));
}

SOp contains(const Atom& value, SOp seq) {
    const auto hits = aggregate(select(seq, value, Predicate::Eq), Atom::number(1), Atom::number(0));
    return std::get<SOp>(elementwise(OpCode::Gt, hits, Atom::number(0)));
}

SOp selector_width(Selector sel, bool assume_bos) {
    const Operand light0 = elementwise(OpCode::Indicator, elementwise(OpCode::Eq, indices(), Atom::number(0)));
    const Selector at0 = select(indices(), Atom::number(0), Predicate::Eq);
    const Selector or0 = select_or(sel, at0);
    const Selector and0 = select_and(sel, at0);
    const SOp or0_0_frac = aggregate(or0, light0);
    const Operand or0_width = elementwise(OpCode::Div, Atom::number(1), or0_0_frac);
    const SOp and0_width = aggregate(and0, light0, Atom::number(0));
    const Operand bos_res = elementwise(OpCode::Sub, or0_width, Atom::number(1));
    const Operand nobos_res = elementwise(OpCode::Add, bos_res, and0_width);

    annotate(or0.id(), {"selector_width", sel.id()});
    annotate(or0_0_frac.id(), {"selector_width", sel.id()});
    if (!assume_bos) {
        annotate(and0.id(), {"selector_width", sel.id()});
        annotate(and0_width.id(), {"selector_width", sel.id()});
    }
    return std::get<SOp>(elementwise(OpCode::Round, assume_bos ? bos_res : nobos_res));
}

Scorer score(const Operand& keys, const Operand& queries, const Extensions& ext) {
    if (!ext.select_best) throw FeatureGateError("score requires the select_best extension (--enable-select-best)");
    Node n;
    n.kind = NodeKind::Score;
    n.operands = {as_sop(keys).id(), as_sop(queries).id()};
    return Scorer(detail::intern(std::move(n)));
}

Selector select_best(Selector sel, Scorer sc, const Extensions& ext) {
    if (!ext.select_best) {
        throw FeatureGateError("select_best requires the select_best extension (--enable-select-best)");
    }
    return combine(NodeKind::SelectBest, {sel.id(), sc.id()});
}

}  // namespace build
}  // namespace rasp
