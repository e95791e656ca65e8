#include <charconv>

#include "rasp/frontend/ast.hpp"

namespace rasp::frontend {

std::string_view spelling(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Mod: return "%";
        case BinaryOp::Eq: return "==";
        case BinaryOp::Ne: return "!=";
        case BinaryOp::Lt: return "<";
        case BinaryOp::Le: return "<=";
        case BinaryOp::Gt: return ">";
        case BinaryOp::Ge: return ">=";
        case BinaryOp::And: return "and";
        case BinaryOp::Or: return "or";
        case BinaryOp::In: return "in";
    }
    return "?";
}

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

std::string number_text(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct ExprPrinter {
    std::string operator()(const NumberLit& n) const { return number_text(n.value); }
    std::string operator()(const StringLit& s) const { return quote(s.value); }
    std::string operator()(const BoolLit& b) const { return b.value ? "True" : "False"; }
    std::string operator()(const PredicateLit& p) const { return std::string(symbol(p.value)); }
    std::string operator()(const Ident& i) const { return i.name; }
    std::string operator()(const Unary& u) const {
        return u.op == UnaryOp::Neg ? "(-" + to_source(*u.operand) + ")" : "(not " + to_source(*u.operand) + ")";
    }
    std::string operator()(const Binary& b) const {
        return "(" + to_source(*b.lhs) + " " + std::string(spelling(b.op)) + " " + to_source(*b.rhs) + ")";
    }
    std::string operator()(const Conditional& c) const {
        return "(" + to_source(*c.then) + " if " + to_source(*c.cond) + " else " + to_source(*c.otherwise) + ")";
    }
    std::string operator()(const Call& c) const {
        std::string out = to_source(*c.callee) + "(";
        for (std::size_t i = 0; i < c.args.size(); ++i) {
            if (i) out += ", ";
            if (c.args[i].keyword) out += *c.args[i].keyword + " = ";
            out += to_source(*c.args[i].value);
        }
        return out + ")";
    }
    std::string operator()(const ListLit& l) const {
        std::string out = "[";
        for (std::size_t i = 0; i < l.items.size(); ++i) {
            if (i) out += ", ";
            out += to_source(*l.items[i]);
        }
        return out + "]";
    }
    std::string operator()(const Comprehension& c) const {
        return "[" + to_source(*c.element) + " for " + c.var + " in " + to_source(*c.source) + "]";
    }
    std::string operator()(const IndexExpr& i) const {
        return to_source(*i.target) + "[" + to_source(*i.index) + "]";
    }
};

struct StmtPrinter {
    std::string operator()(const Assign& a) const { return a.name + " = " + to_source(*a.value) + ";"; }
    std::string operator()(const ExprStmt& e) const { return to_source(*e.value) + ";"; }
    std::string operator()(const Return& r) const { return "return " + to_source(*r.value) + ";"; }
    std::string operator()(const std::shared_ptr<const FunctionDef>& f) const {
        std::string out = "def " + f->name + "(";
        for (std::size_t i = 0; i < f->params.size(); ++i) {
            if (i) out += ", ";
            out += f->params[i].name;
            if (f->params[i].default_value) out += " = " + to_source(*f->params[i].default_value);
        }
        out += ") {\n";
        for (const auto& s : f->body) out += "    " + to_source(s) + "\n";
        out += "    return " + to_source(*f->result) + ";\n}";
        return out;
    }
    std::string operator()(const SetExample& s) const { return "set example " + quote(s.value) + ";"; }
    std::string operator()(const Draw& d) const {
        return "draw(" + to_source(*d.target) + ", " + quote(d.input) + ");";
    }
};

}  // namespace

std::string to_source(const Expr& e) { return std::visit(ExprPrinter{}, e.node); }
std::string to_source(const Stmt& s) { return std::visit(StmtPrinter{}, s.node); }

std::string to_source(const Program& p) {
    std::string out;
    for (const auto& s : p.statements) out += to_source(s) + "\n";
    return out;
}

}  // namespace rasp::frontend
