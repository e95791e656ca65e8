#include "rasp/printer.hpp"

namespace rasp {

void NameTable::bind(NodeId id, const std::string& name, bool top_level) {
    auto it = names_.find(id);
    if (it == names_.end() || (top_level && !it->second.top_level)) names_[id] = Entry{name, top_level};
}

std::optional<std::string> NameTable::name(NodeId id) const {
    auto it = names_.find(id);
    if (it == names_.end()) return std::nullopt;
    return it->second.name;
}

std::string atom_literal(const Atom& a) {
    switch (a.kind()) {
        case AtomKind::Token: {
            std::string out = "\"";
            for (char c : a.as_token()) {
                if (c == '"' || c == '\\') out += '\\';
                out += c;
            }
            return out + "\"";
        }
        case AtomKind::Bool: return a.as_bool() ? "True" : "False";
        default: return to_display(a);
    }
}

namespace {

std::string table_text(const std::vector<Atom>& table) {
    std::string out = "[";
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (i) out += ", ";
        out += atom_literal(table[i]);
    }
    return out + "]";
}

std::string render(NodeId id, const NameTable* names, bool expand) {
    if (!expand && names) {
        if (auto nm = names->name(id)) return *nm;
    }
    const Node& n = node_at(id);
    if (!expand) {
        if (auto ann = annotation(id); ann && ann->role == "selector_width" &&
                                       n.value_class() == ValueClass::Selector) {
            return "selector_width(" + render(ann->origin, names, false) + ")";
        }
    }
    auto sub = [&](std::size_t i) { return render(n.operands[i], names, false); };
    switch (n.kind) {
        case NodeKind::Tokens: return "tokens";
        case NodeKind::Indices: return "indices";
        case NodeKind::Constant: return atom_literal(n.constant);
        case NodeKind::Elementwise:
            switch (n.op) {
                case OpCode::Neg: return "-" + sub(0);
                case OpCode::Not: return "not " + sub(0);
                case OpCode::Indicator: return "indicator(" + sub(0) + ")";
                case OpCode::Round: return "round(" + sub(0) + ")";
                case OpCode::InList: return "(" + sub(0) + " in " + table_text(n.table) + ")";
                case OpCode::Index: return table_text(n.table) + "[" + sub(0) + "]";
                default: return "(" + sub(0) + " " + std::string(op_name(n.op)) + " " + sub(1) + ")";
            }
        case NodeKind::Ternary: return "(" + sub(1) + " if " + sub(0) + " else " + sub(2) + ")";
        case NodeKind::Aggregate: {
            const Node& fallback = node_at(n.operands[2]);
            const bool zero_default = fallback.kind == NodeKind::Constant && fallback.constant == Atom::number(0);
            return "aggregate(" + sub(0) + ", " + sub(1) + (zero_default ? "" : ", " + sub(2)) + ")";
        }
        case NodeKind::Select:
            return "select(" + sub(0) + ", " + sub(1) + ", " + std::string(symbol(n.predicate)) + ")";
        case NodeKind::SelectorAnd: return "(" + sub(0) + " and " + sub(1) + ")";
        case NodeKind::SelectorOr: return "(" + sub(0) + " or " + sub(1) + ")";
        case NodeKind::SelectorNot: return "not " + sub(0);
        case NodeKind::SelectBest: return "select_best(" + sub(0) + ", " + sub(1) + ")";
        case NodeKind::Score: return "score(" + sub(0) + ", " + sub(1) + ")";
    }
    return "?";
}

}  // namespace

std::string node_text(NodeId id, const NameTable* names, bool expand_root) { return render(id, names, expand_root); }

std::string node_label(NodeId id, const NameTable* names) { return render(id, names, false); }

}  // namespace rasp
