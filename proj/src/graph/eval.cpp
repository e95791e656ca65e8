#include "rasp/eval.hpp"

#include <algorithm>
#include <unordered_map>

#include "rasp/error.hpp"

namespace rasp {
namespace {

std::string describe(const Node& n) {
    std::string kind;
    switch (n.kind) {
        case NodeKind::Elementwise: kind = "elementwise '" + std::string(op_name(n.op)) + "'"; break;
        case NodeKind::Ternary: kind = "ternary"; break;
        case NodeKind::Aggregate: kind = "aggregate"; break;
        case NodeKind::Select: kind = "select(" + std::string(symbol(n.predicate)) + ")"; break;
        case NodeKind::Score: kind = "score"; break;
        case NodeKind::SelectBest: kind = "select_best"; break;
        default: kind = "node"; break;
    }
    return kind + " #" + std::to_string(n.id);
}

// Rethrows with added context while keeping the dynamic error type.
[[noreturn]] void rethrow(const EvalError& e, const std::string& context) {
    const std::string msg = context + ": " + e.what();
    if (dynamic_cast<const CoercionError*>(&e)) throw CoercionError(msg);
    if (dynamic_cast<const FeatureGateError*>(&e)) throw FeatureGateError(msg);
    throw EvalError(msg);
}

std::vector<double> as_numbers(const Sequence& s, const Node& n, std::string_view role) {
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        try {
            out[i] = coerce_numeric(s[i]);
        } catch (const EvalError& e) {
            rethrow(e, describe(n) + " " + std::string(role) + " at position " + std::to_string(i));
        }
    }
    return out;
}

}  // namespace

EvalContext::EvalContext(Sequence input, const kernels::KernelTable& kernels)
    : input_(std::move(input)), kernels_(&kernels) {
    if (input_.empty()) throw EvalError("input must contain at least one token");
}

const Sequence& EvalContext::eval(SOp s) { return std::get<Sequence>(eval_node(s.id())); }
const SelectionMatrix& EvalContext::eval(Selector s) { return std::get<SelectionMatrix>(eval_node(s.id())); }
const ScoreMatrix& EvalContext::eval(Scorer s) { return std::get<ScoreMatrix>(eval_node(s.id())); }

const EvalContext::Value& EvalContext::eval_node(NodeId id) {
    if (auto it = memo_.find(id); it != memo_.end()) return it->second;
    Value v = compute(node_at(id));
    return memo_.emplace(id, std::move(v)).first->second;
}

EvalContext::Value EvalContext::compute(const Node& n) {
    const std::size_t len = length();
    switch (n.kind) {
        case NodeKind::Tokens: return input_;
        case NodeKind::Indices: {
            std::vector<Atom> items;
            items.reserve(len);
            for (std::size_t i = 0; i < len; ++i) items.push_back(Atom::number(static_cast<double>(i)));
            return Sequence(std::move(items));
        }
        case NodeKind::Constant: return broadcast_const(n.constant, len);
        case NodeKind::Elementwise: return compute_elementwise(n);
        case NodeKind::Ternary: return compute_ternary(n);
        case NodeKind::Aggregate: return compute_aggregate(n);
        case NodeKind::Select: return compute_select(n);
        case NodeKind::SelectorAnd:
        case NodeKind::SelectorOr: {
            const auto& a = std::get<SelectionMatrix>(eval_node(n.operands[0]));
            const auto& b = std::get<SelectionMatrix>(eval_node(n.operands[1]));
            SelectionMatrix out(len);
            if (n.kind == NodeKind::SelectorAnd) kernels_->mask_and(a.cells(), b.cells(), out.cells());
            else kernels_->mask_or(a.cells(), b.cells(), out.cells());
            return out;
        }
        case NodeKind::SelectorNot: {
            const auto& a = std::get<SelectionMatrix>(eval_node(n.operands[0]));
            SelectionMatrix out(len);
            kernels_->mask_not(a.cells(), out.cells());
            return out;
        }
        case NodeKind::SelectBest: return compute_select_best(n);
        case NodeKind::Score: return compute_score(n);
    }
    throw EvalError("unknown node kind");
}

Sequence EvalContext::compute_elementwise(const Node& n) {
    std::vector<const Sequence*> args;
    for (auto id : n.operands) args.push_back(&std::get<Sequence>(eval_node(id)));
    std::vector<Atom> out;
    out.reserve(length());
    std::vector<Atom> row(args.size());
    for (std::size_t i = 0; i < length(); ++i) {
        for (std::size_t a = 0; a < args.size(); ++a) row[a] = (*args[a])[i];
        try {
            out.push_back(apply_op(n.op, row, n.table));
        } catch (const EvalError& e) {
            rethrow(e, describe(n) + " at position " + std::to_string(i));
        }
    }
    return Sequence(std::move(out));
}

Sequence EvalContext::compute_ternary(const Node& n) {
    const auto& cond = std::get<Sequence>(eval_node(n.operands[0]));
    const auto& then = std::get<Sequence>(eval_node(n.operands[1]));
    const auto& otherwise = std::get<Sequence>(eval_node(n.operands[2]));
    std::vector<Atom> out;
    out.reserve(length());
    for (std::size_t i = 0; i < length(); ++i) {
        if (!cond[i].is_bool()) {
            throw EvalError(describe(n) + " at position " + std::to_string(i) + ": condition is " +
                            std::string(kind_name(cond[i].kind())) + " '" + to_display(cond[i]) +
                            "', expected Bool");
        }
        out.push_back(cond[i].as_bool() ? then[i] : otherwise[i]);
    }
    return Sequence(std::move(out));
}

Sequence EvalContext::compute_aggregate(const Node& n) {
    const auto& sel = std::get<SelectionMatrix>(eval_node(n.operands[0]));
    const auto& values = std::get<Sequence>(eval_node(n.operands[1]));
    const auto& fallback = std::get<Sequence>(eval_node(n.operands[2]));
    const auto numeric = values.numeric_view();
    const std::size_t len = length();

    std::vector<Atom> out;
    out.reserve(len);
    for (std::size_t q = 0; q < len; ++q) {
        const auto row = sel.row(q);
        const std::size_t count = kernels_->mask_count(row);
        if (count == 0) {
            out.push_back(fallback[q]);
        } else if (count == 1) {
            const auto k = static_cast<std::size_t>(std::find(row.begin(), row.end(), 1) - row.begin());
            out.push_back(values[k]);
        } else if (numeric) {
            out.push_back(Atom::number(kernels_->masked_sum(row, *numeric) / static_cast<double>(count)));
        } else {
            // Mixed or symbolic values: identical selections pass through,
            // numeric selections average, anything else is an error.
            std::vector<double> coerced(len, 0.0);
            const Atom* first = nullptr;
            bool identical = true;
            bool all_numeric = true;
            for (std::size_t k = 0; k < len; ++k) {
                if (!row[k]) continue;
                if (!first) first = &values[k];
                identical = identical && values[k] == *first;
                if (values[k].is_numeric()) coerced[k] = coerce_numeric(values[k]);
                else all_numeric = false;
            }
            if (identical) {
                out.push_back(*first);
            } else if (all_numeric) {
                out.push_back(Atom::number(kernels_->masked_sum(row, coerced) / static_cast<double>(count)));
            } else {
                throw CoercionError(describe(n) + " at row " + std::to_string(q) + ": cannot average " +
                                    std::to_string(count) + " selected values that include non-numeric atoms");
            }
        }
    }
    return Sequence(std::move(out));
}

SelectionMatrix EvalContext::compute_select(const Node& n) {
    const auto& keys = std::get<Sequence>(eval_node(n.operands[0]));
    const auto& queries = std::get<Sequence>(eval_node(n.operands[1]));
    const std::size_t len = length();
    SelectionMatrix out(len);

    auto kernel_fill = [&](const std::vector<double>& k, const std::vector<double>& q) {
        for (std::size_t row = 0; row < len; ++row) kernels_->compare_row(n.predicate, k, q[row], out.row(row));
    };

    auto kn = keys.numeric_view();
    auto qn = queries.numeric_view();
    if (kn && qn) {
        kernel_fill(*kn, *qn);
        return out;
    }

    const bool equality = n.predicate == Predicate::Eq || n.predicate == Predicate::Ne;
    const auto all_tokens = [](const Sequence& s) {
        return std::all_of(s.begin(), s.end(), [](const Atom& a) { return a.is_token(); });
    };
    if (equality && all_tokens(keys) && all_tokens(queries)) {
        std::unordered_map<std::string, double> ids;
        auto intern = [&](const Sequence& s) {
            std::vector<double> out_ids;
            out_ids.reserve(s.size());
            for (const auto& a : s) out_ids.push_back(ids.try_emplace(a.as_token(), static_cast<double>(ids.size())).first->second);
            return out_ids;
        };
        const auto k = intern(keys);
        const auto q = intern(queries);
        kernel_fill(k, q);
        return out;
    }

    for (std::size_t q = 0; q < len; ++q) {
        for (std::size_t k = 0; k < len; ++k) {
            try {
                out.set(q, k, apply_predicate(n.predicate, keys[k], queries[q]));
            } catch (const EvalError& e) {
                rethrow(e, describe(n) + " at (query " + std::to_string(q) + ", key " + std::to_string(k) + ")");
            }
        }
    }
    return out;
}

SelectionMatrix EvalContext::compute_select_best(const Node& n) {
    const auto& sel = std::get<SelectionMatrix>(eval_node(n.operands[0]));
    const auto& scores = std::get<ScoreMatrix>(eval_node(n.operands[1]));
    const std::size_t len = length();
    SelectionMatrix out(len);
    for (std::size_t q = 0; q < len; ++q) {
        const std::size_t k = kernels_->masked_argmax(sel.row(q), scores.row(q));
        if (k < len) out.set(q, k, true);
    }
    return out;
}

ScoreMatrix EvalContext::compute_score(const Node& n) {
    const auto keys = as_numbers(std::get<Sequence>(eval_node(n.operands[0])), n, "key");
    const auto queries = as_numbers(std::get<Sequence>(eval_node(n.operands[1])), n, "query");
    ScoreMatrix out(length());
    for (std::size_t q = 0; q < length(); ++q) kernels_->scale_row(keys, queries[q], out.row(q));
    return out;
}

Sequence evaluate(SOp s, const Sequence& input) {
    EvalContext ctx(input);
    return ctx.eval(s);
}

Sequence evaluate(SOp s, std::string_view input) { return evaluate(s, Sequence::from_string(input)); }

SelectionMatrix evaluate(Selector s, const Sequence& input) {
    EvalContext ctx(input);
    return ctx.eval(s);
}

SelectionMatrix evaluate(Selector s, std::string_view input) { return evaluate(s, Sequence::from_string(input)); }

ScoreMatrix evaluate(Scorer s, const Sequence& input) {
    EvalContext ctx(input);
    return ctx.eval(s);
}

}  // namespace rasp
