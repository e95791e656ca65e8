#pragma once

// Immutable, hash-consed DAG of s-ops, selectors and scorers.
//
// Nodes live in a process-wide store and are never freed. Structurally
// identical nodes are created once, so node identity is structural equality
// and ids are assigned in creation order (operands always precede users,
// which makes ascending id order a topological order).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rasp/atom.hpp"

namespace rasp {

using NodeId = std::uint32_t;

enum class NodeKind : std::uint8_t {
    Tokens,
    Indices,
    Constant,
    Elementwise,
    Ternary,
    Aggregate,  // operands: selector, values, default
    Select,     // operands: keys, queries
    SelectorAnd,
    SelectorOr,
    SelectorNot,
    SelectBest,  // operands: selector, scorer
    Score,       // operands: keys, queries
};

enum class OpCode : std::uint8_t {
    None,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Neg,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    Indicator,
    InList,  // membership in the node's static table
    Index,   // table[operand]
    Round,
};

std::string_view op_name(OpCode op);
/// Number of operands an opcode takes (1 or 2).
int op_arity(OpCode op);

enum class ValueClass : std::uint8_t { SOp, Selector, Scorer };

struct Node {
    NodeId id = 0;
    NodeKind kind = NodeKind::Constant;
    OpCode op = OpCode::None;
    Predicate predicate = Predicate::Eq;
    Atom constant;
    std::vector<NodeId> operands;
    std::vector<Atom> table;

    [[nodiscard]] ValueClass value_class() const;
};

/// Looks up a node by id. Ids are only obtained from built handles.
const Node& node_at(NodeId id);
/// Number of nodes created so far in this process.
std::size_t node_count();

/// Provenance of a node created by a macro expansion; selector_width tags its
/// internal selectors and aggregations with the selector it measures.
struct Annotation {
    std::string role;
    NodeId origin = 0;
};

/// First annotation wins; later calls for the same node are ignored.
void annotate(NodeId id, Annotation a);
std::optional<Annotation> annotation(NodeId id);

namespace detail {
template <class Tag>
class Handle {
public:
    Handle() = default;
    explicit Handle(NodeId id) : id_(id) {}
    [[nodiscard]] NodeId id() const noexcept { return id_; }
    [[nodiscard]] const Node& node() const { return node_at(id_); }
    friend bool operator==(Handle, Handle) = default;

private:
    NodeId id_ = 0;
};
struct SOpTag {};
struct SelectorTag {};
struct ScorerTag {};
}  // namespace detail

using SOp = detail::Handle<detail::SOpTag>;
using Selector = detail::Handle<detail::SelectorTag>;
using Scorer = detail::Handle<detail::ScorerTag>;

/// Builder argument that may be a constant; constants broadcast.
using Operand = std::variant<Atom, SOp>;

struct Extensions {
    bool select_best = false;
};

namespace build {

SOp tokens();
SOp indices();
/// Broadcast constant node.
SOp constant(const Atom& a);
SOp as_sop(const Operand& o);

/// 1/aggregate(select_all, indicator(indices==0)), rounded.
SOp length();
/// select(1, 1, ==).
Selector select_all();

/// Applies `op` positionwise. When every operand is a constant the result is
/// folded to an Atom. `table` is the static list of InList / Index.
Operand elementwise(OpCode op, std::span<const Operand> operands, std::vector<Atom> table = {});
Operand elementwise(OpCode op, const Operand& a);
Operand elementwise(OpCode op, const Operand& a, const Operand& b);

/// Positionwise `then if cond else otherwise`; a constant condition folds.
Operand ternary(const Operand& cond, const Operand& then, const Operand& otherwise);

Selector select(const Operand& keys, const Operand& queries, Predicate p);
Selector select_and(Selector a, Selector b);
Selector select_or(Selector a, Selector b);
Selector select_not(Selector a);

SOp aggregate(Selector sel, const Operand& values, const Operand& fallback = Atom::number(0));

/// aggregate(select(seq, value, ==), 1, 0) > 0.
SOp contains(const Atom& value, SOp seq);

/// Expands to the select/aggregate construction of selector width; the
/// result is rounded to the nearest integer.
SOp selector_width(Selector sel, bool assume_bos = false);

/// Throws FeatureGateError unless ext.select_best.
Scorer score(const Operand& keys, const Operand& queries, const Extensions& ext);
Selector select_best(Selector sel, Scorer sc, const Extensions& ext);

}  // namespace build

/// Applies an elementwise opcode to atoms. Used by folding and evaluation.
Atom apply_op(OpCode op, std::span<const Atom> args, std::span<const Atom> table = {});

}  // namespace rasp
