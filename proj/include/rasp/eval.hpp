#pragma once

#include <string_view>
#include <unordered_map>
#include <variant>

#include "rasp/graph.hpp"
#include "rasp/kernels.hpp"
#include "rasp/sequence.hpp"

namespace rasp {

/// Memoized evaluation of DAG nodes on one input. Not thread-safe; use one
/// context per thread (the DAG itself is shared freely).
class EvalContext {
public:
    /// Throws EvalError on an empty input.
    explicit EvalContext(Sequence input, const kernels::KernelTable& kernels = kernels::active());

    [[nodiscard]] const Sequence& input() const noexcept { return input_; }
    [[nodiscard]] std::size_t length() const noexcept { return input_.size(); }

    const Sequence& eval(SOp s);
    const SelectionMatrix& eval(Selector s);
    const ScoreMatrix& eval(Scorer s);

    [[nodiscard]] std::size_t memo_size() const noexcept { return memo_.size(); }

private:
    using Value = std::variant<Sequence, SelectionMatrix, ScoreMatrix>;

    const Value& eval_node(NodeId id);
    Value compute(const Node& n);
    Sequence compute_elementwise(const Node& n);
    Sequence compute_ternary(const Node& n);
    Sequence compute_aggregate(const Node& n);
    SelectionMatrix compute_select(const Node& n);
    SelectionMatrix compute_select_best(const Node& n);
    ScoreMatrix compute_score(const Node& n);

    Sequence input_;
    const kernels::KernelTable* kernels_;
    std::unordered_map<NodeId, Value> memo_;
};

Sequence evaluate(SOp s, const Sequence& input);
Sequence evaluate(SOp s, std::string_view input);
SelectionMatrix evaluate(Selector s, const Sequence& input);
SelectionMatrix evaluate(Selector s, std::string_view input);
ScoreMatrix evaluate(Scorer s, const Sequence& input);

}  // namespace rasp
