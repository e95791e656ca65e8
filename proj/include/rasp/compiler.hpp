#pragma once

// Layer scheduling of an s-op's DAG into an abstract transformer
// architecture: aggregations become attention heads, elementwise nodes
// feed-forward work.

#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "rasp/graph.hpp"
#include "rasp/printer.hpp"

namespace rasp::compiler {

/// Nodes reachable from a root, ascending by id (a topological order).
struct Dag {
    NodeId root = 0;
    std::vector<NodeId> nodes;

    [[nodiscard]] std::vector<NodeId> aggregates() const;
    [[nodiscard]] bool contains(NodeId id) const;
};

Dag extract_dag(NodeId root);
inline Dag extract_dag(SOp root) { return extract_dag(root.id()); }

/// Aggregations of one layer sharing a selector.
struct HeadGroup {
    NodeId selector = 0;
    int layer = 0;                // 1-based
    std::vector<NodeId> members;  // aggregate node ids, ascending
};

struct Schedule {
    /// depth of every DAG node; for selectors and scorers, the depth of the
    /// values they read.
    std::unordered_map<NodeId, int> depth;
    /// heads[L-1] are the head groups of layer L.
    std::vector<std::vector<HeadGroup>> heads;
    /// ffn[0] is the embedding group; ffn[L] runs after the heads of layer L.
    std::vector<std::vector<NodeId>> ffn;

    [[nodiscard]] int num_layers() const noexcept { return static_cast<int>(heads.size()); }
    [[nodiscard]] int depth_of(NodeId id) const { return depth.at(id); }
};

Schedule schedule(const Dag& dag);

struct HeadReport {
    NodeId selector_id = 0;
    std::string selector;
    std::vector<NodeId> members;
    std::vector<std::string> values;
};

struct LayerReport {
    int index = 0;
    std::vector<HeadReport> heads;
    std::vector<std::string> ffn;
};

struct ArchReport {
    std::vector<std::string> embedding;
    std::vector<LayerReport> layers;
    int num_layers = 0;
    int max_heads = 0;
    int total_heads = 0;

    [[nodiscard]] std::vector<int> heads_per_layer() const;
    /// {layers:[{index, heads:[{selector, values}], ffn}], num_layers,
    ///  max_heads, total_heads, embedding}
    [[nodiscard]] nlohmann::ordered_json to_json() const;
    /// Short human-readable summary.
    [[nodiscard]] std::string to_text() const;
};

struct CompileOptions {
    bool select_best_enabled = false;
    const NameTable* names = nullptr;
};

/// Throws FeatureGateError if the DAG uses score/select_best without the option.
ArchReport compile_report(SOp root, const CompileOptions& options = {});

}  // namespace rasp::compiler
