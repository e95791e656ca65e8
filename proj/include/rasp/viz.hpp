#pragma once

// Computation-flow and selection-heatmap rendering for a compiled s-op on one
// example input.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rasp/graph.hpp"
#include "rasp/printer.hpp"
#include "rasp/sequence.hpp"

namespace rasp::viz {

enum class FlowBoxKind { Embedding, Head, Ffn };

struct HeadMember {
    NodeId node = 0;
    std::string label;
    std::vector<std::string> value;
};

struct FlowBox {
    std::string id;
    FlowBoxKind kind = FlowBoxKind::Ffn;
    int layer = 0;  // 0 for embeddings
    std::string label;
    NodeId node = 0;  // selector id for heads
    bool output = false;
    std::vector<std::string> value;      // embedding and ffn boxes
    std::vector<std::string> heatmap;    // heads: one "0101" string per query row
    std::vector<HeadMember> members;     // heads
};

struct FlowEdge {
    std::string from;
    std::string to;
    friend auto operator<=>(const FlowEdge&, const FlowEdge&) = default;
};

struct FlowGraph {
    std::vector<std::string> input;
    int num_layers = 0;
    std::vector<FlowBox> boxes;  // embeddings, then per layer heads then ffn
    std::vector<FlowEdge> edges;  // sorted, unique

    [[nodiscard]] nlohmann::ordered_json to_json() const;
};

struct FlowOptions {
    const NameTable* names = nullptr;
    bool select_best_enabled = false;
};

/// Throws EvalError (with the failing node's label) if evaluation fails.
FlowGraph build_flow(SOp root, const Sequence& input, const FlowOptions& options = {});

enum class FlowFormat { Dot, Json, Text };
enum class HeatmapFormat { Ascii, Csv };

std::string render_flow(const FlowGraph& flow, FlowFormat format);
std::string render_flow(SOp root, std::string_view input, FlowFormat format, const FlowOptions& options = {});

/// ASCII: '█' selected, '·' not. CSV: 1/0 with a header row of keys.
std::string render_heatmap(const SelectionMatrix& m, const Sequence& input, HeatmapFormat format);
std::string render_heatmap(Selector sel, std::string_view input, HeatmapFormat format);

}  // namespace rasp::viz
