#include "rasp/viz.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "rasp/compiler.hpp"
#include "rasp/error.hpp"
#include "rasp/eval.hpp"

namespace rasp::viz {
namespace {

std::vector<std::string> displays(const Sequence& s) {
    std::vector<std::string> out;
    out.reserve(s.size());
    for (const auto& a : s) out.push_back(to_display(a));
    return out;
}

std::string joined(const std::vector<std::string>& items) {
    bool single = std::all_of(items.begin(), items.end(),
                              [](const std::string& s) { return split_code_points(s).size() == 1; });
    std::string out;
    if (single) {
        for (const auto& s : items) out += s;
        return out;
    }
    out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out + "]";
}

std::size_t width(const std::string& s) { return split_code_points(s).size(); }

std::string pad(const std::string& s, std::size_t w) { return s + std::string(w > width(s) ? w - width(s) : 0, ' '); }

std::string kind_name(FlowBoxKind k) {
    switch (k) {
        case FlowBoxKind::Embedding: return "embedding";
        case FlowBoxKind::Head: return "head";
        case FlowBoxKind::Ffn: return "ffn";
    }
    return "?";
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> heatmap_rows(const SelectionMatrix& m) {
    std::vector<std::string> rows;
    for (std::size_t q = 0; q < m.size(); ++q) {
        std::string r;
        for (auto bit : m.row(q)) r += bit ? '1' : '0';
        rows.push_back(std::move(r));
    }
    return rows;
}

template <class F>
auto labelled(const std::string& label, F&& f) {
    try {
        return f();
    } catch (const EvalError& e) {
        throw EvalError("while evaluating " + label + ": " + e.what());
    }
}

}  // namespace

nlohmann::ordered_json FlowGraph::to_json() const {
    nlohmann::ordered_json j;
    j["input"] = input;
    j["num_layers"] = num_layers;
    j["boxes"] = nlohmann::ordered_json::array();
    for (const auto& b : boxes) {
        nlohmann::ordered_json bj;
        bj["id"] = b.id;
        bj["kind"] = kind_name(b.kind);
        bj["layer"] = b.layer;
        bj["label"] = b.label;
        bj["output"] = b.output;
        if (b.kind == FlowBoxKind::Head) {
            bj["heatmap"] = b.heatmap;
            bj["members"] = nlohmann::ordered_json::array();
            for (const auto& m : b.members) {
                nlohmann::ordered_json mj;
                mj["label"] = m.label;
                mj["value"] = m.value;
                bj["members"].push_back(std::move(mj));
            }
        } else {
            bj["value"] = b.value;
        }
        j["boxes"].push_back(std::move(bj));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : edges) j["edges"].push_back({{"from", e.from}, {"to", e.to}});
    return j;
}

FlowGraph build_flow(SOp root, const Sequence& input, const FlowOptions& options) {
    const compiler::Dag dag = compiler::extract_dag(root);
    if (!options.select_best_enabled) {
        for (NodeId id : dag.nodes) {
            const auto kind = node_at(id).kind;
            if (kind == NodeKind::Score || kind == NodeKind::SelectBest) {
                throw FeatureGateError("program uses select_best; enable the select_best extension to draw it");
            }
        }
    }
    const compiler::Schedule sched = compiler::schedule(dag);
    const NameTable* names = options.names;
    EvalContext ctx(input);

    FlowGraph flow;
    flow.input = displays(input);
    flow.num_layers = sched.num_layers();
    std::unordered_map<NodeId, std::string> producer;

    auto value_box = [&](NodeId id, FlowBoxKind kind, int layer) {
        FlowBox b;
        b.id = "n" + std::to_string(id);
        b.kind = kind;
        b.layer = layer;
        b.node = id;
        b.label = node_label(id, names);
        b.output = id == root.id();
        b.value = labelled(b.label, [&] { return displays(ctx.eval(SOp(id))); });
        producer[id] = b.id;
        flow.boxes.push_back(std::move(b));
    };

    for (NodeId id : dag.nodes) {
        const auto kind = node_at(id).kind;
        if (kind == NodeKind::Tokens || kind == NodeKind::Indices) value_box(id, FlowBoxKind::Embedding, 0);
    }
    for (NodeId id : sched.ffn[0]) value_box(id, FlowBoxKind::Embedding, 0);

    for (int L = 1; L <= sched.num_layers(); ++L) {
        for (const auto& g : sched.heads[static_cast<std::size_t>(L - 1)]) {
            FlowBox b;
            b.id = "h" + std::to_string(L) + "_" + std::to_string(g.selector);
            b.kind = FlowBoxKind::Head;
            b.layer = L;
            b.node = g.selector;
            b.label = node_label(g.selector, names);
            b.heatmap = labelled(b.label, [&] { return heatmap_rows(ctx.eval(Selector(g.selector))); });
            for (NodeId m : g.members) {
                HeadMember hm{m, node_label(m, names), {}};
                hm.value = labelled(hm.label, [&] { return displays(ctx.eval(SOp(m))); });
                b.output = b.output || m == root.id();
                producer[m] = b.id;
                b.members.push_back(std::move(hm));
            }
            flow.boxes.push_back(std::move(b));
        }
        for (NodeId id : sched.ffn[static_cast<std::size_t>(L)]) value_box(id, FlowBoxKind::Ffn, L);
    }

    // Boxes that produce the s-ops a node reads, looking through selectors and scorers.
    std::set<FlowEdge> edges;
    auto add_sources = [&](auto& self, NodeId operand, const std::string& to) -> void {
        if (auto it = producer.find(operand); it != producer.end()) {
            if (it->second != to) edges.insert({it->second, to});
            return;
        }
        const Node& n = node_at(operand);
        if (n.value_class() == ValueClass::SOp) return;  // constants
        for (NodeId op : n.operands) self(self, op, to);
    };
    for (const auto& b : flow.boxes) {
        if (b.kind == FlowBoxKind::Head) {
            for (const auto& m : b.members) {
                for (NodeId op : node_at(m.node).operands) add_sources(add_sources, op, b.id);
            }
        } else {
            for (NodeId op : node_at(b.node).operands) add_sources(add_sources, op, b.id);
        }
    }
    flow.edges.assign(edges.begin(), edges.end());
    return flow;
}

std::string render_flow(const FlowGraph& flow, FlowFormat format) {
    if (format == FlowFormat::Json) return flow.to_json().dump(2) + "\n";

    std::ostringstream out;
    if (format == FlowFormat::Text) {
        out << "input: " << joined(flow.input) << "\n";
        int current = -1;
        for (const auto& b : flow.boxes) {
            if (b.layer != current) {
                current = b.layer;
                out << (current == 0 ? std::string("embedding") : "layer " + std::to_string(current)) << "\n";
            }
            if (b.kind == FlowBoxKind::Head) {
                out << "  head " << b.label << "\n";
                for (const auto& row : b.heatmap) {
                    out << "    ";
                    for (char c : row) out << (c == '1' ? "█" : "·");
                    out << "\n";
                }
                for (const auto& m : b.members) out << "    -> " << m.label << " = " << joined(m.value) << "\n";
            } else {
                out << "  " << (b.kind == FlowBoxKind::Ffn ? "ffn " : "") << b.label << " = " << joined(b.value)
                    << "\n";
            }
        }
        return out.str();
    }

    out << "digraph flow {\n";
    out << "  rankdir=TB;\n";
    out << "  node [shape=box, fontname=\"monospace\"];\n";
    out << "  label=\"input: " << dot_escape(joined(flow.input)) << "\";\n";
    int current = -1;
    for (const auto& b : flow.boxes) {
        if (b.layer != current) {
            if (current != -1) out << "  }\n";
            current = b.layer;
            out << "  subgraph cluster_" << (current == 0 ? std::string("embedding") : "layer_" + std::to_string(current))
                << " {\n";
            out << "    label=\"" << (current == 0 ? std::string("embedding") : "layer " + std::to_string(current))
                << "\";\n";
        }
        std::string label;
        if (b.kind == FlowBoxKind::Head) {
            label = dot_escape(b.label) + "\\l";
            for (const auto& row : b.heatmap) {
                for (char c : row) label += c == '1' ? "█" : "·";
                label += "\\l";
            }
            for (const auto& m : b.members) label += dot_escape(m.label + " = " + joined(m.value)) + "\\l";
        } else {
            label = dot_escape(b.label + " = " + joined(b.value)) + "\\l";
        }
        out << "    " << b.id << " [label=\"" << label << "\"";
        if (b.kind == FlowBoxKind::Head) out << ", style=rounded";
        if (b.output) out << ", penwidth=2";
        out << "];\n";
    }
    if (current != -1) out << "  }\n";
    for (const auto& e : flow.edges) out << "  " << e.from << " -> " << e.to << ";\n";
    out << "}\n";
    return out.str();
}

std::string render_flow(SOp root, std::string_view input, FlowFormat format, const FlowOptions& options) {
    return render_flow(build_flow(root, Sequence::from_string(input), options), format);
}

std::string render_heatmap(const SelectionMatrix& m, const Sequence& input, HeatmapFormat format) {
    const auto toks = displays(input);
    std::ostringstream out;
    if (format == HeatmapFormat::Csv) {
        out << "query\\key";
        for (std::size_t k = 0; k < toks.size(); ++k) out << "," << csv_field(std::to_string(k) + ":" + toks[k]);
        out << "\n";
        for (std::size_t q = 0; q < m.size(); ++q) {
            out << csv_field(std::to_string(q) + ":" + toks[q]);
            for (std::size_t k = 0; k < m.size(); ++k) out << "," << (m.at(q, k) ? '1' : '0');
            out << "\n";
        }
        return out.str();
    }

    std::size_t cell = 1;
    for (const auto& t : toks) cell = std::max(cell, width(t));
    std::vector<std::string> labels;
    std::size_t label_width = 0;
    for (std::size_t q = 0; q < toks.size(); ++q) {
        labels.push_back(std::to_string(q) + " " + toks[q]);
        label_width = std::max(label_width, width(labels.back()));
    }
    out << std::string(label_width, ' ');
    for (const auto& t : toks) out << " " << pad(t, cell);
    out << "\n";
    for (std::size_t q = 0; q < m.size(); ++q) {
        out << pad(labels[q], label_width);
        for (std::size_t k = 0; k < m.size(); ++k) out << " " << pad(m.at(q, k) ? "█" : "·", cell);
        out << "\n";
    }
    return out.str();
}

std::string render_heatmap(Selector sel, std::string_view input, HeatmapFormat format) {
    const auto seq = Sequence::from_string(input);
    return render_heatmap(evaluate(sel, seq), seq, format);
}

}  // namespace rasp::viz
