#include "rasp/compiler.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "rasp/error.hpp"

namespace rasp::compiler {

std::vector<NodeId> Dag::aggregates() const {
    std::vector<NodeId> out;
    for (NodeId id : nodes) {
        if (node_at(id).kind == NodeKind::Aggregate) out.push_back(id);
    }
    return out;
}

bool Dag::contains(NodeId id) const { return std::binary_search(nodes.begin(), nodes.end(), id); }

Dag extract_dag(NodeId root) {
    Dag dag{root, {}};
    std::vector<NodeId> stack{root};
    std::vector<bool> seen(node_count(), false);
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        if (seen[id]) continue;
        seen[id] = true;
        dag.nodes.push_back(id);
        for (NodeId op : node_at(id).operands) stack.push_back(op);
    }
    std::sort(dag.nodes.begin(), dag.nodes.end());
    return dag;
}

Schedule schedule(const Dag& dag) {
    Schedule s;
    int layers = 0;
    for (NodeId id : dag.nodes) {
        const Node& n = node_at(id);
        int d = 0;
        for (NodeId op : n.operands) d = std::max(d, s.depth.at(op));
        if (n.kind == NodeKind::Aggregate) {
            ++d;
            layers = std::max(layers, d);
        }
        s.depth.emplace(id, d);
    }

    s.heads.resize(static_cast<std::size_t>(layers));
    s.ffn.resize(static_cast<std::size_t>(layers) + 1);
    std::map<std::pair<int, NodeId>, std::size_t> group_index;
    for (NodeId id : dag.nodes) {
        const Node& n = node_at(id);
        const int d = s.depth.at(id);
        if (n.kind == NodeKind::Aggregate) {
            auto& layer = s.heads[static_cast<std::size_t>(d - 1)];
            const NodeId sel = n.operands[0];
            auto [it, inserted] = group_index.try_emplace({d, sel}, layer.size());
            if (inserted) layer.push_back(HeadGroup{sel, d, {}});
            layer[it->second].members.push_back(id);
        } else if (n.kind == NodeKind::Elementwise || n.kind == NodeKind::Ternary) {
            s.ffn[static_cast<std::size_t>(d)].push_back(id);
        }
    }
    return s;
}

std::vector<int> ArchReport::heads_per_layer() const {
    std::vector<int> out;
    for (const auto& l : layers) out.push_back(static_cast<int>(l.heads.size()));
    return out;
}

nlohmann::ordered_json ArchReport::to_json() const {
    nlohmann::ordered_json j;
    j["layers"] = nlohmann::ordered_json::array();
    for (const auto& l : layers) {
        nlohmann::ordered_json lj;
        lj["index"] = l.index;
        lj["heads"] = nlohmann::ordered_json::array();
        for (const auto& h : l.heads) {
            nlohmann::ordered_json hj;
            hj["selector"] = h.selector;
            hj["values"] = h.values;
            lj["heads"].push_back(std::move(hj));
        }
        lj["ffn"] = l.ffn;
        j["layers"].push_back(std::move(lj));
    }
    j["num_layers"] = num_layers;
    j["max_heads"] = max_heads;
    j["total_heads"] = total_heads;
    j["embedding"] = embedding;
    return j;
}

std::string ArchReport::to_text() const {
    std::ostringstream out;
    out << num_layers << " layer(s), max " << max_heads << " head(s) per layer, " << total_heads
        << " head(s) total\n";
    for (const auto& l : layers) {
        out << "layer " << l.index << ": " << l.heads.size() << " head(s)\n";
        for (const auto& h : l.heads) {
            out << "  head " << h.selector << " -> ";
            for (std::size_t i = 0; i < h.values.size(); ++i) out << (i ? ", " : "") << h.values[i];
            out << "\n";
        }
        if (!l.ffn.empty()) out << "  ffn: " << l.ffn.size() << " op(s)\n";
    }
    return out.str();
}

ArchReport compile_report(SOp root, const CompileOptions& options) {
    const Dag dag = extract_dag(root);
    if (!options.select_best_enabled) {
        for (NodeId id : dag.nodes) {
            const auto kind = node_at(id).kind;
            if (kind == NodeKind::Score || kind == NodeKind::SelectBest) {
                throw FeatureGateError("program uses select_best; enable the select_best extension to compile it");
            }
        }
    }
    const Schedule s = schedule(dag);
    const NameTable* names = options.names;

    ArchReport r;
    for (NodeId id : s.ffn[0]) r.embedding.push_back(node_label(id, names));
    for (int L = 1; L <= s.num_layers(); ++L) {
        LayerReport layer{L, {}, {}};
        for (const auto& g : s.heads[static_cast<std::size_t>(L - 1)]) {
            HeadReport h{g.selector, node_label(g.selector, names), g.members, {}};
            for (NodeId m : g.members) h.values.push_back(node_label(node_at(m).operands[1], names));
            layer.heads.push_back(std::move(h));
        }
        for (NodeId id : s.ffn[static_cast<std::size_t>(L)]) layer.ffn.push_back(node_label(id, names));
        r.max_heads = std::max(r.max_heads, static_cast<int>(layer.heads.size()));
        r.total_heads += static_cast<int>(layer.heads.size());
        r.layers.push_back(std::move(layer));
    }
    r.num_layers = s.num_layers();
    return r;
}

}  // namespace rasp::compiler
