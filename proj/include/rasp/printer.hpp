#pragma once

#include <optional>
#include <string>
#include <unordered_map>

#include "rasp/graph.hpp"

namespace rasp {

/// Human-readable names for DAG nodes, gathered while lowering. A name bound
/// at top level replaces one bound inside a function body; otherwise the first
/// name wins.
class NameTable {
public:
    void bind(NodeId id, const std::string& name, bool top_level);
    [[nodiscard]] std::optional<std::string> name(NodeId id) const;

private:
    struct Entry {
        std::string name;
        bool top_level = false;
    };
    std::unordered_map<NodeId, Entry> names_;
};

/// RASP-like source text for a node. Named operands print as their name;
/// the root itself is expanded unless `expand_root` is false.
std::string node_text(NodeId id, const NameTable* names = nullptr, bool expand_root = true);

/// Name if one is bound, else the expanded text.
std::string node_label(NodeId id, const NameTable* names);

std::string atom_literal(const Atom& a);

}  // namespace rasp
