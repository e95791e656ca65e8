#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "rasp/error.hpp"
#include "rasp/graph.hpp"
#include "store.hpp"

namespace rasp {
namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t structural_hash(const Node& n) {
    std::size_t h = static_cast<std::size_t>(n.kind);
    h = mix(h, static_cast<std::size_t>(n.op));
    h = mix(h, static_cast<std::size_t>(n.predicate));
    h = mix(h, n.constant.hash());
    for (auto id : n.operands) h = mix(h, id);
    for (const auto& a : n.table) h = mix(h, a.hash());
    return h;
}

bool structurally_equal(const Node& a, const Node& b) {
    return a.kind == b.kind && a.op == b.op && a.predicate == b.predicate && a.constant == b.constant &&
           a.operands == b.operands && a.table == b.table;
}

class NodeStore {
public:
    NodeId intern(Node candidate) {
        const std::size_t h = structural_hash(candidate);
        std::unique_lock lock(mutex_);
        auto [lo, hi] = index_.equal_range(h);
        for (auto it = lo; it != hi; ++it) {
            if (structurally_equal(nodes_[it->second], candidate)) return it->second;
        }
        const auto id = static_cast<NodeId>(nodes_.size());
        candidate.id = id;
        nodes_.push_back(std::move(candidate));
        index_.emplace(h, id);
        return id;
    }

    const Node& at(NodeId id) const {
        std::shared_lock lock(mutex_);
        if (id >= nodes_.size()) throw Error("unknown node id " + std::to_string(id));
        return nodes_[id];
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return nodes_.size();
    }

    void annotate(NodeId id, Annotation a) {
        std::unique_lock lock(mutex_);
        annotations_.try_emplace(id, std::move(a));
    }

    std::optional<Annotation> annotation(NodeId id) const {
        std::shared_lock lock(mutex_);
        auto it = annotations_.find(id);
        if (it == annotations_.end()) return std::nullopt;
        return it->second;
    }

private:
    mutable std::shared_mutex mutex_;
    std::deque<Node> nodes_;
    std::unordered_multimap<std::size_t, NodeId> index_;
    std::unordered_map<NodeId, Annotation> annotations_;
};

NodeStore& store() {
    static NodeStore s;
    return s;
}

}  // namespace

namespace detail {
NodeId intern(Node n) { return store().intern(std::move(n)); }
}  // namespace detail

const Node& node_at(NodeId id) { return store().at(id); }
std::size_t node_count() { return store().size(); }
void annotate(NodeId id, Annotation a) { store().annotate(id, std::move(a)); }
std::optional<Annotation> annotation(NodeId id) { return store().annotation(id); }

ValueClass Node::value_class() const {
    switch (kind) {
        case NodeKind::Select:
        case NodeKind::SelectorAnd:
        case NodeKind::SelectorOr:
        case NodeKind::SelectorNot:
        case NodeKind::SelectBest: return ValueClass::Selector;
        case NodeKind::Score: return ValueClass::Scorer;
        default: return ValueClass::SOp;
    }
}

}  // namespace rasp
