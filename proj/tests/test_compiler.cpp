#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "rasp/compiler.hpp"
#include "rasp/error.hpp"
#include "rasp/eval.hpp"
#include "rasp/stdlib.hpp"

using namespace rasp;
using namespace rasp::compiler;

namespace {

// Independent layer count: recursive over operands, memoised.
struct DepthOracle {
    std::map<NodeId, int> memo;

    int operator()(NodeId id) {
        if (auto it = memo.find(id); it != memo.end()) return it->second;
        const Node& n = node_at(id);
        int d = 0;
        for (NodeId op : n.operands) d = std::max(d, (*this)(op));
        if (n.kind == NodeKind::Aggregate) d += 1;
        memo[id] = d;
        return d;
    }
};

std::set<NodeId> reachable(NodeId root) {
    std::set<NodeId> seen;
    std::function<void(NodeId)> walk = [&](NodeId id) {
        if (!seen.insert(id).second) return;
        for (NodeId op : node_at(id).operands) walk(op);
    };
    walk(root);
    return seen;
}

// Heads per layer derived from the oracle: distinct selectors per depth.
std::vector<int> oracle_heads(SOp root) {
    DepthOracle depth;
    std::map<int, std::set<NodeId>> by_layer;
    for (NodeId id : reachable(root.id())) {
        const Node& n = node_at(id);
        if (n.kind == NodeKind::Aggregate) by_layer[depth(id)].insert(n.operands[0]);
    }
    const int layers = depth(root.id());
    std::vector<int> out(static_cast<std::size_t>(layers), 0);
    for (const auto& [layer, sels] : by_layer) out[static_cast<std::size_t>(layer - 1)] = static_cast<int>(sels.size());
    return out;
}

SOp task_root(const char* name) { return stdlib::task_sop(stdlib::task(name)); }

CompileOptions options_for(const char* name) {
    const auto& t = stdlib::task(name);
    return CompileOptions{t.needs_select_best, &stdlib::Library::standard(Extensions{t.needs_select_best}).names()};
}

}  // namespace

TEST_CASE("extract_dag collects reachable nodes in topological order") {
    const SOp reverse = task_root("reverse");
    const Dag dag = extract_dag(reverse);
    CHECK(dag.root == reverse.id());
    CHECK(std::is_sorted(dag.nodes.begin(), dag.nodes.end()));
    const auto expected = reachable(reverse.id());
    CHECK(std::set<NodeId>(dag.nodes.begin(), dag.nodes.end()) == expected);
    CHECK(dag.aggregates().size() == 2);
    for (NodeId id : dag.nodes) {
        for (NodeId op : node_at(id).operands) CHECK(op < id);
    }
    CHECK(extract_dag(build::tokens()).aggregates().empty());
    CHECK(extract_dag(build::tokens()).nodes.size() == 1);
}

TEST_CASE("shared selectors appear once in the DAG") {
    const auto& lib = stdlib::Library::standard();
    const Dag dag = extract_dag(lib.sop("shuffle_dyck2"));
    // frac_prevs is applied to four token/value pairs through one prevs selector
    std::map<NodeId, int> uses;
    for (NodeId a : dag.aggregates()) uses[node_at(a).operands[0]]++;
    CHECK(std::any_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second == 4; }));
}

TEST_CASE("architecture of every registered task matches the depth oracle") {
    for (const auto& t : stdlib::tasks()) {
        INFO(t.name);
        const SOp root = task_root(t.name.c_str());
        const auto report = compile_report(root, options_for(t.name.c_str()));
        const auto heads = oracle_heads(root);
        CHECK(report.heads_per_layer() == heads);
        CHECK(report.num_layers == static_cast<int>(heads.size()));
        CHECK(report.max_heads == (heads.empty() ? 0 : *std::max_element(heads.begin(), heads.end())));
        int total = 0;
        for (int h : heads) total += h;
        CHECK(report.total_heads == total);
    }
}

TEST_CASE("architecture counts per task") {
    const auto check = [](const char* name, int layers, std::vector<int> per_layer) {
        INFO(std::string(name));
        const auto r = compile_report(task_root(name), options_for(name));
        INFO(nlohmann::json(r.heads_per_layer()).dump());
        CHECK(r.num_layers == layers);
        CHECK(r.heads_per_layer() == per_layer);
    };
    check("reverse", 2, {1, 1});
    check("hist_bos", 1, {1});
    check("hist_nobos", 1, {2});
    check("hist2", 2, {2, 1});
    check("sort", 2, {1, 1});
    check("most_freq", 3, {2, 1, 1});
    check("dyck1", 2, {1, 1});
    check("dyck_select_best", 3, {1, 1, 1});
    // Layer 1: prefix fractions plus the length head; layer 2: the any-negative
    // head and the last-position head. Hand-derived from the program text.
    check("shuffle_dyck2", 2, {2, 2});
    const auto d3 = compile_report(task_root("dyck3"), options_for("dyck3"));
    CHECK(d3.num_layers == 4);
    CHECK(d3.max_heads == 2);
}

TEST_CASE("schedule places every node after its operands") {
    for (const auto& t : stdlib::tasks()) {
        INFO(t.name);
        const Dag dag = extract_dag(task_root(t.name.c_str()));
        const Schedule s = schedule(dag);
        // position of a node in the execution order: (layer, phase) with
        // phase 0 for heads and 1 for ffn; inputs at (0, 0), embedding ffn at (0, 1)
        std::map<NodeId, std::pair<int, int>> slot;
        for (NodeId id : dag.nodes) {
            const auto kind = node_at(id).kind;
            if (kind == NodeKind::Tokens || kind == NodeKind::Indices || kind == NodeKind::Constant) slot[id] = {0, 0};
        }
        for (std::size_t l = 0; l < s.ffn.size(); ++l) {
            for (NodeId id : s.ffn[l]) slot[id] = {static_cast<int>(l), 1};
        }
        for (const auto& layer : s.heads) {
            for (const auto& g : layer) {
                for (NodeId m : g.members) slot[m] = {g.layer, 0};
            }
        }
        DepthOracle depth;
        for (NodeId id : dag.nodes) {
            const Node& n = node_at(id);
            if (n.value_class() != ValueClass::SOp) continue;
            REQUIRE(slot.count(id));
            if (n.kind == NodeKind::Aggregate) {
                CHECK(slot[id].first == depth(id));
                // every s-op a head reads is ready before the head's layer
                for (NodeId r : reachable(id)) {
                    if (r == id || node_at(r).value_class() != ValueClass::SOp) continue;
                    CHECK(slot[r] < slot[id]);
                }
            } else {
                for (NodeId op : n.operands) CHECK(slot[op] <= slot[id]);
            }
        }
        for (const auto& layer : s.heads) {
            for (const auto& g : layer) {
                for (NodeId m : g.members) CHECK(node_at(m).operands[0] == g.selector);
            }
        }
    }
}

TEST_CASE("compilation leaves evaluation unchanged") {
    for (const auto& t : stdlib::tasks()) {
        for (const auto& g : t.goldens) {
            const SOp root = task_root(t.name.c_str());
            const auto before = evaluate(root, g.input);
            (void)compile_report(root, options_for(t.name.c_str()));
            CHECK(evaluate(root, g.input) == before);
        }
    }
}

TEST_CASE("layer count is monotone under composition") {
    const SOp base = task_root("hist_bos");
    const auto layers = [](SOp s) { return compile_report(s).num_layers; };
    const int n = layers(base);
    const auto plus = std::get<SOp>(build::elementwise(OpCode::Add, base, Atom::number(1)));
    CHECK(layers(plus) == n);
    const auto wrapped = build::aggregate(build::select(build::indices(), build::indices(), Predicate::Eq), plus);
    CHECK(layers(wrapped) == n + 1);
    const auto mixed = std::get<SOp>(build::elementwise(OpCode::Add, wrapped, task_root("reverse")));
    CHECK(layers(mixed) == std::max(n + 1, 2));
    CHECK(layers(build::tokens()) == 0);
}

TEST_CASE("report JSON and text") {
    const auto r = compile_report(task_root("reverse"), options_for("reverse"));
    const auto j = r.to_json();
    std::vector<std::string> keys;
    for (const auto& item : j.items()) keys.push_back(item.key());
    CHECK(keys == std::vector<std::string>{"layers", "num_layers", "max_heads", "total_heads", "embedding"});
    CHECK(j["layers"].size() == 2);
    CHECK(j["layers"][0]["index"] == 1);
    CHECK(j["layers"][1]["heads"][0]["selector"] == "flip");
    CHECK(j["layers"][1]["heads"][0]["values"][0] == "tokens");
    CHECK(r.to_text().rfind("2 layer(s), max 1 head(s) per layer, 2 head(s) total", 0) == 0);
}

TEST_CASE("select_best programs require the extension") {
    const SOp root = task_root("dyck_select_best");
    CHECK_THROWS_AS(compile_report(root), FeatureGateError);
    CHECK_NOTHROW(compile_report(root, CompileOptions{true, nullptr}));
}
