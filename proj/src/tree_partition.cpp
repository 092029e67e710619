#include "qnlay/tree_partition.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace qnlay {

namespace {

std::string list_tokens(const Graph& g, std::span<const Vertex> vs) {
    std::string s = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + g.token(vs[i]);
    return s + "}";
}

}  // namespace

TreePartition build_tree_partition(const Graph& g, int k, const std::optional<VertexId>& root) {
    if (k < 1) throw InputError("tree-partition requires k >= 1");
    if (g.num_vertices() == 0) throw InputError("tree-partition of an empty graph");
    if (!g.is_connected()) throw InputError("tree-partition requires a connected graph");
    const Vertex r = root ? g.index(*root) : g.vertices_by_token().front();

    const std::size_t n = g.num_vertices();
    std::vector<int> dist(n, -1);
    std::vector<std::vector<Vertex>> layers;
    {
        std::deque<Vertex> frontier{r};
        dist[static_cast<std::size_t>(r)] = 0;
        while (!frontier.empty()) {
            const Vertex v = frontier.front();
            frontier.pop_front();
            const auto d = static_cast<std::size_t>(dist[static_cast<std::size_t>(v)]);
            if (layers.size() <= d) layers.resize(d + 1);
            layers[d].push_back(v);
            for (Vertex w : g.neighbors(v))
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = static_cast<int>(d) + 1;
                    frontier.push_back(w);
                }
        }
    }

    auto by_token = [&g](Vertex a, Vertex b) { return g.token(a) < g.token(b); };
    TreePartition tp;
    std::vector<int> node_of(n, -1);
    for (std::size_t d = 0; d < layers.size(); ++d) {
        auto layer = layers[d];
        std::sort(layer.begin(), layer.end(), by_token);
        for (Vertex start : layer) {
            if (node_of[static_cast<std::size_t>(start)] >= 0) continue;
            const int id = static_cast<int>(tp.size());
            std::vector<Vertex> comp{start};
            node_of[static_cast<std::size_t>(start)] = id;
            for (std::size_t head = 0; head < comp.size(); ++head)
                for (Vertex w : g.neighbors(comp[head]))
                    if (dist[static_cast<std::size_t>(w)] == static_cast<int>(d) &&
                        node_of[static_cast<std::size_t>(w)] < 0) {
                        node_of[static_cast<std::size_t>(w)] = id;
                        comp.push_back(w);
                    }
            std::sort(comp.begin(), comp.end(), by_token);

            int parent = -1;
            std::vector<Vertex> clique;
            if (d > 0) {
                std::set<int> parents;
                for (Vertex v : comp)
                    for (Vertex u : g.neighbors(v))
                        if (dist[static_cast<std::size_t>(u)] == static_cast<int>(d) - 1) {
                            parents.insert(node_of[static_cast<std::size_t>(u)]);
                            if (std::find(clique.begin(), clique.end(), u) == clique.end()) clique.push_back(u);
                        }
                if (parents.size() != 1)
                    throw PartitionError("bag " + list_tokens(g, comp) + " is joined to " +
                                         std::to_string(parents.size()) + " bags of the previous layer");
                parent = *parents.begin();
                std::sort(clique.begin(), clique.end(), by_token);
                if (!g.is_clique(clique))
                    throw PartitionError("parent-side neighbors " + list_tokens(g, clique) + " of bag " +
                                         list_tokens(g, comp) + " are not a clique");
            }
            tp.parent.push_back(parent);
            tp.depth.push_back(static_cast<int>(d));
            tp.bag.push_back(std::move(comp));
            tp.parent_clique.push_back(std::move(clique));
        }
    }
    tp.root = 0;
    return tp;
}

Report validate_tree_partition(const Graph& g, int k, const TreePartition& tp) {
    Report report;
    const std::size_t n = g.num_vertices();
    const std::size_t nodes = tp.size();

    std::vector<int> node_of(n, -1);
    std::string part_witness;
    if (tp.parent.size() != nodes || tp.depth.size() != nodes || tp.parent_clique.size() != nodes)
        part_witness = "node field sizes disagree";
    for (std::size_t x = 0; x < nodes && part_witness.empty(); ++x) {
        if (tp.bag[x].empty()) part_witness = "node " + std::to_string(x) + " has an empty bag";
        for (Vertex v : tp.bag[x]) {
            if (v < 0 || static_cast<std::size_t>(v) >= n) {
                part_witness = "node " + std::to_string(x) + " holds an unknown vertex";
                break;
            }
            if (node_of[static_cast<std::size_t>(v)] >= 0) {
                part_witness = "vertex " + g.token(v) + " is in two bags";
                break;
            }
            node_of[static_cast<std::size_t>(v)] = static_cast<int>(x);
        }
    }
    for (std::size_t v = 0; v < n && part_witness.empty(); ++v)
        if (node_of[v] < 0) part_witness = "vertex " + g.token(static_cast<Vertex>(v)) + " is in no bag";
    report.record("partition", part_witness.empty(), part_witness);
    if (!part_witness.empty()) return report;

    std::string tree_witness;
    if (tp.root < 0 || static_cast<std::size_t>(tp.root) >= nodes) tree_witness = "root is not a node";
    for (std::size_t x = 0; x < nodes && tree_witness.empty(); ++x) {
        const int p = tp.parent[x];
        if (static_cast<int>(x) == tp.root) {
            if (p != -1) tree_witness = "root has a parent";
            else if (tp.depth[x] != 0) tree_witness = "root depth is not 0";
        } else if (p < 0 || static_cast<std::size_t>(p) >= nodes) {
            tree_witness = "node " + std::to_string(x) + " has no valid parent";
        } else if (tp.depth[x] != tp.depth[static_cast<std::size_t>(p)] + 1) {
            tree_witness = "node " + std::to_string(x) + " depth is not parent depth + 1";
        }
    }
    report.record("tree structure", tree_witness.empty(), tree_witness);
    if (!tree_witness.empty()) return report;

    std::string local_witness;
    for (const auto& e : g.edges()) {
        const int a = node_of[static_cast<std::size_t>(e.u)];
        const int b = node_of[static_cast<std::size_t>(e.v)];
        if (a == b || tp.parent[static_cast<std::size_t>(a)] == b || tp.parent[static_cast<std::size_t>(b)] == a)
            continue;
        local_witness = "edge " + g.describe_edge(e) + " joins non-adjacent nodes " + std::to_string(a) + " and " +
                        std::to_string(b);
        break;
    }
    report.record("edge locality", local_witness.empty(), local_witness);

    std::string bag_witness;
    for (std::size_t x = 0; x < nodes && bag_witness.empty(); ++x) {
        const Graph sub = g.induced(tp.bag[x]);
        if (!sub.is_connected()) {
            bag_witness = "bag " + list_tokens(g, tp.bag[x]) + " is disconnected";
        } else if (k < 1) {
            bag_witness = "k must be at least 1";
        } else {
            auto rec = recognize_ktree(sub, k - 1);
            if (auto* f = std::get_if<RecognitionFailure>(&rec))
                bag_witness = "bag " + list_tokens(g, tp.bag[x]) + ": " + f->message();
        }
    }
    report.record("bags are connected (k-1)-trees", bag_witness.empty(), bag_witness);

    std::string clique_witness;
    std::string size_witness;
    for (std::size_t x = 0; x < nodes && clique_witness.empty(); ++x) {
        if (static_cast<int>(x) == tp.root) continue;
        const int p = tp.parent[x];
        const auto& recorded = tp.parent_clique[x];
        for (Vertex u : recorded)
            if (u < 0 || static_cast<std::size_t>(u) >= n || node_of[static_cast<std::size_t>(u)] != p) {
                clique_witness = "node " + std::to_string(x) + ": " +
                                 (u >= 0 && static_cast<std::size_t>(u) < n ? g.token(u) : std::string("?")) +
                                 " is not in the parent bag";
                break;
            }
        if (!clique_witness.empty()) break;
        std::set<Vertex> expected;
        for (Vertex v : tp.bag[x])
            for (Vertex u : g.neighbors(v))
                if (node_of[static_cast<std::size_t>(u)] == p) expected.insert(u);
        const std::set<Vertex> got(recorded.begin(), recorded.end());
        if (got != expected) {
            clique_witness = "node " + std::to_string(x) + ": recorded " + list_tokens(g, recorded) +
                             ", parent-bag neighbors are " +
                             list_tokens(g, std::vector<Vertex>(expected.begin(), expected.end()));
        } else if (!g.is_clique(recorded)) {
            clique_witness = "node " + std::to_string(x) + ": " + list_tokens(g, recorded) + " is not a clique";
        }
        if (size_witness.empty() && recorded.size() > static_cast<std::size_t>(k))
            size_witness = "node " + std::to_string(x) + " has a parent clique of size " +
                           std::to_string(recorded.size());
    }
    report.record("parent clique", clique_witness.empty(), clique_witness);
    report.record("parent clique size", size_witness.empty(), size_witness);
    return report;
}

}  // namespace qnlay
