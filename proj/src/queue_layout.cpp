#include "qnlay/queue_layout.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "qnlay/tree_partition.hpp"

namespace qnlay {

int QueueAssignment::queues_used() const {
    std::set<int> used;
    for (int q : queue_of)
        if (q > 0) used.insert(q);
    return static_cast<int>(used.size());
}

std::int64_t queue_bound(int k) {
    if (k < 0 || k > 62) throw InputError("queue_bound: k out of range");
    return (std::int64_t{1} << k) - 1;
}

BigInt track_bound_from(int c, std::int64_t q) {
    if (c < 1 || q < 0) throw InputError("track_bound_from: need c >= 1 and q >= 0");
    BigInt base = 2 * BigInt(q);
    return BigInt(c) * boost::multiprecision::pow(base, static_cast<unsigned>(c - 1));
}

BigInt track_bound(int k) {
    if (k < 0) throw InputError("track_bound: k must be non-negative");
    BigInt base = (BigInt(1) << (k + 1)) - 2;
    return BigInt(k + 1) * boost::multiprecision::pow(base, static_cast<unsigned>(k));
}

int interbag_color(bool u_is_cx, std::optional<int> color_of_u_cx, int t_prev) {
    if (u_is_cx) return 2 * t_prev + 1;
    if (!color_of_u_cx) throw InputError("interbag edge with u != c_x needs the color of u c_x");
    if (*color_of_u_cx < 1 || *color_of_u_cx > t_prev)
        throw InputError("intrabag color " + std::to_string(*color_of_u_cx) + " outside 1.." + std::to_string(t_prev));
    return *color_of_u_cx + t_prev;
}

namespace {

struct Sublayout {
    std::vector<Vertex> order;
    std::vector<int> color;  // aligned with g.edges()
};

class EdgeIndex {
public:
    explicit EdgeIndex(const Graph& g) : n_(g.num_vertices()) {
        index_.reserve(g.num_edges() * 2);
        for (std::size_t i = 0; i < g.edges().size(); ++i) index_.emplace(key(g.edges()[i].u, g.edges()[i].v), i);
    }
    std::size_t at(Vertex a, Vertex b) const { return index_.at(key(a, b)); }

private:
    std::uint64_t key(Vertex a, Vertex b) const {
        if (a > b) std::swap(a, b);
        return static_cast<std::uint64_t>(a) * n_ + static_cast<std::uint64_t>(b);
    }
    std::uint64_t n_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

Sublayout layout_any(const Graph& g, int k, std::optional<Vertex> root, LayoutTrace* trace);

Sublayout layout_connected(const Graph& g, int k, Vertex root, LayoutTrace* trace) {
    const std::size_t n = g.num_vertices();
    Sublayout out;
    out.color.assign(g.num_edges(), 0);
    if (k == 0 || n == 1) {
        if (g.num_edges() != 0) throw std::logic_error("0-tree with edges");
        out.order.push_back(root);
        if (trace) trace->node_order.push_back({0, -1, 0, {g.token(root)}, std::nullopt});
        return out;
    }

    const TreePartition tp = build_tree_partition(g, k, g.token(root));
    const int t_prev = static_cast<int>(queue_bound(k - 1));
    const EdgeIndex edge_index(g);

    std::vector<int> node_of(n, -1);
    for (std::size_t x = 0; x < tp.size(); ++x)
        for (Vertex v : tp.bag[x]) node_of[static_cast<std::size_t>(v)] = static_cast<int>(x);

    std::vector<std::vector<int>> by_depth;
    for (std::size_t x = 0; x < tp.size(); ++x) {
        const auto d = static_cast<std::size_t>(tp.depth[x]);
        if (by_depth.size() <= d) by_depth.resize(d + 1);
        by_depth[d].push_back(static_cast<int>(x));
    }

    std::vector<int> pos(n, -1);
    std::vector<int> node_pos(tp.size(), -1);
    std::vector<Vertex> rightmost(tp.size(), -1);  // c_x
    int next_node_pos = 0;

    for (std::size_t d = 0; d < by_depth.size(); ++d) {
        auto nodes = by_depth[d];
        for (int x : nodes) {
            if (x == tp.root) continue;
            Vertex c = -1;
            for (Vertex u : tp.parent_clique[static_cast<std::size_t>(x)])
                if (c < 0 || pos[static_cast<std::size_t>(u)] > pos[static_cast<std::size_t>(c)]) c = u;
            rightmost[static_cast<std::size_t>(x)] = c;
        }
        // Nodes follow their parents; siblings follow c_x; remaining ties by
        // the smallest token of the bag.
        std::sort(nodes.begin(), nodes.end(), [&](int a, int b) {
            const auto ua = static_cast<std::size_t>(a);
            const auto ub = static_cast<std::size_t>(b);
            if (d > 0) {
                const int pa = node_pos[static_cast<std::size_t>(tp.parent[ua])];
                const int pb = node_pos[static_cast<std::size_t>(tp.parent[ub])];
                if (pa != pb) return pa < pb;
                const int ca = pos[static_cast<std::size_t>(rightmost[ua])];
                const int cb = pos[static_cast<std::size_t>(rightmost[ub])];
                if (ca != cb) return ca < cb;
            }
            return g.token(tp.bag[ua].front()) < g.token(tp.bag[ub].front());
        });

        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto x = static_cast<std::size_t>(nodes[i]);
            node_pos[x] = next_node_pos++;
            if (i > 0 && d > 0) {
                const auto prev = static_cast<std::size_t>(nodes[i - 1]);
                if (node_pos[static_cast<std::size_t>(tp.parent[prev])] > node_pos[static_cast<std::size_t>(tp.parent[x])])
                    throw std::logic_error("node order is not parent-monotone");
            }

            std::vector<Vertex> to_parent;
            const Graph bag = g.induced(tp.bag[x], &to_parent);
            const auto recognized = recognize_ktree(bag, k - 1);
            if (const auto* f = std::get_if<RecognitionFailure>(&recognized))
                throw std::logic_error("bag is not a (k-1)-tree: " + f->message());
            const Sublayout sub = layout_any(bag, k - 1, std::nullopt, nullptr);
            for (Vertex local : sub.order) {
                const Vertex v = to_parent[static_cast<std::size_t>(local)];
                pos[static_cast<std::size_t>(v)] = static_cast<int>(out.order.size());
                out.order.push_back(v);
            }
            for (std::size_t e = 0; e < bag.edges().size(); ++e) {
                const auto& be = bag.edges()[e];
                out.color[edge_index.at(to_parent[static_cast<std::size_t>(be.u)],
                                        to_parent[static_cast<std::size_t>(be.v)])] = sub.color[e];
            }
            if (trace) {
                LayoutTraceNode tn{static_cast<int>(x), tp.parent[x], static_cast<int>(d), {}, std::nullopt};
                for (Vertex v : tp.bag[x]) tn.bag.push_back(g.token(v));
                if (rightmost[x] >= 0) tn.rightmost_parent_vertex = g.token(rightmost[x]);
                trace->node_order.push_back(std::move(tn));
            }
        }
    }

    for (std::size_t x = 0; x < tp.size(); ++x) {
        if (static_cast<int>(x) == tp.root) continue;
        const int parent = tp.parent[x];
        const Vertex c = rightmost[x];
        for (Vertex v : tp.bag[x])
            for (Vertex u : g.neighbors(v)) {
                if (node_of[static_cast<std::size_t>(u)] != parent) continue;
                std::optional<int> intrabag;
                if (u != c) intrabag = out.color[edge_index.at(u, c)];
                const int color = interbag_color(u == c, intrabag, t_prev);
                out.color[edge_index.at(u, v)] = color;
                if (trace) trace->interbag.push_back({g.token(u), g.token(v), color, u == c ? "u=c_x" : "u!=c_x"});
            }
    }
    if (trace)
        for (std::size_t e = 0; e < g.edges().size(); ++e) {
            const auto& ge = g.edges()[e];
            if (node_of[static_cast<std::size_t>(ge.u)] == node_of[static_cast<std::size_t>(ge.v)])
                trace->interbag.push_back({g.token(ge.u), g.token(ge.v), out.color[e], "intrabag"});
        }
    return out;
}

Sublayout layout_any(const Graph& g, int k, std::optional<Vertex> root, LayoutTrace* trace) {
    const auto comps = g.components();
    if (comps.size() == 1) return layout_connected(g, k, root ? *root : comps.front().front(), trace);

    Sublayout out;
    out.color.assign(g.num_edges(), 0);
    const EdgeIndex edge_index(g);
    for (const auto& comp : comps) {
        std::vector<Vertex> to_parent;
        const Graph sub = g.induced(comp, &to_parent);
        Vertex local_root = 0;  // comp is token-sorted, so 0 is the smallest token
        if (root)
            for (std::size_t i = 0; i < comp.size(); ++i)
                if (comp[i] == *root) local_root = static_cast<Vertex>(i);
        const Sublayout part = layout_connected(sub, k, local_root, trace);
        for (Vertex local : part.order) out.order.push_back(to_parent[static_cast<std::size_t>(local)]);
        for (std::size_t e = 0; e < sub.edges().size(); ++e) {
            const auto& se = sub.edges()[e];
            out.color[edge_index.at(to_parent[static_cast<std::size_t>(se.u)],
                                    to_parent[static_cast<std::size_t>(se.v)])] = part.color[e];
        }
    }
    return out;
}

}  // namespace

QueueLayout layout_ktree(const Graph& g, int k, const std::optional<VertexId>& root, LayoutTrace* trace) {
    require_ktree(g, k);
    std::optional<Vertex> root_vertex;
    if (root) root_vertex = g.index(*root);
    QueueLayout layout;
    layout.k = k;
    if (g.num_vertices() == 0) return layout;
    Sublayout sub = layout_any(g, k, root_vertex, trace);
    layout.order = LinearOrder(std::move(sub.order));
    layout.assignment.queue_of = std::move(sub.color);
    layout.assignment.color_bound = static_cast<int>(queue_bound(k));
    return layout;
}

QueueAssignment queues_from_order(const Graph& g, const LinearOrder& order) {
    if (order.size() != g.num_vertices()) throw InputError("order does not cover the vertex set");
    const auto arcs = arcs_of(order, g.edges());
    const std::size_t m = arcs.size();
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return arcs[a].left > arcs[b].left; });

    // Prefix-max Fenwick tree over right endpoints of arcs already inserted
    // (all of which start strictly further right).
    const std::size_t n = order.size();
    std::vector<int> tree(n + 1, 0);
    auto query = [&](int right_exclusive) {
        int best = 0;
        for (auto i = static_cast<std::size_t>(right_exclusive); i > 0; i -= i & (~i + 1)) best = std::max(best, tree[i]);
        return best;
    };
    auto insert = [&](int right, int value) {
        for (auto i = static_cast<std::size_t>(right) + 1; i <= n; i += i & (~i + 1)) tree[i] = std::max(tree[i], value);
    };

    QueueAssignment out;
    out.queue_of.assign(m, 0);
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && arcs[idx[j]].left == arcs[idx[i]].left) ++j;
        for (std::size_t t = i; t < j; ++t) out.queue_of[idx[t]] = 1 + query(arcs[idx[t]].right);
        for (std::size_t t = i; t < j; ++t) insert(arcs[idx[t]].right, out.queue_of[idx[t]]);
        i = j;
    }
    for (int q : out.queue_of) out.color_bound = std::max(out.color_bound, q);
    return out;
}

}  // namespace qnlay
