#include "qnlay/analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace qnlay {

std::vector<std::size_t> longest_nested_chain(std::span<const Arc> arcs) {
    std::vector<std::size_t> idx(arcs.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (arcs[a].left != arcs[b].left) return arcs[a].left < arcs[b].left;
        return arcs[a].right < arcs[b].right;
    });

    // Longest strictly decreasing subsequence of right endpoints, computed as
    // a strictly increasing subsequence of -right.
    std::vector<int> tail_value;
    std::vector<std::size_t> tail_index;
    std::vector<std::ptrdiff_t> pred(arcs.size(), -1);
    for (std::size_t i : idx) {
        const int value = -arcs[i].right;
        const auto slot = static_cast<std::size_t>(
            std::lower_bound(tail_value.begin(), tail_value.end(), value) - tail_value.begin());
        if (slot > 0) pred[i] = static_cast<std::ptrdiff_t>(tail_index[slot - 1]);
        if (slot == tail_value.size()) {
            tail_value.push_back(value);
            tail_index.push_back(i);
        } else {
            tail_value[slot] = value;
            tail_index[slot] = i;
        }
    }
    std::vector<std::size_t> chain;
    if (tail_index.empty()) return chain;
    for (auto c = static_cast<std::ptrdiff_t>(tail_index.back()); c >= 0; c = pred[static_cast<std::size_t>(c)])
        chain.push_back(static_cast<std::size_t>(c));
    std::reverse(chain.begin(), chain.end());
    return chain;
}

RainbowWitness max_rainbow(const LinearOrder& order, std::span<const Edge> edges) {
    const auto arcs = arcs_of(order, edges);
    RainbowWitness w;
    for (std::size_t i : longest_nested_chain(arcs)) w.edges.push_back(edges[i]);
    return w;
}

bool is_rainbow(const LinearOrder& order, std::span<const Edge> edges) {
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (!strictly_nests(arc_of(order, edges[i - 1]), arc_of(order, edges[i]))) return false;
    return true;
}

std::optional<NestedPair> find_nested_pair(const LinearOrder& order, std::span<const Edge> edges) {
    const auto arcs = arcs_of(order, edges);
    const auto chain = longest_nested_chain(arcs);
    if (chain.size() < 2) return std::nullopt;
    return NestedPair{edges[chain[0]], edges[chain[1]]};
}

Report validate_queue_layout(const Graph& g, const QueueLayout& layout, bool strict) {
    Report report;
    const auto& edges = g.edges();
    const auto& queue_of = layout.assignment.queue_of;

    bool covered = layout.order.size() == g.num_vertices() && queue_of.size() == edges.size();
    std::string cover_witness;
    if (!covered) {
        cover_witness = "order has " + std::to_string(layout.order.size()) + " vertices, assignment has " +
                        std::to_string(queue_of.size()) + " edges; graph has " +
                        std::to_string(g.num_vertices()) + "/" + std::to_string(edges.size());
    } else {
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (queue_of[i] < 1) {
                covered = false;
                cover_witness = "edge " + g.describe_edge(edges[i]) + " has no queue";
                break;
            }
    }
    report.record("layout covers graph", covered, cover_witness);
    if (!covered) return report;

    std::map<int, std::vector<Edge>> by_queue;
    for (std::size_t i = 0; i < edges.size(); ++i) by_queue[queue_of[i]].push_back(edges[i]);

    std::string nest_witness;
    for (const auto& [q, list] : by_queue)
        if (auto pair = find_nested_pair(layout.order, list)) {
            nest_witness = "queue " + std::to_string(q) + ": " + g.describe_edge(pair->outer) + " nests " +
                           g.describe_edge(pair->inner);
            break;
        }
    report.record("queues nesting-free", nest_witness.empty(), nest_witness);

    const auto used = static_cast<std::int64_t>(by_queue.size());
    const auto bound = queue_bound(layout.k);
    report.record("queue count", used <= bound,
                  std::to_string(used) + " queues used, bound 2^" + std::to_string(layout.k) + "-1 = " +
                      std::to_string(bound));

    if (strict) {
        std::string witness;
        std::map<std::pair<Vertex, int>, Edge> seen;
        for (std::size_t i = 0; i < edges.size() && witness.empty(); ++i) {
            const auto& e = edges[i];
            const Vertex right = layout.order.before(e.u, e.v) ? e.v : e.u;
            auto [it, inserted] = seen.emplace(std::pair{right, queue_of[i]}, e);
            if (!inserted)
                witness = "vertex " + g.token(right) + ": " + g.describe_edge(it->second) + " and " +
                          g.describe_edge(e) + " share queue " + std::to_string(queue_of[i]);
        }
        report.record("right endpoints distinct", witness.empty(), witness);
    }
    return report;
}

namespace {

class ExactSearch {
public:
    ExactSearch(const Graph& g, int incumbent, int lower_bound)
        : g_(g), incumbent_(incumbent), lower_bound_(lower_bound) {
        const std::size_t n = g.num_vertices();
        pos_.assign(n, -1);
        best_left_.assign(n, 0);
        placed_.reserve(n);
    }

    void run(bool fix_first) {
        if (fix_first && g_.num_vertices() > 0) {
            place(0, 0);
            return;
        }
        descend(0);
    }

    int incumbent() const { return incumbent_; }
    const std::vector<Vertex>& best() const { return best_; }

private:
    void descend(int current) {
        if (placed_.size() == g_.num_vertices()) {
            if (current < incumbent_) {
                incumbent_ = current;
                best_ = placed_;
            }
            return;
        }
        for (Vertex v = 0; v < static_cast<Vertex>(g_.num_vertices()); ++v) {
            if (incumbent_ <= lower_bound_) return;
            if (pos_[static_cast<std::size_t>(v)] < 0) place(v, current);
        }
    }

    // Appends v on the right. Every edge from v to a placed vertex has v as
    // right endpoint, so its depth is 1 + the deepest placed edge starting
    // strictly right of its left endpoint; nesting among placed edges is final.
    void place(Vertex v, int current) {
        const int t = static_cast<int>(placed_.size());
        std::vector<std::pair<int, int>> updates;  // (left position, depth)
        int next = current;
        for (Vertex u : g_.neighbors(v)) {
            const int pu = pos_[static_cast<std::size_t>(u)];
            if (pu < 0) continue;
            int inner = 0;
            for (int p = pu + 1; p < t; ++p) inner = std::max(inner, best_left_[static_cast<std::size_t>(p)]);
            updates.emplace_back(pu, inner + 1);
            next = std::max(next, inner + 1);
        }
        if (next >= incumbent_) return;

        std::vector<std::pair<int, int>> saved;
        for (auto [p, d] : updates) {
            saved.emplace_back(p, best_left_[static_cast<std::size_t>(p)]);
            best_left_[static_cast<std::size_t>(p)] = std::max(best_left_[static_cast<std::size_t>(p)], d);
        }
        pos_[static_cast<std::size_t>(v)] = t;
        placed_.push_back(v);

        descend(next);

        placed_.pop_back();
        pos_[static_cast<std::size_t>(v)] = -1;
        for (auto it = saved.rbegin(); it != saved.rend(); ++it) best_left_[static_cast<std::size_t>(it->first)] = it->second;
    }

    const Graph& g_;
    int incumbent_;
    int lower_bound_;
    std::vector<int> pos_;
    std::vector<int> best_left_;
    std::vector<Vertex> placed_;
    std::vector<Vertex> best_;
};

}  // namespace

ExactQueueNumber exact_queue_number(const Graph& g, std::size_t vertex_cap) {
    const std::size_t n = g.num_vertices();
    if (n > vertex_cap)
        throw InputError("exact queue number: " + std::to_string(n) + " vertices exceed the cap of " +
                         std::to_string(vertex_cap));
    auto start = LinearOrder::identity(n);
    const int start_value = static_cast<int>(max_rainbow(start, g.edges()).size());
    ExactQueueNumber result{start_value, start};
    if (g.num_edges() == 0) return result;

    ExactSearch search(g, start_value, 1);
    const bool complete = g.num_edges() == n * (n - 1) / 2;
    search.run(complete);
    if (!search.best().empty()) {
        result.queue_number = search.incumbent();
        result.order = LinearOrder(search.best());
    }
    return result;
}

std::vector<int> acyclic_coloring(const KTreeScript& script) {
    const Graph g = build_graph(script);
    std::vector<int> color(g.num_vertices(), 0);
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        std::vector<int> taken;
        for (const auto& t : script.steps[i].attach) taken.push_back(color[static_cast<std::size_t>(g.index(t))]);
        int c = 1;
        while (std::find(taken.begin(), taken.end(), c) != taken.end()) ++c;
        color[static_cast<std::size_t>(g.index(script.steps[i].vertex))] = c;
    }
    return color;
}

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int root(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = root(a);
        b = root(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

// Path between a and b using only `forest` edges; closes the cycle with a-b.
std::vector<Vertex> close_cycle(std::size_t n, const std::vector<Edge>& forest, Vertex a, Vertex b) {
    std::vector<std::vector<Vertex>> adj(n);
    for (const auto& e : forest) {
        adj[static_cast<std::size_t>(e.u)].push_back(e.v);
        adj[static_cast<std::size_t>(e.v)].push_back(e.u);
    }
    std::vector<Vertex> parent(n, -1);
    std::deque<Vertex> frontier{a};
    parent[static_cast<std::size_t>(a)] = a;
    while (!frontier.empty()) {
        Vertex x = frontier.front();
        frontier.pop_front();
        for (Vertex y : adj[static_cast<std::size_t>(x)])
            if (parent[static_cast<std::size_t>(y)] < 0) {
                parent[static_cast<std::size_t>(y)] = x;
                frontier.push_back(y);
            }
    }
    std::vector<Vertex> cycle;
    for (Vertex c = b; c != a; c = parent[static_cast<std::size_t>(c)]) cycle.push_back(c);
    cycle.push_back(a);
    return cycle;
}

}  // namespace

Report verify_acyclic_coloring(const Graph& g, std::span<const int> colors) {
    Report report;
    const bool covered = colors.size() == g.num_vertices() &&
                         std::all_of(colors.begin(), colors.end(), [](int c) { return c >= 1; });
    report.record("coloring covers graph", covered, "coloring must assign a positive color to every vertex");
    if (!covered) return report;

    std::string proper_witness;
    std::map<std::pair<int, int>, std::vector<Edge>> by_pair;
    for (const auto& e : g.edges()) {
        const int a = colors[static_cast<std::size_t>(e.u)];
        const int b = colors[static_cast<std::size_t>(e.v)];
        if (a == b) {
            if (proper_witness.empty())
                proper_witness = "edge " + g.describe_edge(e) + " has both ends colored " + std::to_string(a);
            continue;
        }
        by_pair[{std::min(a, b), std::max(a, b)}].push_back(e);
    }
    report.record("proper", proper_witness.empty(), proper_witness);

    std::string forest_witness;
    for (const auto& [pair, list] : by_pair) {
        DisjointSets sets(g.num_vertices());
        std::vector<Edge> forest;
        for (const auto& e : list) {
            if (!sets.unite(e.u, e.v)) {
                forest_witness = "colors " + std::to_string(pair.first) + "," + std::to_string(pair.second) +
                                 " cycle";
                for (Vertex v : close_cycle(g.num_vertices(), forest, e.u, e.v)) forest_witness += " " + g.token(v);
                break;
            }
            forest.push_back(e);
        }
        if (!forest_witness.empty()) break;
    }
    report.record("color pairs induce forests", forest_witness.empty(), forest_witness);
    return report;
}

Report validate_track_layout(const Graph& g, const TrackAssignment& tracks) {
    Report report;
    const std::size_t n = g.num_vertices();
    std::vector<int> track_of(n, -1);
    std::vector<int> pos(n, -1);
    std::string cover_witness;
    for (std::size_t t = 0; t < tracks.tracks.size() && cover_witness.empty(); ++t)
        for (std::size_t i = 0; i < tracks.tracks[t].size(); ++i) {
            const Vertex v = tracks.tracks[t][i];
            if (v < 0 || static_cast<std::size_t>(v) >= n) {
                cover_witness = "track " + std::to_string(t) + " lists an unknown vertex";
                break;
            }
            if (track_of[static_cast<std::size_t>(v)] >= 0) {
                cover_witness = "vertex " + g.token(v) + " appears twice";
                break;
            }
            track_of[static_cast<std::size_t>(v)] = static_cast<int>(t);
            pos[static_cast<std::size_t>(v)] = static_cast<int>(i);
        }
    if (cover_witness.empty())
        for (std::size_t v = 0; v < n; ++v)
            if (track_of[v] < 0) {
                cover_witness = "vertex " + g.token(static_cast<Vertex>(v)) + " is on no track";
                break;
            }
    report.record("tracks cover vertices", cover_witness.empty(), cover_witness);
    if (!cover_witness.empty()) return report;

    std::string indep_witness;
    std::map<std::pair<int, int>, std::vector<Edge>> between;
    for (const auto& e : g.edges()) {
        Vertex a = e.u;
        Vertex b = e.v;
        int ta = track_of[static_cast<std::size_t>(a)];
        int tb = track_of[static_cast<std::size_t>(b)];
        if (ta == tb) {
            if (indep_witness.empty())
                indep_witness = "edge " + g.describe_edge(e) + " inside track " + std::to_string(ta);
            continue;
        }
        if (ta > tb) {
            std::swap(a, b);
            std::swap(ta, tb);
        }
        between[{ta, tb}].push_back(Edge{a, b});  // a on the lower-numbered track
    }
    report.record("tracks independent", indep_witness.empty(), indep_witness);

    std::string cross_witness;
    for (const auto& [pair, list] : between) {
        for (std::size_t i = 0; i < list.size() && cross_witness.empty(); ++i)
            for (std::size_t j = i + 1; j < list.size(); ++j) {
                const auto& e = list[i];
                const auto& f = list[j];
                const int first = pos[static_cast<std::size_t>(e.u)] - pos[static_cast<std::size_t>(f.u)];
                const int second = pos[static_cast<std::size_t>(e.v)] - pos[static_cast<std::size_t>(f.v)];
                if ((first < 0 && second > 0) || (first > 0 && second < 0)) {
                    cross_witness = g.token(e.u) + "-" + g.token(e.v) + " X-crosses " + g.token(f.u) + "-" +
                                    g.token(f.v);
                    break;
                }
            }
        if (!cross_witness.empty()) break;
    }
    report.record("no X-crossing", cross_witness.empty(), cross_witness);
    return report;
}

}  // namespace qnlay
