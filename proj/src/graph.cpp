#include "qnlay/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

namespace qnlay {

Graph::Graph(const std::vector<VertexId>& vertices,
             const std::vector<std::pair<VertexId, VertexId>>& edges) {
    for (const auto& t : vertices) add_vertex(t);
    for (const auto& [a, b] : edges) {
        auto ia = find(a);
        auto ib = find(b);
        if (!ia || !ib) throw InputError("edge " + a + "-" + b + " has an unknown endpoint");
        add_edge(*ia, *ib);
    }
}

Vertex Graph::add_vertex(VertexId token) {
    if (index_.contains(token)) throw InputError("duplicate vertex '" + token + "'");
    const auto v = static_cast<Vertex>(tokens_.size());
    index_.emplace(token, v);
    tokens_.push_back(std::move(token));
    adjacency_.emplace_back();
    return v;
}

void Graph::add_edge(Vertex a, Vertex b) {
    const auto n = static_cast<Vertex>(tokens_.size());
    if (a < 0 || b < 0 || a >= n || b >= n) throw InputError("edge endpoint out of range");
    if (a == b) throw InputError("self-loop at '" + token(a) + "'");
    if (adjacent(a, b)) throw InputError("duplicate edge " + token(a) + "-" + token(b));
    auto insert_sorted = [](std::vector<Vertex>& list, Vertex x) {
        list.insert(std::upper_bound(list.begin(), list.end(), x), x);
    };
    insert_sorted(adjacency_[static_cast<std::size_t>(a)], b);
    insert_sorted(adjacency_[static_cast<std::size_t>(b)], a);
    edges_.push_back(Edge{std::min(a, b), std::max(a, b)});
}

std::optional<Vertex> Graph::find(std::string_view token) const {
    auto it = index_.find(VertexId(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vertex Graph::index(std::string_view token) const {
    auto v = find(token);
    if (!v) throw InputError("unknown vertex '" + std::string(token) + "'");
    return *v;
}

bool Graph::adjacent(Vertex a, Vertex b) const {
    const auto& list = adjacency_[static_cast<std::size_t>(a)];
    return std::binary_search(list.begin(), list.end(), b);
}

bool Graph::is_clique(std::span<const Vertex> members) const {
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (!adjacent(members[i], members[j])) return false;
    return true;
}

std::vector<Vertex> Graph::vertices_by_token() const {
    std::vector<Vertex> vs(num_vertices());
    std::iota(vs.begin(), vs.end(), 0);
    std::sort(vs.begin(), vs.end(), [this](Vertex a, Vertex b) { return token(a) < token(b); });
    return vs;
}

std::vector<std::vector<Vertex>> Graph::components() const {
    std::vector<std::vector<Vertex>> result;
    std::vector<char> seen(num_vertices(), 0);
    for (Vertex start : vertices_by_token()) {
        if (seen[static_cast<std::size_t>(start)]) continue;
        std::vector<Vertex> comp{start};
        seen[static_cast<std::size_t>(start)] = 1;
        for (std::size_t head = 0; head < comp.size(); ++head)
            for (Vertex w : neighbors(comp[head]))
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    comp.push_back(w);
                }
        std::sort(comp.begin(), comp.end(), [this](Vertex a, Vertex b) { return token(a) < token(b); });
        result.push_back(std::move(comp));
    }
    return result;
}

bool Graph::is_connected() const { return components().size() <= 1; }

Graph Graph::induced(std::span<const Vertex> members, std::vector<Vertex>* to_parent) const {
    Graph sub;
    std::unordered_map<Vertex, Vertex> local;
    local.reserve(members.size());
    for (Vertex v : members) local.emplace(v, sub.add_vertex(token(v)));
    for (Vertex v : members)
        for (Vertex w : neighbors(v))
            if (v < w) {
                auto it = local.find(w);
                if (it != local.end()) sub.add_edge(local.at(v), it->second);
            }
    if (to_parent) to_parent->assign(members.begin(), members.end());
    return sub;
}

bool Graph::same_as(const Graph& other) const {
    if (num_vertices() != other.num_vertices() || num_edges() != other.num_edges()) return false;
    for (const auto& t : tokens_)
        if (!other.find(t)) return false;
    for (const auto& e : edges_) {
        auto a = other.find(token(e.u));
        auto b = other.find(token(e.v));
        if (!other.adjacent(*a, *b)) return false;
    }
    return true;
}

std::string Graph::describe_edge(const Edge& e) const { return token(e.u) + "-" + token(e.v); }

CliqueRef make_clique_ref(const Graph& g, std::span<const Vertex> members) {
    CliqueRef ref;
    for (Vertex v : members) ref.members.push_back(g.token(v));
    std::sort(ref.members.begin(), ref.members.end());
    return ref;
}

Graph build_graph(const KTreeScript& script) {
    if (script.k < 0) throw InputError("k must be non-negative");
    Graph g;
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const auto& step = script.steps[i];
        if (step.attach.size() > static_cast<std::size_t>(script.k))
            throw ScriptError(i, "attach set of '" + step.vertex + "' has " +
                                     std::to_string(step.attach.size()) + " > k vertices");
        std::vector<Vertex> attach;
        for (const auto& t : step.attach) {
            auto v = g.find(t);
            if (!v) throw ScriptError(i, "attach vertex '" + t + "' does not appear in an earlier step");
            if (std::find(attach.begin(), attach.end(), *v) != attach.end())
                throw ScriptError(i, "attach vertex '" + t + "' listed twice");
            attach.push_back(*v);
        }
        if (!g.is_clique(attach)) throw ScriptError(i, "attach set of '" + step.vertex + "' is not a clique");
        if (g.find(step.vertex)) throw ScriptError(i, "vertex '" + step.vertex + "' already defined");
        const Vertex v = g.add_vertex(step.vertex);
        for (Vertex a : attach) g.add_edge(v, a);
    }
    return g;
}

EliminationOrder max_cardinality_search(const Graph& g) {
    const std::size_t n = g.num_vertices();
    std::vector<int> token_rank(n);
    {
        auto by_token = g.vertices_by_token();
        for (std::size_t i = 0; i < n; ++i) token_rank[static_cast<std::size_t>(by_token[i])] = static_cast<int>(i);
    }

    EliminationOrder result;
    result.rank.assign(n, -1);
    result.back.assign(n, {});
    std::vector<int> label(n, 0);
    // (-label, token rank, vertex): begin() is the next vertex to visit.
    std::set<std::tuple<int, int, Vertex>> queue;
    for (std::size_t v = 0; v < n; ++v) queue.emplace(0, token_rank[v], static_cast<Vertex>(v));

    while (!queue.empty()) {
        const auto [neg, tr, v] = *queue.begin();
        queue.erase(queue.begin());
        result.rank[static_cast<std::size_t>(v)] = static_cast<int>(result.order.size());
        result.order.push_back(v);
        for (Vertex w : g.neighbors(v)) {
            const auto wi = static_cast<std::size_t>(w);
            if (result.rank[wi] >= 0) continue;
            queue.erase({-label[wi], token_rank[wi], w});
            ++label[wi];
            queue.emplace(-label[wi], token_rank[wi], w);
            result.back[wi].push_back(v);
        }
    }
    return result;
}

namespace {

// Shortest x-y path avoiding every other vertex of N[v].
std::optional<std::vector<Vertex>> path_around(const Graph& g, Vertex v, Vertex x, Vertex y) {
    const std::size_t n = g.num_vertices();
    std::vector<char> blocked(n, 0);
    blocked[static_cast<std::size_t>(v)] = 1;
    for (Vertex w : g.neighbors(v)) blocked[static_cast<std::size_t>(w)] = 1;
    blocked[static_cast<std::size_t>(x)] = 0;
    blocked[static_cast<std::size_t>(y)] = 0;

    std::vector<Vertex> parent(n, -1);
    std::deque<Vertex> frontier{x};
    parent[static_cast<std::size_t>(x)] = x;
    while (!frontier.empty()) {
        Vertex a = frontier.front();
        frontier.pop_front();
        if (a == y) break;
        for (Vertex b : g.neighbors(a)) {
            const auto bi = static_cast<std::size_t>(b);
            if (blocked[bi] || parent[bi] >= 0) continue;
            parent[bi] = a;
            frontier.push_back(b);
        }
    }
    if (parent[static_cast<std::size_t>(y)] < 0) return std::nullopt;
    std::vector<Vertex> path;
    for (Vertex c = y; c != x; c = parent[static_cast<std::size_t>(c)]) path.push_back(c);
    path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

std::optional<std::vector<Vertex>> cycle_through(const Graph& g, Vertex v, Vertex x, Vertex y) {
    auto path = path_around(g, v, x, y);
    if (!path) return std::nullopt;
    std::vector<Vertex> cycle{v};
    cycle.insert(cycle.end(), path->begin(), path->end());
    return cycle;
}

std::vector<VertexId> to_tokens(const Graph& g, std::span<const Vertex> vs) {
    std::vector<VertexId> out;
    out.reserve(vs.size());
    for (Vertex v : vs) out.push_back(g.token(v));
    return out;
}

// First back-neighborhood that is not a clique, as (vertex, x, y).
std::optional<std::tuple<Vertex, Vertex, Vertex>> peo_violation(const Graph& g, const EliminationOrder& eo) {
    for (Vertex v : eo.order) {
        const auto& back = eo.back[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < back.size(); ++i)
            for (std::size_t j = i + 1; j < back.size(); ++j)
                if (!g.adjacent(back[i], back[j])) return std::tuple{v, back[i], back[j]};
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::vector<Vertex>> find_chordless_cycle(const Graph& g) {
    const auto eo = max_cardinality_search(g);
    const auto violation = peo_violation(g, eo);
    if (!violation) return std::nullopt;
    const auto [v0, x0, y0] = *violation;
    if (auto c = cycle_through(g, v0, x0, y0)) return c;
    for (Vertex v = 0; v < static_cast<Vertex>(g.num_vertices()); ++v) {
        auto nb = g.neighbors(v);
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
                if (!g.adjacent(nb[i], nb[j]))
                    if (auto c = cycle_through(g, v, nb[i], nb[j])) return c;
    }
    return std::nullopt;
}

std::string RecognitionFailure::message() const {
    if (reason == Reason::NotChordal) {
        std::string s = "chordless cycle";
        for (const auto& t : cycle) s += " " + t;
        return s;
    }
    return "step " + std::to_string(step) + " attaches '" + vertex + "' to " + std::to_string(back_degree) +
           " vertices";
}

Recognition recognize_ktree(const Graph& g, int k) {
    if (k < 0) throw InputError("k must be non-negative");
    const auto eo = max_cardinality_search(g);
    if (peo_violation(g, eo)) {
        RecognitionFailure f;
        f.reason = RecognitionFailure::Reason::NotChordal;
        if (auto c = find_chordless_cycle(g)) f.cycle = to_tokens(g, *c);
        return f;
    }
    KTreeScript script;
    script.k = k;
    for (std::size_t i = 0; i < eo.order.size(); ++i) {
        const Vertex v = eo.order[i];
        const auto& back = eo.back[static_cast<std::size_t>(v)];
        if (back.size() > static_cast<std::size_t>(k)) {
            RecognitionFailure f;
            f.reason = RecognitionFailure::Reason::BackDegreeExceedsK;
            f.step = i;
            f.vertex = g.token(v);
            f.back_degree = back.size();
            return f;
        }
        script.steps.push_back(ScriptStep{g.token(v), to_tokens(g, back)});
    }
    return script;
}

KTreeScript require_ktree(const Graph& g, int k) {
    auto r = recognize_ktree(g, k);
    if (auto* f = std::get_if<RecognitionFailure>(&r)) throw RecognitionError(*f);
    return std::get<KTreeScript>(std::move(r));
}

std::vector<std::vector<Vertex>> enumerate_cliques(const Graph& g, int size) {
    if (size < 1) throw InputError("clique size must be at least 1");
    const auto eo = max_cardinality_search(g);
    if (peo_violation(g, eo)) throw InputError("clique enumeration requires a chordal graph");

    std::vector<std::vector<Vertex>> cliques;
    const auto pick = static_cast<std::size_t>(size - 1);
    for (Vertex v : eo.order) {
        const auto& back = eo.back[static_cast<std::size_t>(v)];
        if (back.size() < pick) continue;
        // Every clique is counted once, at its last-visited member.
        std::vector<char> mask(back.size(), 0);
        std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(pick), 1);
        do {
            std::vector<Vertex> c{v};
            for (std::size_t i = 0; i < back.size(); ++i)
                if (mask[i]) c.push_back(back[i]);
            cliques.push_back(std::move(c));
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    for (auto& c : cliques)
        std::sort(c.begin(), c.end(), [&g](Vertex a, Vertex b) { return g.token(a) < g.token(b); });
    std::sort(cliques.begin(), cliques.end(), [&g](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                            [&g](Vertex x, Vertex y) { return g.token(x) < g.token(y); });
    });
    return cliques;
}

std::vector<CliqueRef> enumerate_clique_refs(const Graph& g, int size) {
    std::vector<CliqueRef> refs;
    for (const auto& c : enumerate_cliques(g, size)) refs.push_back(make_clique_ref(g, c));
    return refs;
}

namespace {

VertexId fresh_token(const Graph& g, std::size_t& counter) {
    for (;;) {
        VertexId t = "v" + std::to_string(counter++);
        if (!g.find(t)) return t;
    }
}

}  // namespace

StackResult k_stack(const Graph& g, int k) {
    if (k < 0) throw InputError("k-stack requires k >= 0");
    StackResult out{g, {}};
    out.intrinsic.resize(g.num_vertices());
    std::iota(out.intrinsic.begin(), out.intrinsic.end(), 0);
    if (k == 0) return out;  // the empty clique is not stackable
    const auto cliques = enumerate_cliques(g, k);
    std::size_t counter = g.num_vertices() + 1;
    for (const auto& c : cliques) {
        const Vertex v = out.graph.add_vertex(fresh_token(out.graph, counter));
        for (Vertex a : c) out.graph.add_edge(v, a);
    }
    return out;
}

std::vector<StackResult> stack_family(int k, int iters, std::size_t vertex_budget) {
    if (k < 1) throw InputError("stack family requires k >= 1");
    if (iters < 0) throw InputError("iteration count must be non-negative");
    Graph g0;
    for (int i = 1; i <= k + 1; ++i) {
        const Vertex v = g0.add_vertex("v" + std::to_string(i));
        for (Vertex u = 0; u < v; ++u) g0.add_edge(u, v);
    }
    if (g0.num_vertices() > vertex_budget) throw BudgetExceeded("G_0 exceeds the vertex budget");
    std::vector<StackResult> family;
    {
        std::vector<Vertex> id(g0.num_vertices());
        std::iota(id.begin(), id.end(), 0);
        family.push_back(StackResult{std::move(g0), std::move(id)});
    }
    for (int i = 1; i <= iters; ++i) {
        const Graph& prev = family.back().graph;
        const std::size_t next_size = prev.num_vertices() + enumerate_cliques(prev, k).size();
        if (next_size > vertex_budget)
            throw BudgetExceeded("G_" + std::to_string(i) + " would have " + std::to_string(next_size) +
                                 " vertices, budget is " + std::to_string(vertex_budget));
        family.push_back(k_stack(prev, k));
    }
    return family;
}

KTreeScript script_in_index_order(const Graph& g, int k) {
    KTreeScript script;
    script.k = k;
    for (Vertex v = 0; v < static_cast<Vertex>(g.num_vertices()); ++v) {
        ScriptStep step{g.token(v), {}};
        for (Vertex w : g.neighbors(v))
            if (w < v) step.attach.push_back(g.token(w));
        script.steps.push_back(std::move(step));
    }
    return script;
}

KTreeScript random_ktree(int k, int n, std::uint64_t seed) {
    if (k < 0) throw InputError("k must be non-negative");
    if (n < 0) throw InputError("n must be non-negative");
    std::mt19937_64 rng(seed);
    KTreeScript script;
    script.k = k;
    auto name = [](int i) { return "v" + std::to_string(i + 1); };

    const int clique_size = std::min(n, k + 1);
    for (int i = 0; i < clique_size; ++i) {
        ScriptStep step{name(i), {}};
        for (int j = 0; j < i; ++j) step.attach.push_back(name(j));
        script.steps.push_back(std::move(step));
    }
    if (n <= k + 1) return script;

    // All k-cliques of the current graph, as vertex numbers.
    std::vector<std::vector<int>> cliques;
    for (int drop = 0; drop <= k; ++drop) {
        std::vector<int> c;
        for (int j = 0; j <= k; ++j)
            if (j != drop) c.push_back(j);
        cliques.push_back(std::move(c));
    }
    for (int i = k + 1; i < n; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, cliques.size() - 1);
        const std::vector<int> base = cliques[pick(rng)];
        ScriptStep step{name(i), {}};
        for (int a : base) step.attach.push_back(name(a));
        script.steps.push_back(std::move(step));
        for (std::size_t drop = 0; drop < base.size(); ++drop) {
            std::vector<int> c = base;
            c[drop] = i;
            cliques.push_back(std::move(c));
        }
    }
    return script;
}

}  // namespace qnlay
