#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace qnlay {

/// Printable vertex token, unique within a graph.
using VertexId = std::string;

/// Dense vertex index into a Graph, assigned in insertion order.
using Vertex = int;

/// An undirected edge stored with u < v (by index).
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Malformed input: bad files, invalid scripts, precondition failures on user data.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A KTreeScript invariant was violated at a particular step.
class ScriptError : public InputError {
public:
    ScriptError(std::size_t step, const std::string& what)
        : InputError("step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

/// Simple undirected graph on string tokens. Algorithms work on dense
/// indices; tokens are only consulted for ordering and I/O.
class Graph {
public:
    Graph() = default;

    /// Throws InputError on duplicate vertices, self-loops, duplicate edges
    /// or unknown endpoints.
    Graph(const std::vector<VertexId>& vertices,
          const std::vector<std::pair<VertexId, VertexId>>& edges);

    Vertex add_vertex(VertexId token);
    void add_edge(Vertex a, Vertex b);

    std::size_t num_vertices() const { return tokens_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    const VertexId& token(Vertex v) const { return tokens_[static_cast<std::size_t>(v)]; }
    const std::vector<VertexId>& tokens() const { return tokens_; }
    std::optional<Vertex> find(std::string_view token) const;
    /// Throws InputError when the token is unknown.
    Vertex index(std::string_view token) const;

    std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)]; }
    std::size_t degree(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)].size(); }
    bool adjacent(Vertex a, Vertex b) const;
    bool is_clique(std::span<const Vertex> members) const;

    /// Edges in insertion order.
    const std::vector<Edge>& edges() const { return edges_; }

    /// Vertices sorted by token (lexicographic).
    std::vector<Vertex> vertices_by_token() const;

    /// Connected components, each sorted by token; components ordered by
    /// their smallest token.
    std::vector<std::vector<Vertex>> components() const;
    bool is_connected() const;

    /// Subgraph induced by `members` (kept in the given order). When
    /// `to_parent` is given it receives the index map sub -> this.
    Graph induced(std::span<const Vertex> members, std::vector<Vertex>* to_parent = nullptr) const;

    /// Same token set and same edge set (as token pairs).
    bool same_as(const Graph& other) const;

    std::string describe_edge(const Edge& e) const;

private:
    std::vector<VertexId> tokens_;
    std::unordered_map<VertexId, Vertex> index_;
    std::vector<std::vector<Vertex>> adjacency_;  // sorted
    std::vector<Edge> edges_;
};

/// A clique named by its members' tokens, kept sorted.
struct CliqueRef {
    std::vector<VertexId> members;

    friend bool operator==(const CliqueRef&, const CliqueRef&) = default;
};

CliqueRef make_clique_ref(const Graph& g, std::span<const Vertex> members);

struct ScriptStep {
    VertexId vertex;
    std::vector<VertexId> attach;
};

/// Construction sequence of a k-tree: each step adds a vertex adjacent to a
/// clique of size at most k built earlier.
struct KTreeScript {
    int k = 0;
    std::vector<ScriptStep> steps;
};

/// Throws ScriptError with the offending step index.
Graph build_graph(const KTreeScript& script);

/// Result of maximum-cardinality search. `back[v]` holds the neighbors of v
/// visited before v, in visit order.
struct EliminationOrder {
    std::vector<Vertex> order;
    std::vector<int> rank;
    std::vector<std::vector<Vertex>> back;
};

/// Ties go to the lexicographically smallest token.
EliminationOrder max_cardinality_search(const Graph& g);

struct RecognitionFailure {
    enum class Reason { NotChordal, BackDegreeExceedsK };

    Reason reason = Reason::NotChordal;
    std::vector<VertexId> cycle;  // chordless cycle witness (NotChordal)
    std::size_t step = 0;         // offending step (BackDegreeExceedsK)
    VertexId vertex;
    std::size_t back_degree = 0;

    std::string message() const;
};

using Recognition = std::variant<KTreeScript, RecognitionFailure>;

/// Succeeds iff g is a k-tree in the sense that every vertex can be attached
/// to a clique of size at most k (components handled independently).
Recognition recognize_ktree(const Graph& g, int k);

class RecognitionError : public InputError {
public:
    explicit RecognitionError(RecognitionFailure failure)
        : InputError("not a k-tree: " + failure.message()), failure_(std::move(failure)) {}

    const RecognitionFailure& failure() const { return failure_; }

private:
    RecognitionFailure failure_;
};

/// recognize_ktree that throws RecognitionError on failure.
KTreeScript require_ktree(const Graph& g, int k);

/// A chordless cycle of length >= 4 if one exists.
std::optional<std::vector<Vertex>> find_chordless_cycle(const Graph& g);

/// All cliques with exactly `size` members, sorted lexicographically by
/// sorted member tokens. Throws InputError on non-chordal input.
std::vector<std::vector<Vertex>> enumerate_cliques(const Graph& g, int size);
std::vector<CliqueRef> enumerate_clique_refs(const Graph& g, int size);

struct StackResult {
    Graph graph;
    /// intrinsic[v] is the vertex of `graph` that copies input vertex v.
    std::vector<Vertex> intrinsic;
};

/// Stacks one new vertex on every k-clique. k = 0 leaves g unchanged.
StackResult k_stack(const Graph& g, int k);

class BudgetExceeded : public InputError {
public:
    using InputError::InputError;
};

inline constexpr std::size_t kDefaultVertexBudget = 200000;

/// G_0 = K_{k+1}, G_i = k_stack(G_{i-1}). Element i holds G_i and the
/// intrinsic-copy map of G_{i-1} inside it (identity for G_0).
std::vector<StackResult> stack_family(int k, int iters, std::size_t vertex_budget = kDefaultVertexBudget);

/// Script whose steps follow vertex index order, attaching each vertex to
/// its lower-indexed neighbors. Valid for graphs grown by stacking.
KTreeScript script_in_index_order(const Graph& g, int k);

/// Random k-tree on n vertices: a (k+1)-clique, then each vertex stacked on
/// a uniformly chosen k-clique. Deterministic for fixed arguments.
KTreeScript random_ktree(int k, int n, std::uint64_t seed);

}  // namespace qnlay
