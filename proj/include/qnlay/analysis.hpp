#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qnlay/graph.hpp"
#include "qnlay/order.hpp"
#include "qnlay/queue_layout.hpp"
#include "qnlay/report.hpp"

namespace qnlay {

/// Pairwise nested edges a_1b_1, ..., a_sb_s with
/// a_1 < ... < a_s < b_s < ... < b_1, outermost first.
struct RainbowWitness {
    std::vector<Edge> edges;

    std::size_t size() const { return edges.size(); }
};

/// Longest chain of strictly nested arcs, as indices into `arcs`, outermost
/// first. O(m log m).
std::vector<std::size_t> longest_nested_chain(std::span<const Arc> arcs);

RainbowWitness max_rainbow(const LinearOrder& order, std::span<const Edge> edges);

/// True if `edges` (in the given sequence) form a rainbow in `order`.
bool is_rainbow(const LinearOrder& order, std::span<const Edge> edges);

struct NestedPair {
    Edge outer;
    Edge inner;
};

/// std::nullopt if edges form a queue, else one strictly nested pair.
std::optional<NestedPair> find_nested_pair(const LinearOrder& order, std::span<const Edge> edges);

inline bool is_queue(const LinearOrder& order, std::span<const Edge> edges) {
    return !find_nested_pair(order, edges).has_value();
}

/// Checks "queues nesting-free", "queue count", and when strict
/// "right endpoints distinct", plus coverage of the graph.
Report validate_queue_layout(const Graph& g, const QueueLayout& layout, bool strict);

struct ExactQueueNumber {
    int queue_number = 0;
    LinearOrder order;
};

inline constexpr std::size_t kDefaultExactCap = 12;

/// Minimum over all vertex orders of the maximum rainbow, by branch and
/// bound. Throws InputError when |V| exceeds vertex_cap.
ExactQueueNumber exact_queue_number(const Graph& g, std::size_t vertex_cap = kDefaultExactCap);

/// Greedy coloring along the script: each vertex takes the smallest color
/// absent from its attach clique. Colors are 1-based and indexed like
/// build_graph(script).
std::vector<int> acyclic_coloring(const KTreeScript& script);

/// Properness and forest-ness of every pair of color classes.
Report verify_acyclic_coloring(const Graph& g, std::span<const int> colors);

struct TrackAssignment {
    std::vector<std::vector<Vertex>> tracks;  // each track in its own order
};

/// Coverage, independence of every track, and absence of X-crossings.
Report validate_track_layout(const Graph& g, const TrackAssignment& tracks);

}  // namespace qnlay
