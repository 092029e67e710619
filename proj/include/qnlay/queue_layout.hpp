#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qnlay/graph.hpp"
#include "qnlay/order.hpp"

namespace qnlay {

/// Queue index per edge, aligned with Graph::edges(). Index 0 means
/// unassigned; assigned queues are 1-based.
struct QueueAssignment {
    std::vector<int> queue_of;
    /// Upper end of the index range the producer promises (2^k - 1 for
    /// layout_ktree, the rainbow size for queues_from_order).
    int color_bound = 0;

    /// Number of distinct queues actually used.
    int queues_used() const;
};

struct QueueLayout {
    int k = 0;
    LinearOrder order;
    QueueAssignment assignment;
};

/// Per-depth bookkeeping of one tree-partition level of layout_ktree.
struct LayoutTraceNode {
    int node = 0;     // tree-partition node id
    int parent = -1;  // parent node id, -1 at the root
    int depth = 0;
    std::vector<VertexId> bag;
    std::optional<VertexId> rightmost_parent_vertex;  // c_x
};

struct LayoutTraceColor {
    VertexId u, v;
    int color = 0;
    std::string rule;  // "intrabag", "u=c_x", "u!=c_x"
};

/// Trace of the top recursion level, for debugging and walkthroughs.
struct LayoutTrace {
    std::vector<LayoutTraceNode> node_order;
    std::vector<LayoutTraceColor> interbag;
};

/// Queue layout of a k-tree with at most 2^k - 1 queues in which edges
/// sharing a right endpoint use distinct queues. Components are placed side
/// by side and share queue indices. Throws RecognitionError if g is not a
/// k-tree. `root` overrides the start vertex of the component containing it.
QueueLayout layout_ktree(const Graph& g, int k, const std::optional<VertexId>& root = std::nullopt,
                         LayoutTrace* trace = nullptr);

/// Queue for an interbag edge uv with u in the parent bag: 2t+1 when u is the
/// rightmost vertex c_x of the parent clique, else t + color(u c_x).
int interbag_color(bool u_is_cx, std::optional<int> color_of_u_cx, int t_prev);

/// Queue of each edge = 1 + the largest queue among edges strictly nested
/// inside it. Uses exactly max-rainbow many queues.
QueueAssignment queues_from_order(const Graph& g, const LinearOrder& order);

/// 2^k - 1.
std::int64_t queue_bound(int k);

using BigInt = boost::multiprecision::cpp_int;

/// (k+1)(2^{k+1}-2)^k.
BigInt track_bound(int k);
/// c (2q)^{c-1}.
BigInt track_bound_from(int c, std::int64_t q);

}  // namespace qnlay
