#pragma once

#include <optional>
#include <vector>

#include "qnlay/graph.hpp"
#include "qnlay/report.hpp"

namespace qnlay {

/// Rooted tree-partition. Nodes are numbered 0..size-1 layer by layer; node
/// vectors are indexed by node id.
struct TreePartition {
    int root = 0;
    std::vector<int> parent;                          // -1 at the root
    std::vector<int> depth;
    std::vector<std::vector<Vertex>> bag;             // sorted by token
    std::vector<std::vector<Vertex>> parent_clique;   // empty at the root

    std::size_t size() const { return bag.size(); }
};

class PartitionError : public InputError {
public:
    using InputError::InputError;
};

/// BFS layering from `root` (default: smallest token); one node per
/// connected component of each distance layer. Requires a connected graph.
/// Throws PartitionError when a layer component sees two parent nodes or
/// its parent-side neighborhood is not a clique.
TreePartition build_tree_partition(const Graph& g, int k, const std::optional<VertexId>& root = std::nullopt);

/// Checks: "partition", "tree structure", "edge locality",
/// "bags are connected (k-1)-trees", "parent clique", "parent clique size".
Report validate_tree_partition(const Graph& g, int k, const TreePartition& tp);

}  // namespace qnlay
