#pragma once

#include <span>
#include <string>
#include <vector>

#include "qnlay/graph.hpp"

namespace qnlay {

/// A permutation of the vertices 0..n-1 of some graph.
class LinearOrder {
public:
    LinearOrder() = default;
    /// Throws InputError unless `sequence` is a permutation of 0..size-1.
    explicit LinearOrder(std::vector<Vertex> sequence);

    static LinearOrder from_tokens(const Graph& g, std::span<const VertexId> tokens);
    static LinearOrder identity(std::size_t n);

    std::span<const Vertex> sequence() const { return sequence_; }
    int position(Vertex v) const { return position_[static_cast<std::size_t>(v)]; }
    std::size_t size() const { return sequence_.size(); }
    Vertex at(std::size_t i) const { return sequence_[i]; }

    bool before(Vertex a, Vertex b) const { return position(a) < position(b); }

    std::vector<VertexId> tokens(const Graph& g) const;
    LinearOrder reversed() const;

private:
    std::vector<Vertex> sequence_;
    std::vector<int> position_;
};

/// An edge drawn as an interval of positions, left < right.
struct Arc {
    int left = 0;
    int right = 0;
};

/// Strict nesting: `inner` lies strictly inside `outer` at both ends. Edges
/// sharing an endpoint are never nested.
constexpr bool strictly_nests(const Arc& outer, const Arc& inner) {
    return outer.left < inner.left && inner.right < outer.right;
}

constexpr bool nested(const Arc& a, const Arc& b) { return strictly_nests(a, b) || strictly_nests(b, a); }

Arc arc_of(const LinearOrder& order, const Edge& e);
std::vector<Arc> arcs_of(const LinearOrder& order, std::span<const Edge> edges);

}  // namespace qnlay
