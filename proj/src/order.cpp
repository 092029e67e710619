#include "qnlay/order.hpp"

#include <algorithm>
#include <numeric>

namespace qnlay {

LinearOrder::LinearOrder(std::vector<Vertex> sequence) : sequence_(std::move(sequence)) {
    position_.assign(sequence_.size(), -1);
    for (std::size_t i = 0; i < sequence_.size(); ++i) {
        const Vertex v = sequence_[i];
        if (v < 0 || static_cast<std::size_t>(v) >= sequence_.size() || position_[static_cast<std::size_t>(v)] >= 0)
            throw InputError("linear order is not a permutation of the vertex set");
        position_[static_cast<std::size_t>(v)] = static_cast<int>(i);
    }
}

LinearOrder LinearOrder::from_tokens(const Graph& g, std::span<const VertexId> tokens) {
    if (tokens.size() != g.num_vertices())
        throw InputError("order lists " + std::to_string(tokens.size()) + " vertices, graph has " +
                         std::to_string(g.num_vertices()));
    std::vector<Vertex> seq;
    seq.reserve(tokens.size());
    for (const auto& t : tokens) seq.push_back(g.index(t));
    return LinearOrder(std::move(seq));
}

LinearOrder LinearOrder::identity(std::size_t n) {
    std::vector<Vertex> seq(n);
    std::iota(seq.begin(), seq.end(), 0);
    return LinearOrder(std::move(seq));
}

std::vector<VertexId> LinearOrder::tokens(const Graph& g) const {
    std::vector<VertexId> out;
    out.reserve(sequence_.size());
    for (Vertex v : sequence_) out.push_back(g.token(v));
    return out;
}

LinearOrder LinearOrder::reversed() const {
    std::vector<Vertex> seq(sequence_.rbegin(), sequence_.rend());
    return LinearOrder(std::move(seq));
}

Arc arc_of(const LinearOrder& order, const Edge& e) {
    const int a = order.position(e.u);
    const int b = order.position(e.v);
    return a < b ? Arc{a, b} : Arc{b, a};
}

std::vector<Arc> arcs_of(const LinearOrder& order, std::span<const Edge> edges) {
    std::vector<Arc> arcs;
    arcs.reserve(edges.size());
    for (const auto& e : edges) arcs.push_back(arc_of(order, e));
    return arcs;
}

}  // namespace qnlay
