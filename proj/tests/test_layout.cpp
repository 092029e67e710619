#include <gtest/gtest.h>

#include <map>
#include <set>

#include "oracles.hpp"
#include "qnlay/analysis.hpp"
#include "qnlay/queue_layout.hpp"
#include "qnlay/tree_partition.hpp"

using namespace qnlay;

namespace {

Graph five_vertex_2tree() {
    return build_graph(KTreeScript{2, {{"a", {}}, {"b", {"a"}}, {"c", {"a", "b"}}, {"d", {"b", "c"}}, {"e", {"c", "d"}}}});
}

std::vector<std::string> tokens(const Graph& g, const std::vector<Vertex>& vs) {
    std::vector<std::string> out;
    for (Vertex v : vs) out.push_back(g.token(v));
    return out;
}

int queue_of(const Graph& g, const QueueLayout& l, const std::string& a, const std::string& b) {
    const Vertex x = g.index(a), y = g.index(b);
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        if ((e.u == x && e.v == y) || (e.u == y && e.v == x)) return l.assignment.queue_of[i];
    }
    return -1;
}

}  // namespace

TEST(TreePartition, FiveVertexExample) {
    const Graph g = five_vertex_2tree();
    const TreePartition tp = build_tree_partition(g, 2, std::string("a"));
    ASSERT_EQ(tp.size(), 3u);
    EXPECT_EQ(tokens(g, tp.bag[0]), (std::vector<std::string>{"a"}));
    EXPECT_EQ(tokens(g, tp.bag[1]), (std::vector<std::string>{"b", "c"}));
    EXPECT_EQ(tokens(g, tp.bag[2]), (std::vector<std::string>{"d", "e"}));
    EXPECT_EQ(tokens(g, tp.parent_clique[1]), (std::vector<std::string>{"a"}));
    EXPECT_EQ(tokens(g, tp.parent_clique[2]), (std::vector<std::string>{"b", "c"}));
    EXPECT_EQ(tp.parent, (std::vector<int>{-1, 0, 1}));
    EXPECT_EQ(tp.depth, (std::vector<int>{0, 1, 2}));
    const Report r = validate_tree_partition(g, 2, tp);
    EXPECT_TRUE(r.passed()) << r.summary();
}

TEST(TreePartition, CompleteGraph) {
    for (int k = 1; k <= 5; ++k) {
        const Graph g = oracle::complete_graph(k + 1);
        const TreePartition tp = build_tree_partition(g, k, std::string("2"));
        ASSERT_EQ(tp.size(), 2u);
        EXPECT_EQ(tokens(g, tp.bag[0]), (std::vector<std::string>{"2"}));
        EXPECT_EQ(tp.bag[1].size(), static_cast<std::size_t>(k));
        EXPECT_EQ(tokens(g, tp.parent_clique[1]), (std::vector<std::string>{"2"}));
        EXPECT_TRUE(validate_tree_partition(g, k, tp).passed());
    }
}

TEST(TreePartition, SingleVertex) {
    const Graph g = build_graph(KTreeScript{1, {{"a", {}}}});
    const TreePartition tp = build_tree_partition(g, 1);
    EXPECT_EQ(tp.size(), 1u);
    EXPECT_TRUE(validate_tree_partition(g, 1, tp).passed());
}

TEST(TreePartition, RejectsBadInput) {
    EXPECT_THROW(build_tree_partition(Graph({"a", "b"}, {}), 1), InputError);
    EXPECT_THROW(build_tree_partition(Graph(), 1), InputError);
    EXPECT_THROW(build_tree_partition(oracle::complete_graph(3), 0), InputError);
    // C_4 from vertex 1: layer {2,4} splits into two nodes that both hang
    // below {1}, and {3} then sees two parent nodes.
    EXPECT_THROW(build_tree_partition(oracle::cycle_graph(4), 2), PartitionError);
}

TEST(TreePartition, ValidatorSpotsMovedBag) {
    const Graph g = five_vertex_2tree();
    TreePartition tp = build_tree_partition(g, 2, std::string("a"));
    const Vertex d = g.index("d"), e = g.index("e");
    tp.bag[2] = {d};
    tp.bag.push_back({e});
    tp.parent.push_back(2);
    tp.depth.push_back(3);
    tp.parent_clique.push_back({d});
    const Report r = validate_tree_partition(g, 2, tp);
    EXPECT_FALSE(r.passed("edge locality"));
    const auto& w = r.find("edge locality")->witness;
    EXPECT_NE(w.find('c'), std::string::npos);
    EXPECT_NE(w.find('e'), std::string::npos);
}

TEST(TreePartition, ValidatorSpotsWrongParentClique) {
    const Graph g = five_vertex_2tree();
    TreePartition tp = build_tree_partition(g, 2, std::string("a"));
    tp.parent_clique[1] = {g.index("a"), g.index("b")};
    const Report r = validate_tree_partition(g, 2, tp);
    EXPECT_FALSE(r.passed("parent clique"));
    EXPECT_TRUE(r.passed("edge locality"));
}

TEST(TreePartition, RandomKTreesAnyRoot) {
    std::mt19937_64 rng(77);
    for (int k = 1; k <= 5; ++k)
        for (int t = 0; t < 8; ++t) {
            const int n = 1 + static_cast<int>(rng() % 400);
            const Graph g = build_graph(random_ktree(k, n, rng()));
            const VertexId root = g.token(static_cast<Vertex>(rng() % g.num_vertices()));
            const TreePartition tp = build_tree_partition(g, k, root);
            EXPECT_EQ(g.token(tp.bag[0].front()), root);
            const Report r = validate_tree_partition(g, k, tp);
            ASSERT_TRUE(r.passed()) << r.summary();
            for (std::size_t x = 1; x < tp.size(); ++x) {
                EXPECT_LE(tp.parent_clique[x].size(), static_cast<std::size_t>(k));
                for (Vertex u : tp.parent_clique[x]) {
                    bool has_neighbor = false;
                    for (Vertex w : g.neighbors(u))
                        has_neighbor |= std::find(tp.bag[x].begin(), tp.bag[x].end(), w) != tp.bag[x].end();
                    EXPECT_TRUE(has_neighbor);
                }
            }
        }
}

TEST(InterbagColor, Rule) {
    EXPECT_EQ(interbag_color(true, std::nullopt, 3), 7);
    EXPECT_EQ(interbag_color(false, 2, 3), 5);
    EXPECT_EQ(interbag_color(true, std::nullopt, 0), 1);
    EXPECT_THROW(interbag_color(false, std::nullopt, 3), InputError);
    EXPECT_THROW(interbag_color(false, 4, 3), InputError);
}

TEST(LayoutKTree, Path) {
    const Graph g = build_graph(KTreeScript{1, {{"a", {}}, {"b", {"a"}}, {"c", {"b"}}}});
    const QueueLayout l = layout_ktree(g, 1);
    EXPECT_EQ(l.order.tokens(g), (std::vector<VertexId>{"a", "b", "c"}));
    EXPECT_EQ(l.assignment.queue_of, (std::vector<int>{1, 1}));
    EXPECT_EQ(l.assignment.queues_used(), 1);
}

TEST(LayoutKTree, Triangle) {
    const Graph g = build_graph(KTreeScript{2, {{"a", {}}, {"b", {"a"}}, {"c", {"a", "b"}}}});
    LayoutTrace trace;
    const QueueLayout l = layout_ktree(g, 2, std::nullopt, &trace);
    EXPECT_EQ(l.order.tokens(g), (std::vector<VertexId>{"a", "b", "c"}));
    EXPECT_EQ(queue_of(g, l, "b", "c"), 1);
    EXPECT_EQ(queue_of(g, l, "a", "b"), 3);
    EXPECT_EQ(queue_of(g, l, "a", "c"), 3);
    EXPECT_TRUE(validate_queue_layout(g, l, true).passed());
    ASSERT_EQ(trace.node_order.size(), 2u);
    EXPECT_EQ(trace.node_order[1].bag, (std::vector<VertexId>{"b", "c"}));
    EXPECT_EQ(trace.node_order[1].rightmost_parent_vertex, std::optional<VertexId>("a"));
    int cx_rules = 0;
    for (const auto& c : trace.interbag) cx_rules += c.rule == "u=c_x";
    EXPECT_EQ(cx_rules, 2);
}

TEST(LayoutKTree, Random3TreeUsesAtMostSevenQueues) {
    const Graph g = build_graph(random_ktree(3, 500, 12));
    const QueueLayout l = layout_ktree(g, 3);
    EXPECT_LE(l.assignment.queues_used(), 7);
    EXPECT_EQ(l.assignment.color_bound, 7);
    EXPECT_TRUE(validate_queue_layout(g, l, true).passed());
}

TEST(LayoutKTree, RejectsNonKTrees) {
    EXPECT_THROW(layout_ktree(oracle::cycle_graph(5), 2), RecognitionError);
    EXPECT_THROW(layout_ktree(oracle::complete_graph(4), 2), RecognitionError);
}

TEST(LayoutKTree, EdgelessAndDisconnected) {
    const Graph empty({"b", "a"}, {});
    const QueueLayout l0 = layout_ktree(empty, 0);
    EXPECT_EQ(l0.order.tokens(empty), (std::vector<VertexId>{"a", "b"}));

    // Two triangles and an isolated vertex: components side by side.
    const Graph g({"z", "x", "y", "p", "q", "r", "m"},
                  {{"x", "y"}, {"x", "z"}, {"y", "z"}, {"p", "q"}, {"q", "r"}, {"p", "r"}});
    const QueueLayout l = layout_ktree(g, 2);
    EXPECT_EQ(l.order.tokens(g), (std::vector<VertexId>{"m", "p", "q", "r", "x", "y", "z"}));
    EXPECT_TRUE(validate_queue_layout(g, l, true).passed());
    EXPECT_EQ(l.assignment.queues_used(), 2);  // queues 1 and 3 shared by both triangles
}

TEST(LayoutKTree, RootOverride) {
    const Graph g = five_vertex_2tree();
    const QueueLayout l = layout_ktree(g, 2, std::string("e"));
    EXPECT_EQ(l.order.at(0), g.index("e"));
    EXPECT_TRUE(validate_queue_layout(g, l, true).passed());
    EXPECT_THROW(layout_ktree(g, 2, std::string("nope")), InputError);
}

TEST(LayoutKTree, RandomKTreesAreValid) {
    std::mt19937_64 rng(99);
    for (int k = 1; k <= 5; ++k)
        for (int t = 0; t < 6; ++t) {
            const int n = 1 + static_cast<int>(rng() % 2000);
            const Graph g = build_graph(random_ktree(k, n, rng()));
            const QueueLayout l = layout_ktree(g, k);
            const Report r = validate_queue_layout(g, l, true);
            ASSERT_TRUE(r.passed()) << r.summary();
            EXPECT_LE(static_cast<std::int64_t>(max_rainbow(l.order, g.edges()).size()), queue_bound(k));
            for (int q : l.assignment.queue_of) {
                EXPECT_GE(q, 1);
                EXPECT_LE(q, queue_bound(k));
            }
        }
}

TEST(LayoutKTree, NestedInterbagEdgesShareTheLeftBag) {
    std::mt19937_64 rng(4);
    for (int k = 2; k <= 4; ++k)
        for (int t = 0; t < 10; ++t) {
            const Graph g = build_graph(random_ktree(k, 8 + static_cast<int>(rng() % 25), rng()));
            const QueueLayout l = layout_ktree(g, k);
            const TreePartition tp = build_tree_partition(g, k);
            std::vector<int> node_of(g.num_vertices());
            for (std::size_t x = 0; x < tp.size(); ++x)
                for (Vertex v : tp.bag[x]) node_of[static_cast<std::size_t>(v)] = static_cast<int>(x);
            std::vector<Arc> inter;
            std::vector<int> left_bag;
            for (const auto& e : g.edges()) {
                if (node_of[static_cast<std::size_t>(e.u)] == node_of[static_cast<std::size_t>(e.v)]) continue;
                const Arc a = arc_of(l.order, e);
                inter.push_back(a);
                left_bag.push_back(node_of[static_cast<std::size_t>(l.order.at(static_cast<std::size_t>(a.left)))]);
            }
            for (std::size_t i = 0; i < inter.size(); ++i)
                for (std::size_t j = 0; j < inter.size(); ++j)
                    if (strictly_nests(inter[i], inter[j])) EXPECT_EQ(left_bag[i], left_bag[j]);
        }
}

TEST(LayoutKTree, ExactQueueNumberNeverExceedsLayout) {
    std::mt19937_64 rng(21);
    for (int k = 1; k <= 4; ++k)
        for (int t = 0; t < 6; ++t) {
            const Graph g = build_graph(random_ktree(k, 2 + static_cast<int>(rng() % 9), rng()));
            const QueueLayout l = layout_ktree(g, k);
            EXPECT_LE(exact_queue_number(g).queue_number, l.assignment.queues_used());
        }
}

TEST(Bounds, Formulas) {
    EXPECT_EQ(queue_bound(0), 0);
    EXPECT_EQ(queue_bound(2), 3);
    EXPECT_EQ(queue_bound(3), 7);
    EXPECT_EQ(track_bound(1), 4);
    EXPECT_EQ(track_bound(2), 108);
    for (int k = 0; k <= 10; ++k) EXPECT_EQ(track_bound(k), track_bound_from(k + 1, queue_bound(k)));
    // (k+1)(2^{k+1}-2)^k computed independently with repeated multiplication.
    for (int k = 0; k <= 12; ++k) {
        BigInt expect = k + 1;
        for (int i = 0; i < k; ++i) expect *= (BigInt(1) << (k + 1)) - 2;
        EXPECT_EQ(track_bound(k), expect);
    }
    EXPECT_THROW(queue_bound(-1), InputError);
    EXPECT_THROW(track_bound_from(0, 1), InputError);
}
