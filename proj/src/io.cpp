#include "qnlay/io.hpp"

#include <fstream>
#include <iostream>
#include <unordered_map>

namespace qnlay {

namespace {

const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw InputError(std::string("missing field \"") + name + "\"");
    return j.at(name);
}

int int_field(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number_integer()) throw InputError(std::string("field \"") + name + "\" must be an integer");
    return v.get<int>();
}

std::vector<VertexId> token_array(const Json& j, const char* what) {
    if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
    std::vector<VertexId> out;
    for (const auto& t : j) out.push_back(token_from_json(t));
    return out;
}

Json tokens_json(const Graph& g, std::span<const Vertex> vs) {
    Json a = Json::array();
    for (Vertex v : vs) a.push_back(g.token(v));
    return a;
}

}  // namespace

VertexId token_from_json(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw InputError("vertex tokens must be strings or integers, got " + j.dump());
}

GraphInput graph_input_from_json(const Json& j) {
    if (!j.is_object()) throw InputError("graph file must hold a JSON object");
    GraphInput in;
    if (j.contains("k")) in.k = int_field(j, "k");
    if (j.contains("script")) {
        if (!in.k) throw InputError("script form needs \"k\"");
        KTreeScript script;
        script.k = *in.k;
        const Json& steps = j.at("script");
        if (!steps.is_array()) throw InputError("\"script\" must be an array");
        for (const auto& s : steps) {
            ScriptStep step;
            step.vertex = token_from_json(field(s, "v"));
            if (s.contains("attach")) step.attach = token_array(s.at("attach"), "\"attach\"");
            script.steps.push_back(std::move(step));
        }
        in.graph = build_graph(script);
        in.script = std::move(script);
        return in;
    }
    const auto vertices = token_array(field(j, "vertices"), "\"vertices\"");
    std::vector<std::pair<VertexId, VertexId>> edges;
    const Json& ej = j.contains("edges") ? j.at("edges") : Json::array();
    if (!ej.is_array()) throw InputError("\"edges\" must be an array");
    for (const auto& e : ej) {
        if (!e.is_array() || e.size() != 2) throw InputError("each edge must be a pair, got " + e.dump());
        edges.emplace_back(token_from_json(e[0]), token_from_json(e[1]));
    }
    in.graph = Graph(vertices, edges);
    return in;
}

Json script_to_json(const KTreeScript& script) {
    Json steps = Json::array();
    for (const auto& s : script.steps) steps.push_back({{"v", s.vertex}, {"attach", s.attach}});
    return {{"k", script.k}, {"script", steps}};
}

Json graph_to_json(const Graph& g, std::optional<int> k) {
    Json edges = Json::array();
    for (const auto& e : g.edges()) edges.push_back({g.token(e.u), g.token(e.v)});
    Json j = {{"vertices", g.tokens()}, {"edges", edges}};
    if (k) j["k"] = *k;
    return j;
}

int infer_k(const Graph& g) {
    const auto rec = recognize_ktree(g, static_cast<int>(g.num_vertices()));
    if (const auto* f = std::get_if<RecognitionFailure>(&rec)) throw RecognitionError(*f);
    std::size_t k = 0;
    for (const auto& s : std::get<KTreeScript>(rec).steps) k = std::max(k, s.attach.size());
    return static_cast<int>(k);
}

int resolve_k(const GraphInput& input, std::optional<int> override_k) {
    if (override_k) return *override_k;
    if (input.k) return *input.k;
    return infer_k(input.graph);
}

Json layout_to_json(const Graph& g, const QueueLayout& layout) {
    Json queues = Json::array();
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const auto& e = g.edges()[i];
        Vertex u = e.u, v = e.v;
        if (layout.order.size() == g.num_vertices() && layout.order.position(v) < layout.order.position(u))
            std::swap(u, v);
        queues.push_back({{"u", g.token(u)}, {"v", g.token(v)}, {"q", layout.assignment.queue_of.at(i)}});
    }
    return {{"k", layout.k},
            {"order", layout.order.tokens(g)},
            {"queues", queues},
            {"num_queues", layout.assignment.queues_used()},
            {"queue_bound", layout.assignment.color_bound}};
}

QueueLayout layout_from_json(const Graph& g, const Json& j) {
    QueueLayout layout;
    layout.k = int_field(j, "k");
    const auto order = token_array(field(j, "order"), "\"order\"");
    layout.order = LinearOrder::from_tokens(g, order);

    std::unordered_map<std::uint64_t, std::size_t> edge_index;
    const auto n = static_cast<std::uint64_t>(g.num_vertices());
    for (std::size_t i = 0; i < g.edges().size(); ++i)
        edge_index.emplace(static_cast<std::uint64_t>(g.edges()[i].u) * n + static_cast<std::uint64_t>(g.edges()[i].v), i);

    layout.assignment.queue_of.assign(g.num_edges(), 0);
    const Json& queues = field(j, "queues");
    if (!queues.is_array()) throw InputError("\"queues\" must be an array");
    for (const auto& entry : queues) {
        Vertex u = g.index(token_from_json(field(entry, "u")));
        Vertex v = g.index(token_from_json(field(entry, "v")));
        if (u > v) std::swap(u, v);
        const auto it = edge_index.find(static_cast<std::uint64_t>(u) * n + static_cast<std::uint64_t>(v));
        if (it == edge_index.end()) throw InputError("layout assigns a queue to non-edge " + g.token(u) + "-" + g.token(v));
        const int q = int_field(entry, "q");
        if (q < 1) throw InputError("queue indices are 1-based");
        layout.assignment.queue_of[it->second] = q;
    }
    layout.assignment.color_bound = j.contains("queue_bound") ? int_field(j, "queue_bound") : 0;
    return layout;
}

Json partition_to_json(const Graph& g, const TreePartition& tp) {
    Json nodes = Json::array();
    for (std::size_t x = 0; x < tp.size(); ++x) {
        Json node = {{"id", x},
                     {"parent", tp.parent[x] < 0 ? Json(nullptr) : Json(tp.parent[x])},
                     {"depth", tp.depth[x]},
                     {"bag", tokens_json(g, tp.bag[x])},
                     {"parent_clique", tokens_json(g, tp.parent_clique[x])}};
        nodes.push_back(std::move(node));
    }
    return {{"root", tp.root}, {"nodes", nodes}};
}

TreePartition partition_from_json(const Graph& g, const Json& j) {
    TreePartition tp;
    tp.root = int_field(j, "root");
    const Json& nodes = field(j, "nodes");
    if (!nodes.is_array()) throw InputError("\"nodes\" must be an array");
    const std::size_t count = nodes.size();
    tp.parent.assign(count, -1);
    tp.depth.assign(count, 0);
    tp.bag.assign(count, {});
    tp.parent_clique.assign(count, {});
    for (const auto& node : nodes) {
        const int id = int_field(node, "id");
        if (id < 0 || static_cast<std::size_t>(id) >= count) throw InputError("node ids must be 0..n-1");
        const auto x = static_cast<std::size_t>(id);
        const Json& p = field(node, "parent");
        tp.parent[x] = p.is_null() ? -1 : p.get<int>();
        tp.depth[x] = int_field(node, "depth");
        for (const auto& t : token_array(field(node, "bag"), "\"bag\"")) tp.bag[x].push_back(g.index(t));
        if (node.contains("parent_clique"))
            for (const auto& t : token_array(node.at("parent_clique"), "\"parent_clique\""))
                tp.parent_clique[x].push_back(g.index(t));
    }
    return tp;
}

Json witness_to_json(const Graph& g, const RainbowWitness& w) {
    Json edges = Json::array();
    for (const auto& e : w.edges) edges.push_back({g.token(e.u), g.token(e.v)});
    return {{"size", w.size()}, {"edges", edges}};
}

namespace {

GameOutcome::Kind outcome_kind(const std::string& s) {
    for (auto kind : {GameOutcome::Kind::InProgress, GameOutcome::Kind::AliceWin, GameOutcome::Kind::CapExceeded,
                      GameOutcome::Kind::Anomaly})
        if (to_string(kind) == s) return kind;
    throw InputError("unknown outcome kind '" + s + "'");
}

}  // namespace

Json trace_to_json(const GameTrace& trace) {
    Json moves = Json::array();
    for (const auto& m : trace.moves) {
        if (m.kind == GameMove::Kind::Alice)
            moves.push_back({{"alice", {{"clique", m.clique}, {"v", m.vertex}}}, {"t_us", m.ts_us}});
        else
            moves.push_back({{"bob", {{"pos", m.pos}}}, {"t_us", m.ts_us}});
    }
    Json witness = Json::array();
    for (const auto& [u, v] : trace.outcome.witness) witness.push_back({u, v});
    Json outcome = {{"kind", to_string(trace.outcome.kind)}, {"rounds", trace.outcome.rounds}};
    if (trace.outcome.kind == GameOutcome::Kind::AliceWin) outcome["witness"] = witness;
    if (!trace.outcome.description.empty()) outcome["description"] = trace.outcome.description;
    return {{"k", trace.k}, {"initial_order", trace.initial_order}, {"moves", moves}, {"outcome", outcome}};
}

GameTrace trace_from_json(const Json& j) {
    GameTrace trace;
    trace.k = int_field(j, "k");
    trace.initial_order = token_array(field(j, "initial_order"), "\"initial_order\"");
    const Json& moves = field(j, "moves");
    if (!moves.is_array()) throw InputError("\"moves\" must be an array");
    for (const auto& mj : moves) {
        GameMove m;
        if (mj.contains("alice")) {
            const Json& a = mj.at("alice");
            m.kind = GameMove::Kind::Alice;
            m.clique = token_array(field(a, "clique"), "\"clique\"");
            if (a.contains("v")) m.vertex = token_from_json(a.at("v"));
        } else if (mj.contains("bob")) {
            m.kind = GameMove::Kind::Bob;
            m.pos = int_field(mj.at("bob"), "pos");
        } else {
            throw InputError("trace move must be an \"alice\" or \"bob\" object");
        }
        if (mj.contains("t_us") && mj.at("t_us").is_number_integer()) m.ts_us = mj.at("t_us").get<std::int64_t>();
        trace.moves.push_back(std::move(m));
    }
    if (j.contains("outcome")) {
        const Json& o = j.at("outcome");
        trace.outcome.kind = outcome_kind(field(o, "kind").get<std::string>());
        if (o.contains("rounds")) trace.outcome.rounds = int_field(o, "rounds");
        if (o.contains("witness"))
            for (const auto& e : o.at("witness")) {
                if (!e.is_array() || e.size() != 2) throw InputError("witness edges must be pairs");
                trace.outcome.witness.emplace_back(token_from_json(e[0]), token_from_json(e[1]));
            }
        if (o.contains("description")) trace.outcome.description = o.at("description").get<std::string>();
    }
    return trace;
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    if (path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace qnlay
