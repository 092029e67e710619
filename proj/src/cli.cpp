#include "qnlay/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "qnlay/analysis.hpp"
#include "qnlay/game.hpp"
#include "qnlay/io.hpp"
#include "qnlay/queue_layout.hpp"
#include "qnlay/service.hpp"
#include "qnlay/tree_partition.hpp"

namespace qnlay {

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("qnlay");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* level = std::getenv("QNLAY_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

namespace {

std::vector<VertexId> split_tokens(const std::string& s) {
    std::vector<VertexId> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        if (b == std::string::npos) throw InputError("empty token in list '" + s + "'");
        out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

void emit(const std::string& path, const Json& j, std::ostream& out) {
    if (path.empty() || path == "-")
        out << j.dump(2) << '\n';
    else
        write_json_file(path, j);
}

int print_report(const Report& report, std::ostream& out) {
    out << report.summary();
    return report.passed() ? kExitOk : kExitFailed;
}

int serve_blocking(const ServiceConfig& config, const std::string& host, int port, std::ostream& out) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    GameServer server(config);
    const int bound = server.start(host, port);
    out << "listening on http://" << host << ":" << bound << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    spdlog::info("signal {}: shutting down", received);
    server.stop();
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Queue layouts of k-trees and the k-queue game", "qnlay"};
    app.require_subcommand(1);

    std::string input, output, root, layout_path, order_arg, trace_path, bob = "greedy", initial_order;
    std::string replay_path, trace_dir, static_dir, host = "127.0.0.1";
    std::optional<int> k_override;
    int k = 2, iters = 1, n = 100, limit = static_cast<int>(kDefaultExactCap), cap = 0, port = 8080;
    std::uint64_t seed = 0;
    std::size_t budget = kDefaultVertexBudget;
    bool strict = false;

    auto* layout = app.add_subcommand("layout", "Queue layout of a k-tree with at most 2^k-1 queues");
    layout->add_option("--input", input, "graph file")->required();
    layout->add_option("--root", root, "root vertex of the tree-partition");
    layout->add_option("--k", k_override, "tree-width parameter (default: from the file)");
    layout->add_option("--out", output, "layout file (default: stdout)");
    layout->add_option("--trace", trace_path, "write the top-level construction trace here");

    auto* verify = app.add_subcommand("verify", "Check a queue layout against a graph");
    verify->add_option("--graph", input, "graph file")->required();
    verify->add_option("--layout", layout_path, "layout file")->required();
    verify->add_flag("--strict", strict, "also require distinct queues per right endpoint");

    auto* rainbow = app.add_subcommand("rainbow", "Largest rainbow of a vertex order");
    rainbow->add_option("--graph", input, "graph file")->required();
    rainbow->add_option("--order", order_arg, "comma-separated vertex order")->required();

    auto* partition = app.add_subcommand("partition", "BFS tree-partition of a connected k-tree");
    partition->add_option("--input", input, "graph file")->required();
    partition->add_option("--root", root, "root vertex");
    partition->add_option("--k", k_override, "tree-width parameter");
    partition->add_option("--out", output, "partition dump (default: stdout)");

    auto* stack = app.add_subcommand("stack", "Graph G_i of the k-stack family");
    stack->add_option("--k", k, "clique size")->required();
    stack->add_option("--iters", iters, "number of stacking rounds")->required();
    stack->add_option("--budget", budget, "vertex budget");
    stack->add_option("--out", output, "graph file (default: stdout)");

    auto* gen = app.add_subcommand("gen", "Random k-tree script");
    gen->add_option("--k", k, "tree-width")->required();
    gen->add_option("--n", n, "number of vertices")->required();
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--out", output, "graph file (default: stdout)");

    auto* exact = app.add_subcommand("exact-qn", "Exact queue-number by branch and bound");
    exact->add_option("--input", input, "graph file")->required();
    exact->add_option("--limit", limit, "vertex cap");

    auto* game = app.add_subcommand("game", "The k-queue game");
    game->require_subcommand(1);
    auto* run = game->add_subcommand("run", "Play Alice against a scripted Bob");
    run->add_option("--k", k, "clique size (k >= 2)");
    run->add_option("--bob", bob, "greedy | leftmost | rightmost | random | inside | replay");
    run->add_option("--seed", seed, "seed for randomized strategies");
    run->add_option("--cap", cap, "round cap (default depends on k)");
    run->add_option("--trace", trace_path, "write the game trace here");
    run->add_option("--initial-order", initial_order, "comma-separated order of v1..v{k+1}");
    run->add_option("--replay", replay_path, "trace whose Bob moves the replay strategy repeats");
    auto* serve = game->add_subcommand("serve", "HTTP game service");
    serve->add_option("--port", port, "TCP port (0 picks a free one)");
    serve->add_option("--host", host, "bind address");
    serve->add_option("--cap", cap, "round cap per session");
    serve->add_option("--trace-dir", trace_dir, "persist finished traces here");
    serve->add_option("--static-dir", static_dir, "serve UI assets from this directory");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("qnlay");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "qnlay: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*layout) {
            const GraphInput in = graph_input_from_json(read_json_file(input));
            const int kk = resolve_k(in, k_override);
            LayoutTrace trace;
            const QueueLayout result = layout_ktree(in.graph, kk, root.empty() ? std::nullopt : std::optional(root),
                                                    trace_path.empty() ? nullptr : &trace);
            emit(output, layout_to_json(in.graph, result), out);
            if (!trace_path.empty()) {
                Json nodes = Json::array();
                for (const auto& tn : trace.node_order)
                    nodes.push_back({{"node", tn.node},
                                     {"parent", tn.parent},
                                     {"depth", tn.depth},
                                     {"bag", tn.bag},
                                     {"c_x", tn.rightmost_parent_vertex ? Json(*tn.rightmost_parent_vertex) : Json(nullptr)}});
                Json colors = Json::array();
                for (const auto& c : trace.interbag)
                    colors.push_back({{"u", c.u}, {"v", c.v}, {"color", c.color}, {"rule", c.rule}});
                write_json_file(trace_path, {{"nodes", nodes}, {"colors", colors}});
            }
            return kExitOk;
        }
        if (*verify) {
            const GraphInput in = graph_input_from_json(read_json_file(input));
            const QueueLayout l = layout_from_json(in.graph, read_json_file(layout_path));
            return print_report(validate_queue_layout(in.graph, l, strict), out);
        }
        if (*rainbow) {
            const GraphInput in = graph_input_from_json(read_json_file(input));
            const auto tokens = split_tokens(order_arg);
            const LinearOrder order = LinearOrder::from_tokens(in.graph, tokens);
            out << witness_to_json(in.graph, max_rainbow(order, in.graph.edges())).dump() << '\n';
            return kExitOk;
        }
        if (*partition) {
            const GraphInput in = graph_input_from_json(read_json_file(input));
            const int kk = resolve_k(in, k_override);
            require_ktree(in.graph, kk);
            const TreePartition tp = build_tree_partition(in.graph, kk, root.empty() ? std::nullopt : std::optional(root));
            emit(output, partition_to_json(in.graph, tp), out);
            const Report report = validate_tree_partition(in.graph, kk, tp);
            if (!report.passed()) {
                err << report.summary();
                return kExitFailed;
            }
            return kExitOk;
        }
        if (*stack) {
            const auto family = stack_family(k, iters, budget);
            emit(output, script_to_json(script_in_index_order(family.back().graph, k)), out);
            return kExitOk;
        }
        if (*gen) {
            if (n < 0) throw InputError("--n must be non-negative");
            emit(output, script_to_json(random_ktree(k, n, seed)), out);
            return kExitOk;
        }
        if (*exact) {
            if (limit < 0) throw InputError("--limit must be non-negative");
            const GraphInput in = graph_input_from_json(read_json_file(input));
            const auto result = exact_queue_number(in.graph, static_cast<std::size_t>(limit));
            out << Json{{"queue_number", result.queue_number}, {"order", result.order.tokens(in.graph)}}.dump() << '\n';
            return kExitOk;
        }
        if (*run) {
            GameConfig config;
            config.round_cap = cap;
            config.seed = seed;
            if (!initial_order.empty()) config.initial_order = split_tokens(initial_order);
            std::optional<GameTrace> replay;
            if (!replay_path.empty()) replay = trace_from_json(read_json_file(replay_path));
            auto strategy = make_bob(bob, seed, replay ? &*replay : nullptr);
            const GameTrace trace = run_game(k, *strategy, config);
            if (!trace_path.empty()) write_json_file(trace_path, trace_to_json(trace));
            Json summary = trace_to_json(trace)["outcome"];
            out << summary.dump() << '\n';
            return trace.outcome.kind == GameOutcome::Kind::AliceWin ? kExitOk : kExitFailed;
        }
        if (*serve) {
            ServiceConfig config;
            config.round_cap = cap;
            if (!trace_dir.empty()) config.trace_dir = trace_dir;
            if (!static_dir.empty()) config.static_dir = static_dir;
            return serve_blocking(config, host, port, out);
        }
    } catch (const InputError& e) {
        err << "qnlay: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "qnlay: malformed JSON: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "qnlay: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace qnlay
