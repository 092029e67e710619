#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qnlay/analysis.hpp"
#include "qnlay/game.hpp"
#include "qnlay/graph.hpp"
#include "qnlay/queue_layout.hpp"
#include "qnlay/tree_partition.hpp"

namespace qnlay {

using Json = nlohmann::ordered_json;

/// A graph file: script form {"k", "script": [{"v", "attach"}]} or edge-list
/// form {"vertices", "edges"} with an optional "k".
struct GraphInput {
    Graph graph;
    std::optional<int> k;
    std::optional<KTreeScript> script;
};

/// Tokens may be strings or integers (stored as decimal strings).
VertexId token_from_json(const Json& j);

GraphInput graph_input_from_json(const Json& j);
Json script_to_json(const KTreeScript& script);
Json graph_to_json(const Graph& g, std::optional<int> k = std::nullopt);

/// Smallest k for which g is a k-tree. Throws RecognitionError on
/// non-chordal input.
int infer_k(const Graph& g);

/// `override_k`, else the file's k, else infer_k.
int resolve_k(const GraphInput& input, std::optional<int> override_k = std::nullopt);

/// {"k", "order", "queues": [{"u","v","q"}], "num_queues", "queue_bound"}.
Json layout_to_json(const Graph& g, const QueueLayout& layout);
/// Edges missing from the file stay unassigned (queue 0). Throws InputError
/// on unknown vertices or non-edges.
QueueLayout layout_from_json(const Graph& g, const Json& j);

/// {"root", "nodes": [{"id","parent","depth","bag","parent_clique"}]}.
Json partition_to_json(const Graph& g, const TreePartition& tp);
TreePartition partition_from_json(const Graph& g, const Json& j);

Json witness_to_json(const Graph& g, const RainbowWitness& w);

Json trace_to_json(const GameTrace& trace);
GameTrace trace_from_json(const Json& j);

/// Throws InputError when the file is missing or not JSON.
Json read_json_file(const std::filesystem::path& path);
/// "-" writes to stdout.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace qnlay
