#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qnlay/analysis.hpp"
#include "qnlay/graph.hpp"
#include "qnlay/order.hpp"

namespace qnlay {

/// A move that breaks the rules of the k-queue game.
class IllegalMove : public InputError {
public:
    using InputError::InputError;
};

/// Alice's strategy reached a state it should never reach.
class GameAnomaly : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct PendingVertex {
    VertexId vertex;
    std::vector<Vertex> clique;
};

/// Position of the k-queue game. The graph holds placed vertices only; the
/// vertex Alice just introduced waits in `pending` until Bob places it.
class GameState {
public:
    GameState() = default;
    GameState(int k, std::vector<VertexId> initial_order);

    int k() const { return k_; }
    const Graph& graph() const { return graph_; }
    std::span<const Vertex> sequence() const { return sequence_; }
    int position(Vertex v) const { return position_[static_cast<std::size_t>(v)]; }
    std::size_t size() const { return sequence_.size(); }
    int round() const { return round_; }
    const std::optional<PendingVertex>& pending() const { return pending_; }
    const std::vector<VertexId>& initial_order() const { return initial_order_; }

    LinearOrder order() const { return LinearOrder(sequence_); }

    /// Alice: stack a new vertex on a k-clique. Throws IllegalMove.
    void stack(std::span<const Vertex> clique);
    void stack(const CliqueRef& clique);
    /// Bob: insert the pending vertex so that it ends up at index `pos`
    /// (0..n). Returns the new vertex. Throws IllegalMove.
    Vertex place(int pos);

    /// Same game with the order reversed.
    GameState reflected() const;

    /// Members of `clique` sorted by position; ℓ(C) is front(), r(C) back().
    std::vector<Vertex> sorted_by_position(std::span<const Vertex> clique) const;

private:
    void reindex();

    int k_ = 0;
    Graph graph_;
    std::vector<Vertex> sequence_;
    std::vector<int> position_;
    int round_ = 0;
    std::optional<PendingVertex> pending_;
    std::vector<VertexId> initial_order_;
};

/// K_{k+1} on v1..v{k+1}, ordered by token unless `initial_order` is given.
GameState new_game(int k, const std::optional<std::vector<VertexId>>& initial_order = std::nullopt);
GameState apply_alice_move(GameState state, const CliqueRef& clique);
GameState apply_bob_move(GameState state, int pos);

/// A rainbow of size >= target among placed edges, if any.
std::optional<RainbowWitness> detect_rainbow(const GameState& state, int target);

enum class AlicePhase { ForceOutside, SideAccumulate, ChainExtend, ExploitConfig };

std::string to_string(AlicePhase phase);

struct AliceDecision {
    std::vector<Vertex> clique;  // empty on anomaly
    std::string anomaly;
};

/// Alice's strategy for the k-queue game as a phase machine.
///
/// Positions are read in a normalized frame that is reflected when
/// `mirrored()` is set, so every rule below can speak of "left" and "right".
///
/// ForceOutside / SideAccumulate: stack on the target clique. When Bob goes
/// inside the level's base clique C the target becomes C - ℓ(C) + v; when he
/// goes inside that clique too it becomes (previous) - r(C) + v', strictly
/// covered by the edge ℓ(C)r(C), which is pushed on the cover chain.
/// Outside placements collect per side; 2k+1 on one side fix C_1 (mirroring
/// so that side is the right).
///
/// ChainExtend: with C_j sorted w_1 < ... < w_k and 2k+1 vertices stacked on
/// it to the right, the median becomes the next registry vertex v and the
/// target becomes {w_1, w_3, ..., w_k, v}. Any placement not right of the
/// target's rightmost vertex closes a (k+1)-rainbow. Repeated until the
/// registry holds v_1..v_{k+4}.
///
/// ExploitConfig: with e = v_1v_{k+4}, e' = v_1v_2, e'' = v_{k+3}v_{k+4}
/// and C = {v_3..v_{k+2}}, run the inside/outside rule on C again; 2k-1
/// one-sided placements force a rainbow.
class AliceController {
public:
    /// `state` must be a fresh game with k >= 2.
    explicit AliceController(const GameState& state);

    /// Reads Bob's last placement, if any, and returns the next clique.
    AliceDecision next(const GameState& state);

    AlicePhase phase() const { return phase_; }
    /// 1..4: which chain extension is collecting its pool.
    int chain_iteration() const { return chain_iteration_; }
    bool mirrored() const { return mirrored_; }
    const std::vector<Vertex>& target() const { return target_; }
    const std::vector<Edge>& cover_chain() const { return cover_chain_; }
    const std::vector<Vertex>& registry() const { return registry_; }
    const std::vector<Vertex>& left_pool() const { return left_pool_; }
    const std::vector<Vertex>& right_pool() const { return right_pool_; }
    int outside_count() const { return static_cast<int>(left_pool_.size() + right_pool_.size()); }

    /// Position of v in the normalized frame.
    int normalized(const GameState& state, Vertex v) const;

private:
    std::vector<Vertex> sorted(const GameState& state, std::span<const Vertex> vs) const;
    std::string observe(const GameState& state, Vertex placed);
    void replace_inside(const GameState& state, Vertex placed);
    std::string extend_chain(const GameState& state);
    std::string start_exploit(const GameState& state);
    void reset_pools();

    int k_ = 0;
    bool mirrored_ = false;
    AlicePhase phase_ = AlicePhase::ForceOutside;
    int chain_iteration_ = 0;
    std::vector<Vertex> target_;
    std::vector<Vertex> base_;  // base clique C of the current inside/outside level
    bool base_replaced_ = false;  // target is C - ℓ(C) + v
    std::vector<Edge> cover_chain_;
    std::vector<Vertex> left_pool_;
    std::vector<Vertex> right_pool_;
    std::vector<Vertex> registry_;
    std::size_t seen_vertices_ = 0;
    bool awaiting_ = false;
};

/// Free-function form; throws GameAnomaly.
std::pair<CliqueRef, AliceController> alice_next(AliceController controller, const GameState& state);

class BobStrategy {
public:
    virtual ~BobStrategy() = default;
    /// Position in 0..n for the pending vertex.
    virtual int choose(const GameState& state) = 0;
    virtual std::string name() const = 0;
};

inline int bob_next(BobStrategy& bob, const GameState& state) { return bob.choose(state); }

/// Smallest post-insertion max rainbow over all gaps, ties to the leftmost.
int greedy_min_rainbow_position(const GameState& state);

struct GameMove {
    enum class Kind { Alice, Bob };
    Kind kind = Kind::Alice;
    std::vector<VertexId> clique;  // Alice
    VertexId vertex;               // Alice
    int pos = 0;                   // Bob
    std::int64_t ts_us = 0;        // microseconds since the game started
};

struct GameOutcome {
    enum class Kind { InProgress, AliceWin, CapExceeded, Anomaly };
    Kind kind = Kind::InProgress;
    int rounds = 0;
    std::vector<std::pair<VertexId, VertexId>> witness;  // AliceWin, outermost first
    std::string description;                             // Anomaly
};

std::string to_string(GameOutcome::Kind kind);

struct GameTrace {
    int k = 0;
    std::vector<VertexId> initial_order;
    std::vector<GameMove> moves;
    GameOutcome outcome;

    std::vector<int> bob_positions() const;
};

/// Built-in strategies: "random", "greedy" ("greedy_min_rainbow"),
/// "leftmost", "rightmost", "inside" ("inside_biased"). "replay" needs a
/// trace. Throws InputError on unknown names.
std::unique_ptr<BobStrategy> make_bob(const std::string& kind, std::uint64_t seed = 0,
                                      const GameTrace* replay = nullptr);
std::unique_ptr<BobStrategy> make_replay_bob(std::vector<int> positions);
/// Plays `inner` on the reflected game: p -> n - inner(reflect(state)).
std::unique_ptr<BobStrategy> make_mirrored_bob(std::unique_ptr<BobStrategy> inner);

const std::vector<std::string>& builtin_bob_names();

/// 10^4 for k = 2, 5*10^4 otherwise.
int default_round_cap(int k);

struct GameConfig {
    int round_cap = 0;  // 0: default_round_cap(k)
    std::uint64_t seed = 0;
    std::optional<std::vector<VertexId>> initial_order;
};

/// One game driven move by move: Alice replies inside bob_move().
class GameSession {
public:
    /// Starts the game and makes Alice's first move.
    GameSession(int k, GameConfig config);

    const GameState& state() const { return state_; }
    const AliceController& controller() const { return controller_; }
    const GameTrace& trace() const { return trace_; }
    bool finished() const { return trace_.outcome.kind != GameOutcome::Kind::InProgress; }
    int round_cap() const { return cap_; }

    /// Throws IllegalMove on a bad position or a finished game.
    void bob_move(int pos);

private:
    void alice_turn();
    std::int64_t now_us() const;

    GameState state_;
    AliceController controller_;
    GameTrace trace_;
    int cap_ = 0;
    std::chrono::steady_clock::time_point started_;
};

GameTrace run_game(int k, BobStrategy& bob, const GameConfig& config);

/// Applies the recorded moves to a fresh game. Throws IllegalMove if the
/// trace is inconsistent.
GameState replay_moves(const GameTrace& trace);

}  // namespace qnlay
