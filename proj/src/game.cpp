#include "qnlay/game.hpp"

#include <algorithm>
#include <climits>
#include <set>

namespace qnlay {

namespace {

std::string token_list(const Graph& g, std::span<const Vertex> vs) {
    std::string s = "{";
    for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + g.token(vs[i]);
    return s + "}";
}

}  // namespace

GameState::GameState(int k, std::vector<VertexId> initial_order) : k_(k) {
    if (k < 1) throw InputError("the k-queue game needs k >= 1");
    std::vector<VertexId> tokens;
    for (int i = 1; i <= k + 1; ++i) tokens.push_back("v" + std::to_string(i));
    for (const auto& t : tokens) graph_.add_vertex(t);
    for (Vertex a = 0; a <= k; ++a)
        for (Vertex b = a + 1; b <= k; ++b) graph_.add_edge(a, b);

    if (initial_order.empty()) initial_order = tokens;
    if (initial_order.size() != tokens.size())
        throw InputError("initial order must list the " + std::to_string(k + 1) + " initial vertices");
    std::set<Vertex> seen;
    for (const auto& t : initial_order) {
        const auto v = graph_.find(t);
        if (!v) throw InputError("initial order names unknown vertex " + t);
        if (!seen.insert(*v).second) throw InputError("initial order repeats vertex " + t);
        sequence_.push_back(*v);
    }
    initial_order_ = std::move(initial_order);
    reindex();
}

void GameState::reindex() {
    position_.assign(graph_.num_vertices(), -1);
    for (std::size_t i = 0; i < sequence_.size(); ++i) position_[static_cast<std::size_t>(sequence_[i])] = static_cast<int>(i);
}

void GameState::stack(std::span<const Vertex> clique) {
    if (pending_) throw IllegalMove("vertex " + pending_->vertex + " is still waiting for Bob");
    if (clique.size() != static_cast<std::size_t>(k_))
        throw IllegalMove("Alice must stack on a clique of size " + std::to_string(k_) + ", got " +
                          std::to_string(clique.size()));
    std::vector<Vertex> members(clique.begin(), clique.end());
    for (Vertex v : members)
        if (v < 0 || static_cast<std::size_t>(v) >= graph_.num_vertices()) throw IllegalMove("unknown vertex in clique");
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
        throw IllegalMove("clique repeats a vertex");
    if (!graph_.is_clique(members)) throw IllegalMove(token_list(graph_, members) + " is not a clique");
    pending_ = PendingVertex{"v" + std::to_string(graph_.num_vertices() + 1), std::move(members)};
}

void GameState::stack(const CliqueRef& clique) {
    std::vector<Vertex> members;
    for (const auto& t : clique.members) {
        const auto v = graph_.find(t);
        if (!v) throw IllegalMove("unknown vertex " + t);
        members.push_back(*v);
    }
    stack(members);
}

Vertex GameState::place(int pos) {
    if (!pending_) throw IllegalMove("no vertex is waiting to be placed");
    if (pos < 0 || static_cast<std::size_t>(pos) > sequence_.size())
        throw IllegalMove("position " + std::to_string(pos) + " outside 0.." + std::to_string(sequence_.size()));
    const Vertex v = graph_.add_vertex(pending_->vertex);
    for (Vertex u : pending_->clique) graph_.add_edge(u, v);
    sequence_.insert(sequence_.begin() + pos, v);
    reindex();
    pending_.reset();
    ++round_;
    return v;
}

GameState GameState::reflected() const {
    GameState r = *this;
    std::reverse(r.sequence_.begin(), r.sequence_.end());
    r.reindex();
    return r;
}

std::vector<Vertex> GameState::sorted_by_position(std::span<const Vertex> clique) const {
    std::vector<Vertex> out(clique.begin(), clique.end());
    std::sort(out.begin(), out.end(), [this](Vertex a, Vertex b) { return position(a) < position(b); });
    return out;
}

GameState new_game(int k, const std::optional<std::vector<VertexId>>& initial_order) {
    return GameState(k, initial_order.value_or(std::vector<VertexId>{}));
}

GameState apply_alice_move(GameState state, const CliqueRef& clique) {
    state.stack(clique);
    return state;
}

GameState apply_bob_move(GameState state, int pos) {
    state.place(pos);
    return state;
}

std::optional<RainbowWitness> detect_rainbow(const GameState& state, int target) {
    auto w = max_rainbow(state.order(), state.graph().edges());
    if (static_cast<int>(w.size()) >= target) return w;
    return std::nullopt;
}

std::string to_string(AlicePhase phase) {
    switch (phase) {
        case AlicePhase::ForceOutside: return "ForceOutside";
        case AlicePhase::SideAccumulate: return "SideAccumulate";
        case AlicePhase::ChainExtend: return "ChainExtend";
        case AlicePhase::ExploitConfig: return "ExploitConfig";
    }
    return "?";
}

std::string to_string(GameOutcome::Kind kind) {
    switch (kind) {
        case GameOutcome::Kind::InProgress: return "InProgress";
        case GameOutcome::Kind::AliceWin: return "AliceWin";
        case GameOutcome::Kind::CapExceeded: return "CapExceeded";
        case GameOutcome::Kind::Anomaly: return "Anomaly";
    }
    return "?";
}

// ---------------------------------------------------------------- Alice

AliceController::AliceController(const GameState& state) : k_(state.k()) {
    if (k_ < 2) throw InputError("Alice's strategy needs k >= 2");
    if (state.pending() || state.size() != static_cast<std::size_t>(k_) + 1)
        throw InputError("Alice's controller must start on a fresh game");
    const auto by_token = state.graph().vertices_by_token();
    mirrored_ = state.position(by_token.front()) > state.position(by_token.back());
    target_.assign(by_token.begin(), by_token.begin() + k_);
    base_ = target_;
    seen_vertices_ = state.graph().num_vertices();
}

int AliceController::normalized(const GameState& state, Vertex v) const {
    const int p = state.position(v);
    return mirrored_ ? static_cast<int>(state.size()) - 1 - p : p;
}

std::vector<Vertex> AliceController::sorted(const GameState& state, std::span<const Vertex> vs) const {
    std::vector<Vertex> out(vs.begin(), vs.end());
    std::sort(out.begin(), out.end(), [&](Vertex a, Vertex b) { return normalized(state, a) < normalized(state, b); });
    return out;
}

void AliceController::reset_pools() {
    left_pool_.clear();
    right_pool_.clear();
}

AliceDecision AliceController::next(const GameState& state) {
    if (state.pending()) throw IllegalMove("Alice cannot move while a vertex is pending");
    const std::size_t n = state.graph().num_vertices();
    std::string anomaly;
    if (n == seen_vertices_ + 1) {
        anomaly = observe(state, static_cast<Vertex>(seen_vertices_));
    } else if (n != seen_vertices_) {
        throw InputError("controller is out of sync with the game state");
    }
    seen_vertices_ = n;
    if (!anomaly.empty()) return {{}, anomaly};
    return {target_, {}};
}

void AliceController::replace_inside(const GameState& state, Vertex placed) {
    const auto base = sorted(state, base_);
    if (!base_replaced_) {
        target_ = std::vector<Vertex>(base.begin() + 1, base.end());
        target_.push_back(placed);
        base_replaced_ = true;
    } else {
        const Vertex r = base.back();
        std::erase(target_, r);
        target_.push_back(placed);
        cover_chain_.push_back({std::min(base.front(), r), std::max(base.front(), r)});
        base_ = target_;
        base_replaced_ = false;
    }
    reset_pools();
}

std::string AliceController::observe(const GameState& state, Vertex placed) {
    const Graph& g = state.graph();
    {
        std::vector<Vertex> nb(g.neighbors(placed).begin(), g.neighbors(placed).end());
        std::vector<Vertex> t = target_;
        std::sort(t.begin(), t.end());
        if (nb != t) return "placed vertex " + g.token(placed) + " is not attached to the target clique";
    }
    const auto t = sorted(state, target_);
    const int p = normalized(state, placed);
    const int lo = normalized(state, t.front());
    const int hi = normalized(state, t.back());
    const bool inside = lo < p && p < hi;
    const std::size_t k = static_cast<std::size_t>(k_);

    switch (phase_) {
        case AlicePhase::ForceOutside:
        case AlicePhase::SideAccumulate: {
            if (inside) {
                replace_inside(state, placed);
                phase_ = AlicePhase::ForceOutside;
                if (cover_chain_.size() >= k)
                    return std::to_string(cover_chain_.size()) + " nested cover edges without a rainbow";
                return {};
            }
            (p < lo ? left_pool_ : right_pool_).push_back(placed);
            if (phase_ == AlicePhase::ForceOutside && outside_count() >= 2 * k_ + 1)
                phase_ = AlicePhase::SideAccumulate;
            if (phase_ == AlicePhase::SideAccumulate &&
                std::max(left_pool_.size(), right_pool_.size()) >= 2 * k + 1) {
                if (left_pool_.size() > right_pool_.size()) {
                    mirrored_ = !mirrored_;
                    std::swap(left_pool_, right_pool_);
                }
                registry_ = sorted(state, target_);
                phase_ = AlicePhase::ChainExtend;
                chain_iteration_ = 1;
                return extend_chain(state);
            }
            return {};
        }
        case AlicePhase::ChainExtend: {
            if (p <= hi)
                return "placement at " + std::to_string(p) + " is not right of r(C) = " + std::to_string(hi) +
                       " yet no rainbow appeared";
            right_pool_.push_back(placed);
            if (right_pool_.size() == 2 * k + 1) return extend_chain(state);
            return {};
        }
        case AlicePhase::ExploitConfig: {
            if (inside) {
                replace_inside(state, placed);
                if (cover_chain_.size() + 1 >= k)
                    return std::to_string(cover_chain_.size()) + " cover edges inside e without a rainbow";
                return {};
            }
            (p < lo ? left_pool_ : right_pool_).push_back(placed);
            if (std::max(left_pool_.size(), right_pool_.size()) + 1 >= 2 * k)
                return "2k-1 one-sided placements in the winning configuration without a rainbow";
            return {};
        }
    }
    return {};
}

std::string AliceController::extend_chain(const GameState& state) {
    const std::size_t k = static_cast<std::size_t>(k_);
    auto pool = sorted(state, right_pool_);
    pool.resize(2 * k + 1);  // exactly 2k+1 collected
    const Vertex median = pool[k];
    const auto w = sorted(state, target_);
    std::vector<Vertex> next{w[0]};
    for (std::size_t i = 2; i < k; ++i) next.push_back(w[i]);
    next.push_back(median);
    target_ = std::move(next);
    registry_.push_back(median);
    reset_pools();
    if (registry_.size() == k + 4) return start_exploit(state);
    ++chain_iteration_;
    return {};
}

std::string AliceController::start_exploit(const GameState& state) {
    const Graph& g = state.graph();
    const std::size_t k = static_cast<std::size_t>(k_);
    for (std::size_t i = 1; i < registry_.size(); ++i)
        if (normalized(state, registry_[i - 1]) >= normalized(state, registry_[i]))
            return "registry vertices are not increasing";
    const Vertex v1 = registry_[0];
    if (!g.adjacent(v1, registry_[k + 3]) || !g.adjacent(v1, registry_[1]) ||
        !g.adjacent(registry_[k + 2], registry_[k + 3]))
        return "winning configuration edges are missing";
    target_.assign(registry_.begin() + 2, registry_.begin() + static_cast<std::ptrdiff_t>(k) + 2);
    if (!g.is_clique(target_)) return "winning configuration clique is missing";
    base_ = target_;
    base_replaced_ = false;
    cover_chain_.clear();
    reset_pools();
    phase_ = AlicePhase::ExploitConfig;
    return {};
}

std::pair<CliqueRef, AliceController> alice_next(AliceController controller, const GameState& state) {
    const auto decision = controller.next(state);
    if (!decision.anomaly.empty()) throw GameAnomaly(decision.anomaly);
    return {make_clique_ref(state.graph(), decision.clique), std::move(controller)};
}

// ---------------------------------------------------------------- Bob

namespace {

// For every arc: the longest strictly nested chain having it as its
// outermost (inner_depth) and as its innermost (outer_depth) arc.
void chain_depths(std::span<const Arc> arcs, std::size_t n, std::vector<int>& inner_depth,
                  std::vector<int>& outer_depth) {
    const std::size_t m = arcs.size();
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    inner_depth.assign(m, 1);
    outer_depth.assign(m, 1);
    std::vector<int> tree(n + 1);

    // Inner: sweep lefts descending, prefix max over rights < r.
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return arcs[a].left > arcs[b].left; });
    std::fill(tree.begin(), tree.end(), 0);
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && arcs[idx[j]].left == arcs[idx[i]].left) ++j;
        for (std::size_t t = i; t < j; ++t) {
            int best = 0;
            for (auto x = static_cast<std::size_t>(arcs[idx[t]].right); x > 0; x -= x & (~x + 1))
                best = std::max(best, tree[x]);
            inner_depth[idx[t]] = best + 1;
        }
        for (std::size_t t = i; t < j; ++t)
            for (auto x = static_cast<std::size_t>(arcs[idx[t]].right) + 1; x <= n; x += x & (~x + 1))
                tree[x] = std::max(tree[x], inner_depth[idx[t]]);
        i = j;
    }

    // Outer: sweep lefts ascending, prefix max over mirrored rights > r.
    std::reverse(idx.begin(), idx.end());
    std::fill(tree.begin(), tree.end(), 0);
    for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && arcs[idx[j]].left == arcs[idx[i]].left) ++j;
        for (std::size_t t = i; t < j; ++t) {
            int best = 0;
            const auto mirrored = n - 1 - static_cast<std::size_t>(arcs[idx[t]].right);
            for (std::size_t x = mirrored; x > 0; x -= x & (~x + 1)) best = std::max(best, tree[x]);
            outer_depth[idx[t]] = best + 1;
        }
        for (std::size_t t = i; t < j; ++t) {
            const auto mirrored = n - 1 - static_cast<std::size_t>(arcs[idx[t]].right);
            for (std::size_t x = mirrored + 1; x <= n; x += x & (~x + 1))
                tree[x] = std::max(tree[x], outer_depth[idx[t]]);
        }
        i = j;
    }
}

class RandomBob : public BobStrategy {
public:
    explicit RandomBob(std::uint64_t seed) : rng_(seed) {}
    int choose(const GameState& s) override {
        return std::uniform_int_distribution<int>(0, static_cast<int>(s.size()))(rng_);
    }
    std::string name() const override { return "random"; }

private:
    std::mt19937_64 rng_;
};

class GreedyBob : public BobStrategy {
public:
    int choose(const GameState& s) override { return greedy_min_rainbow_position(s); }
    std::string name() const override { return "greedy"; }
};

class LeftmostBob : public BobStrategy {
public:
    int choose(const GameState&) override { return 0; }
    std::string name() const override { return "leftmost"; }
};

class RightmostBob : public BobStrategy {
public:
    int choose(const GameState& s) override { return static_cast<int>(s.size()); }
    std::string name() const override { return "rightmost"; }
};

/// Goes inside the clique whenever it has an interior gap.
class InsideBiasedBob : public BobStrategy {
public:
    explicit InsideBiasedBob(std::uint64_t seed) : rng_(seed) {}
    int choose(const GameState& s) override {
        if (!s.pending()) throw IllegalMove("no vertex is pending");
        const auto c = s.sorted_by_position(s.pending()->clique);
        int lo = 0;
        int hi = static_cast<int>(s.size());
        if (c.size() >= 2 && s.position(c.back()) > s.position(c.front())) {
            lo = s.position(c.front()) + 1;
            hi = s.position(c.back());
        }
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }
    std::string name() const override { return "inside"; }

private:
    std::mt19937_64 rng_;
};

class ReplayBob : public BobStrategy {
public:
    explicit ReplayBob(std::vector<int> positions) : positions_(std::move(positions)) {}
    int choose(const GameState&) override {
        if (next_ >= positions_.size()) throw InputError("replay trace has no more Bob moves");
        return positions_[next_++];
    }
    std::string name() const override { return "replay"; }

private:
    std::vector<int> positions_;
    std::size_t next_ = 0;
};

class MirroredBob : public BobStrategy {
public:
    explicit MirroredBob(std::unique_ptr<BobStrategy> inner) : inner_(std::move(inner)) {}
    int choose(const GameState& s) override { return static_cast<int>(s.size()) - inner_->choose(s.reflected()); }
    std::string name() const override { return "mirrored-" + inner_->name(); }

private:
    std::unique_ptr<BobStrategy> inner_;
};

}  // namespace

int greedy_min_rainbow_position(const GameState& state) {
    if (!state.pending()) throw IllegalMove("no vertex is pending");
    const std::size_t n = state.size();
    const auto arcs = arcs_of(state.order(), state.graph().edges());
    std::vector<int> inner, outer;
    chain_depths(arcs, std::max<std::size_t>(n, 1), inner, outer);
    int base = 0;
    for (int d : inner) base = std::max(base, d);

    std::vector<int> clique_pos;
    for (Vertex c : state.pending()->clique) clique_pos.push_back(state.position(c));

    int best = INT_MAX;
    int best_pos = 0;
    for (int p = 0; p <= static_cast<int>(n); ++p) {
        int worst = base;
        for (int cp0 : clique_pos) {
            const int cp = cp0 + (cp0 >= p ? 1 : 0);
            const int fl = std::min(p, cp);
            const int fr = std::max(p, cp);
            int in = 0;
            int out = 0;
            for (std::size_t a = 0; a < arcs.size(); ++a) {
                const int l = arcs[a].left + (arcs[a].left >= p ? 1 : 0);
                const int r = arcs[a].right + (arcs[a].right >= p ? 1 : 0);
                if (fl < l && r < fr) in = std::max(in, inner[a]);
                else if (l < fl && fr < r) out = std::max(out, outer[a]);
            }
            worst = std::max(worst, in + 1 + out);
            if (worst >= best) break;
        }
        if (worst < best) {
            best = worst;
            best_pos = p;
        }
    }
    return best_pos;
}

const std::vector<std::string>& builtin_bob_names() {
    static const std::vector<std::string> names{"greedy", "leftmost", "rightmost", "random", "inside"};
    return names;
}

std::unique_ptr<BobStrategy> make_bob(const std::string& kind, std::uint64_t seed, const GameTrace* replay) {
    if (kind == "random") return std::make_unique<RandomBob>(seed);
    if (kind == "greedy" || kind == "greedy_min_rainbow") return std::make_unique<GreedyBob>();
    if (kind == "leftmost") return std::make_unique<LeftmostBob>();
    if (kind == "rightmost") return std::make_unique<RightmostBob>();
    if (kind == "inside" || kind == "inside_biased") return std::make_unique<InsideBiasedBob>(seed);
    if (kind == "replay") {
        if (!replay) throw InputError("replay strategy needs a trace");
        return make_replay_bob(replay->bob_positions());
    }
    throw InputError("unknown Bob strategy '" + kind + "'");
}

std::unique_ptr<BobStrategy> make_replay_bob(std::vector<int> positions) {
    return std::make_unique<ReplayBob>(std::move(positions));
}

std::unique_ptr<BobStrategy> make_mirrored_bob(std::unique_ptr<BobStrategy> inner) {
    return std::make_unique<MirroredBob>(std::move(inner));
}

// ---------------------------------------------------------------- driver

std::vector<int> GameTrace::bob_positions() const {
    std::vector<int> out;
    for (const auto& m : moves)
        if (m.kind == GameMove::Kind::Bob) out.push_back(m.pos);
    return out;
}

int default_round_cap(int k) { return k == 2 ? 10000 : 50000; }

GameSession::GameSession(int k, GameConfig config)
    : state_(new_game(k, config.initial_order)),
      controller_(state_),
      cap_(config.round_cap > 0 ? config.round_cap : default_round_cap(k)),
      started_(std::chrono::steady_clock::now()) {
    trace_.k = k;
    trace_.initial_order = state_.initial_order();
    alice_turn();
}

std::int64_t GameSession::now_us() const {
    return std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - started_).count();
}

void GameSession::alice_turn() {
    if (state_.round() >= cap_) {
        trace_.outcome.kind = GameOutcome::Kind::CapExceeded;
        trace_.outcome.rounds = state_.round();
        return;
    }
    const auto decision = controller_.next(state_);
    if (!decision.anomaly.empty()) {
        trace_.outcome.kind = GameOutcome::Kind::Anomaly;
        trace_.outcome.rounds = state_.round();
        trace_.outcome.description = decision.anomaly;
        return;
    }
    state_.stack(decision.clique);
    GameMove move;
    move.kind = GameMove::Kind::Alice;
    move.clique = make_clique_ref(state_.graph(), state_.pending()->clique).members;
    move.vertex = state_.pending()->vertex;
    move.ts_us = now_us();
    trace_.moves.push_back(std::move(move));
}

void GameSession::bob_move(int pos) {
    if (finished()) throw IllegalMove("the game is over (" + to_string(trace_.outcome.kind) + ")");
    state_.place(pos);
    GameMove move;
    move.kind = GameMove::Kind::Bob;
    move.pos = pos;
    move.ts_us = now_us();
    trace_.moves.push_back(std::move(move));

    if (const auto w = detect_rainbow(state_, state_.k() + 1)) {
        trace_.outcome.kind = GameOutcome::Kind::AliceWin;
        trace_.outcome.rounds = state_.round();
        for (const auto& e : w->edges) trace_.outcome.witness.emplace_back(state_.graph().token(e.u), state_.graph().token(e.v));
        return;
    }
    alice_turn();
}

GameTrace run_game(int k, BobStrategy& bob, const GameConfig& config) {
    GameSession session(k, config);
    while (!session.finished()) session.bob_move(bob.choose(session.state()));
    return session.trace();
}

GameState replay_moves(const GameTrace& trace) {
    GameState state = new_game(trace.k, trace.initial_order);
    for (const auto& m : trace.moves) {
        if (m.kind == GameMove::Kind::Alice) {
            state.stack(CliqueRef{m.clique});
            if (!m.vertex.empty() && m.vertex != state.pending()->vertex)
                throw IllegalMove("trace names vertex " + m.vertex + " but the game introduces " + state.pending()->vertex);
        } else {
            state.place(m.pos);
        }
    }
    return state;
}

}  // namespace qnlay
