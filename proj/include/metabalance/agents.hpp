#pragma once

// Game-playing agents for the grid duel: an MCTS planner with a tiered
// reward scheme (approach, damage, win), plus a uniform-random baseline.
// Simultaneous ticks use decoupled UCB: each player maximizes its own
// bandit over its own action marginals and the joint action indexes the
// child node.  A search consumes randomness only from the caller's RNG,
// so a fixed (state, seed, budget) triple is bit-reproducible.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metabalance/errors.hpp"
#include "metabalance/rng.hpp"
#include "metabalance/warfare.hpp"

namespace metabalance::agents {

enum class AgentKind { Mcts, Random, Scripted };

struct AgentConfig {
  AgentKind kind = AgentKind::Mcts;
  int budget = 625;
  double uct_c = 1.4142135623730951;
  int rollout_depth = 40;
  // Scripted agents pick a fixed strategy index; they apply only to games
  // whose strategies are declared up front, never to the grid duel.
  int scripted_index = 0;

  bool operator==(const AgentConfig&) const = default;
};

inline void validate(const AgentConfig& cfg) {
  if (cfg.budget < 1) {
    throw BoundsError("agent budget must be >= 1, got " +
                      std::to_string(cfg.budget));
  }
  if (cfg.rollout_depth < 0) {
    throw BoundsError("rollout_depth must be >= 0, got " +
                      std::to_string(cfg.rollout_depth));
  }
  if (!(cfg.uct_c >= 0.0) || !std::isfinite(cfg.uct_c)) {
    throw BoundsError("uct_c must be finite and non-negative");
  }
  if (cfg.scripted_index < 0) {
    throw BoundsError("scripted_index must be >= 0");
  }
}

// Reward magnitudes form a strict hierarchy: closing distance matters less
// than trading damage, which matters less than the game result.
struct RewardWeights {
  double distance_penalty = 1.0;
  double damage_scale = 10.0;
  double win_score = 1000.0;

  bool operator==(const RewardWeights&) const = default;
};

inline void validate(const RewardWeights& w) {
  if (!(w.distance_penalty >= 0.0 && w.distance_penalty <= 10.0)) {
    throw BoundsError("distance_penalty must be in [0, 10]");
  }
  if (!(w.damage_scale >= 10.0 && w.damage_scale <= 99.0)) {
    throw BoundsError("damage_scale must be in [10, 99]");
  }
  if (w.win_score != 1000.0) {
    throw BoundsError("win_score must be 1000");
  }
}

inline int manhattan_distance(const warfare::GameState& s) {
  return std::abs(s.bots[0].x - s.bots[1].x) +
         std::abs(s.bots[0].y - s.bots[1].y);
}

// Reward for one tick from `player`'s perspective: pay for increased
// separation, earn for damage dealt, pay for damage taken.
inline double step_reward(const warfare::GameState& prev,
                          const warfare::GameState& next, int player,
                          const RewardWeights& w) {
  const int grew = manhattan_distance(next) - manhattan_distance(prev);
  const std::size_t me = static_cast<std::size_t>(player);
  const std::size_t foe = static_cast<std::size_t>(1 - player);
  const double dealt = prev.bots[foe].health - next.bots[foe].health;
  const double taken = prev.bots[me].health - next.bots[me].health;
  return -w.distance_penalty * std::max(0, grew) +
         w.damage_scale * (dealt - taken);
}

inline double terminal_reward(const warfare::GameState& last, int player,
                              const RewardWeights& w) {
  if (!last.outcome.has_value()) return 0.0;
  switch (*last.outcome) {
    case warfare::Outcome::Draw: return 0.0;
    case warfare::Outcome::P1Win: return player == 0 ? w.win_score : -w.win_score;
    case warfare::Outcome::P2Win: return player == 1 ? w.win_score : -w.win_score;
  }
  return 0.0;
}

// Total reward of a played-out state sequence for one player: per-tick
// shaping terms plus the win bonus when the sequence ends the game (a
// cutoff contributes nothing).
inline double rollout_reward(const std::vector<warfare::GameState>& trajectory,
                             int player, const RewardWeights& w) {
  if (trajectory.empty()) {
    throw StateError("rollout_reward needs a non-empty trajectory");
  }
  double total = 0.0;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    total += step_reward(trajectory[i - 1], trajectory[i], player, w);
  }
  total += terminal_reward(trajectory.back(), player, w);
  return total;
}

inline warfare::Action random_act(const warfare::GameState& s, int player,
                                  Rng& rng) {
  const std::vector<warfare::Action> legal = warfare::legal_actions(s, player);
  if (legal.empty()) {
    throw StateError("random_act called for a sleeping bot");
  }
  std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
  return legal[pick(rng)];
}

// One search tree, owned by a single search.  Nodes live in an arena and
// reference each other by index; children are keyed by the joint action
// (7 * p1_code + p2_code, where code 6 means "asleep, no action").
class MctsSearch {
 public:
  static constexpr int kNoMove = 6;

  struct Node {
    warfare::GameState state;
    std::int32_t visits = 0;
    // Iterations whose tree walk ended here (expansion or terminal hit);
    // each one started its rollout from this node.
    std::int32_t endings = 0;
    bool terminal = false;
    std::array<std::int32_t, 49> child{};
    std::array<std::vector<std::uint8_t>, 2> moves;
    std::vector<std::uint8_t> joints;
    std::array<std::array<std::int32_t, 7>, 2> count{};
    std::array<std::array<double, 7>, 2> total{};
  };

  MctsSearch(const AgentConfig& cfg, const RewardWeights& weights)
      : cfg_(cfg), weights_(weights) {
    validate(cfg_);
  }

  void run(const warfare::GameState& root, Rng& rng,
           int tick_limit = warfare::kDefaultTickLimit) {
    nodes_.clear();
    nodes_.reserve(static_cast<std::size_t>(cfg_.budget) + 1);
    make_node(root);
    if (nodes_[0].terminal) {
      throw StateError("search from a finished game");
    }
    for (int it = 0; it < cfg_.budget; ++it) {
      iterate(rng, tick_limit);
    }
  }

  // The root action for `player` with the most visits, ties broken by rng.
  warfare::Action best_action(int player, Rng& rng) const {
    if (nodes_.empty()) throw StateError("search has not run");
    const Node& root = nodes_[0];
    const std::size_t p = static_cast<std::size_t>(player);
    if (root.moves[p].size() == 1 && root.moves[p][0] == kNoMove) {
      throw StateError("no action to pick for a sleeping bot");
    }
    std::int32_t best = -1;
    std::vector<std::uint8_t> tied;
    for (std::uint8_t code : root.moves[p]) {
      const std::int32_t n = root.count[p][code];
      if (n > best) {
        best = n;
        tied.assign(1, code);
      } else if (n == best) {
        tied.push_back(code);
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
    return static_cast<warfare::Action>(tied[pick(rng)]);
  }

  const std::vector<Node>& nodes() const { return nodes_; }

 private:
  int make_node(warfare::GameState s) {
    Node nd;
    nd.state = std::move(s);
    nd.child.fill(-1);
    nd.terminal = nd.state.outcome.has_value();
    if (!nd.terminal) {
      for (int p = 0; p < 2; ++p) {
        const std::vector<warfare::Action> legal =
            warfare::legal_actions(nd.state, p);
        std::vector<std::uint8_t>& codes =
            nd.moves[static_cast<std::size_t>(p)];
        if (legal.empty()) {
          codes.push_back(kNoMove);
        } else {
          for (warfare::Action a : legal) {
            codes.push_back(static_cast<std::uint8_t>(a));
          }
        }
      }
      for (std::uint8_t a : nd.moves[0]) {
        for (std::uint8_t b : nd.moves[1]) {
          nd.joints.push_back(static_cast<std::uint8_t>(a * 7 + b));
        }
      }
    }
    nodes_.push_back(std::move(nd));
    return static_cast<int>(nodes_.size()) - 1;
  }

  static warfare::GameState apply(const warfare::GameState& s, int joint,
                                  int tick_limit) {
    const int a = joint / 7;
    const int b = joint % 7;
    const std::optional<warfare::Action> oa =
        a == kNoMove ? std::nullopt
                     : std::optional<warfare::Action>(
                           static_cast<warfare::Action>(a));
    const std::optional<warfare::Action> ob =
        b == kNoMove ? std::nullopt
                     : std::optional<warfare::Action>(
                           static_cast<warfare::Action>(b));
    return warfare::step(s, oa, ob, tick_limit);
  }

  // Decoupled marginal pick: means are min-max normalized across this
  // node's actions so exploration pressure does not depend on the reward
  // scale; ties go to the first maximum (deterministic inside the tree).
  int pick_marginal(const Node& nd, int p) const {
    const std::vector<std::uint8_t>& codes =
        nd.moves[static_cast<std::size_t>(p)];
    if (codes.size() == 1) return codes[0];
    double lo = 0.0;
    double hi = 0.0;
    double visits = 0.0;
    bool first = true;
    for (std::uint8_t code : codes) {
      const double n = nd.count[static_cast<std::size_t>(p)][code];
      const double mean = nd.total[static_cast<std::size_t>(p)][code] / n;
      lo = first ? mean : std::min(lo, mean);
      hi = first ? mean : std::max(hi, mean);
      first = false;
      visits += n;
    }
    const double spread = hi - lo;
    const double log_n = std::log(visits);
    int best_code = codes[0];
    double best_score = -1.0;
    for (std::uint8_t code : codes) {
      const double n = nd.count[static_cast<std::size_t>(p)][code];
      const double mean = nd.total[static_cast<std::size_t>(p)][code] / n;
      const double value = spread > 0.0 ? (mean - lo) / spread : 0.5;
      const double score = value + cfg_.uct_c * std::sqrt(log_n / n);
      if (score > best_score) {
        best_score = score;
        best_code = code;
      }
    }
    return best_code;
  }

  void iterate(Rng& rng, int tick_limit) {
    std::vector<int> path{0};
    std::vector<int> keys;
    int cur = 0;
    while (true) {
      if (nodes_[static_cast<std::size_t>(cur)].terminal) break;
      scratch_.clear();
      for (std::uint8_t k : nodes_[static_cast<std::size_t>(cur)].joints) {
        if (nodes_[static_cast<std::size_t>(cur)].child[k] < 0) {
          scratch_.push_back(k);
        }
      }
      if (!scratch_.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0,
                                                        scratch_.size() - 1);
        const int k = scratch_[pick(rng)];
        warfare::GameState next = apply(
            nodes_[static_cast<std::size_t>(cur)].state, k, tick_limit);
        const int ci = make_node(std::move(next));
        nodes_[static_cast<std::size_t>(cur)].child[k] =
            static_cast<std::int32_t>(ci);
        path.push_back(ci);
        keys.push_back(k);
        cur = ci;
        break;
      }
      const Node& nd = nodes_[static_cast<std::size_t>(cur)];
      const int k = pick_marginal(nd, 0) * 7 + pick_marginal(nd, 1);
      const int ci = nd.child[static_cast<std::size_t>(k)];
      path.push_back(ci);
      keys.push_back(k);
      cur = ci;
    }

    // Reward of the whole walk from the root, extended by a random
    // playout, accumulated per player.
    std::array<double, 2> reward{0.0, 0.0};
    for (std::size_t i = 1; i < path.size(); ++i) {
      const warfare::GameState& a =
          nodes_[static_cast<std::size_t>(path[i - 1])].state;
      const warfare::GameState& b =
          nodes_[static_cast<std::size_t>(path[i])].state;
      reward[0] += step_reward(a, b, 0, weights_);
      reward[1] += step_reward(a, b, 1, weights_);
    }
    warfare::GameState roll = nodes_[static_cast<std::size_t>(cur)].state;
    for (int d = 0; d < cfg_.rollout_depth && !roll.outcome.has_value();
         ++d) {
      std::array<std::optional<warfare::Action>, 2> acts;
      for (int p = 0; p < 2; ++p) {
        const std::vector<warfare::Action> legal =
            warfare::legal_actions(roll, p);
        if (legal.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
        acts[static_cast<std::size_t>(p)] = legal[pick(rng)];
      }
      warfare::GameState next =
          warfare::step(roll, acts[0], acts[1], tick_limit);
      reward[0] += step_reward(roll, next, 0, weights_);
      reward[1] += step_reward(roll, next, 1, weights_);
      roll = std::move(next);
    }
    reward[0] += terminal_reward(roll, 0, weights_);
    reward[1] += terminal_reward(roll, 1, weights_);

    nodes_[static_cast<std::size_t>(path.back())].endings += 1;
    for (int idx : path) {
      nodes_[static_cast<std::size_t>(idx)].visits += 1;
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
      Node& parent = nodes_[static_cast<std::size_t>(path[i])];
      const int a = keys[i] / 7;
      const int b = keys[i] % 7;
      parent.count[0][static_cast<std::size_t>(a)] += 1;
      parent.total[0][static_cast<std::size_t>(a)] += reward[0];
      parent.count[1][static_cast<std::size_t>(b)] += 1;
      parent.total[1][static_cast<std::size_t>(b)] += reward[1];
    }
  }

  AgentConfig cfg_;
  RewardWeights weights_;
  std::vector<Node> nodes_;
  std::vector<int> scratch_;
};

inline warfare::Action mcts_act(const warfare::GameState& state, int player,
                                const AgentConfig& cfg,
                                const RewardWeights& weights, Rng& rng,
                                int tick_limit = warfare::kDefaultTickLimit) {
  if (warfare::legal_actions(state, player).empty()) {
    throw StateError("mcts_act called for a sleeping bot");
  }
  MctsSearch search(cfg, weights);
  search.run(state, rng, tick_limit);
  return search.best_action(player, rng);
}

// Action dispatch used by match runners: sleeping bots get no action,
// awake bots get their agent's pick.
inline std::optional<warfare::Action> agent_act(
    const warfare::GameState& state, int player, const AgentConfig& cfg,
    const RewardWeights& weights, Rng& rng,
    int tick_limit = warfare::kDefaultTickLimit) {
  if (warfare::legal_actions(state, player).empty()) return std::nullopt;
  switch (cfg.kind) {
    case AgentKind::Mcts:
      return mcts_act(state, player, cfg, weights, rng, tick_limit);
    case AgentKind::Random:
      return random_act(state, player, rng);
    case AgentKind::Scripted:
      throw ConfigError(
          "scripted agents pick declared strategies; the grid duel has "
          "none");
  }
  throw ConfigError("unknown agent kind");
}

}  // namespace metabalance::agents
