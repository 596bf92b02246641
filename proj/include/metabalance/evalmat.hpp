#pragma once

// Empirical win-rate estimation: simulate head-to-head grid-duel matches
// between agent-controlled bots and reduce them into a win-rate matrix and
// a centered evaluation matrix.  Everything is deterministic in the config
// and base seed: per-game seeds are derived from (base_seed, matchup index,
// game index), and players swap sides every other game to cancel any
// first-mover artifact of the simultaneous resolution order.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metabalance/agents.hpp"
#include "metabalance/errors.hpp"
#include "metabalance/metagame.hpp"
#include "metabalance/rng.hpp"
#include "metabalance/warfare.hpp"

namespace metabalance::evalmat {

struct EvalConfig {
  int games_per_matchup = 50;
  agents::AgentConfig agent;
  agents::RewardWeights rewards;
  int tick_limit = warfare::kDefaultTickLimit;
  std::uint64_t base_seed = 0;
  bool exploit_symmetry = true;

  bool operator==(const EvalConfig&) const = default;
};

inline void validate(const EvalConfig& cfg) {
  if (cfg.games_per_matchup < 1) {
    throw BoundsError("games_per_matchup must be >= 1, got " +
                      std::to_string(cfg.games_per_matchup));
  }
  if (cfg.tick_limit < 1) {
    throw BoundsError("tick_limit must be >= 1, got " +
                      std::to_string(cfg.tick_limit));
  }
  agents::validate(cfg.agent);
  agents::validate(cfg.rewards);
}

struct WinRateMatrix {
  std::vector<std::string> labels;
  SquareMatrix w{0};

  bool operator==(const WinRateMatrix&) const = default;
};

using ReplaySink = std::function<void(const std::string&)>;

// One full episode, first config as player 1.  Each player draws from its
// own seed-derived stream so the two agents never share randomness.
inline warfare::Outcome play_match(const warfare::BotConfig& p1,
                                   const warfare::BotConfig& p2,
                                   const EvalConfig& cfg,
                                   std::uint64_t match_seed,
                                   const ReplaySink& sink = {}) {
  warfare::GameState s = warfare::new_state(p1, p2, match_seed);
  Rng rng1 = make_rng(derive_seed(match_seed, 1));
  Rng rng2 = make_rng(derive_seed(match_seed, 2));
  while (!s.outcome.has_value()) {
    const std::optional<warfare::Action> a1 = agents::agent_act(
        s, 0, cfg.agent, cfg.rewards, rng1, cfg.tick_limit);
    const std::optional<warfare::Action> a2 = agents::agent_act(
        s, 1, cfg.agent, cfg.rewards, rng2, cfg.tick_limit);
    warfare::GameState next = warfare::step(s, a1, a2, cfg.tick_limit);
    if (sink) sink(warfare::replay_line(s, a1, a2, next));
    s = std::move(next);
  }
  return *s.outcome;
}

enum class MatchResult { IWin, JWin, Draw };

// One episode between configs i and j; `swap` seats j as player 1 while the
// result stays expressed in i/j terms.
inline MatchResult run_match(const warfare::BotConfig& cfg_i,
                             const warfare::BotConfig& cfg_j,
                             const EvalConfig& cfg, std::uint64_t match_seed,
                             bool swap = false) {
  const warfare::Outcome out = swap ? play_match(cfg_j, cfg_i, cfg, match_seed)
                                    : play_match(cfg_i, cfg_j, cfg, match_seed);
  switch (out) {
    case warfare::Outcome::Draw: return MatchResult::Draw;
    case warfare::Outcome::P1Win:
      return swap ? MatchResult::JWin : MatchResult::IWin;
    case warfare::Outcome::P2Win:
      return swap ? MatchResult::IWin : MatchResult::JWin;
  }
  return MatchResult::Draw;
}

// Win-rate of i against j over games_per_matchup episodes with draws worth
// half a win.  Game g of matchup m is seeded derive_seed(base_seed, m, g);
// sides alternate per game.
inline double estimate_winrate(const warfare::BotConfig& cfg_i,
                               const warfare::BotConfig& cfg_j,
                               const EvalConfig& cfg,
                               std::uint64_t matchup_index) {
  validate(cfg);
  double credit = 0.0;
  for (int g = 0; g < cfg.games_per_matchup; ++g) {
    const std::uint64_t seed = derive_seed(
        cfg.base_seed, matchup_index, static_cast<std::uint64_t>(g));
    const MatchResult r = run_match(cfg_i, cfg_j, cfg, seed, g % 2 == 1);
    if (r == MatchResult::IWin) {
      credit += 1.0;
    } else if (r == MatchResult::Draw) {
      credit += 0.5;
    }
  }
  return credit / cfg.games_per_matchup;
}

// Full matrix over one bot config per label.  With exploit_symmetry only
// the upper triangle is simulated and the lower filled by complement;
// otherwise both orderings are simulated and averaged so that
// w_ij + w_ji = 1 still holds exactly.
inline std::pair<WinRateMatrix, EvaluationMatrix> build_evaluation_matrix(
    const std::vector<warfare::BotConfig>& configs,
    const std::vector<std::string>& labels, const EvalConfig& cfg) {
  validate(cfg);
  if (labels.size() < 2) {
    throw StructureError("need at least 2 labels, got " +
                         std::to_string(labels.size()));
  }
  if (configs.size() != labels.size()) {
    throw StructureError("got " + std::to_string(configs.size()) +
                         " bot configs for " + std::to_string(labels.size()) +
                         " labels");
  }
  const std::size_t n = labels.size();
  SquareMatrix w(n, 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint64_t m_upper = static_cast<std::uint64_t>(i * n + j);
      const double w_ij = estimate_winrate(configs[i], configs[j], cfg, m_upper);
      if (cfg.exploit_symmetry) {
        w(i, j) = w_ij;
        w(j, i) = 1.0 - w_ij;
      } else {
        const std::uint64_t m_lower = static_cast<std::uint64_t>(j * n + i);
        const double w_ji =
            estimate_winrate(configs[j], configs[i], cfg, m_lower);
        const double balanced = 0.5 * (w_ij + (1.0 - w_ji));
        w(i, j) = balanced;
        w(j, i) = 1.0 - balanced;
      }
    }
  }
  WinRateMatrix wm{labels, w};
  EvaluationMatrix eval = center_winrates(labels, w);
  return {std::move(wm), std::move(eval)};
}

}  // namespace metabalance::evalmat
