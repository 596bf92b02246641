#pragma once

// Grid-duel game engine: two bots on a 5x5 board act simultaneously each
// tick.  The engine is a pure function of (state, actions) -- it consumes
// no randomness -- so identical action streams replay bit-identically.

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "metabalance/errors.hpp"

namespace metabalance::warfare {

inline constexpr int kGridSize = 5;
inline constexpr int kMaxNails = 48;
inline constexpr int kDefaultTickLimit = 500;

enum class BotKind { Torch, Nail, Saw };

inline const char* to_string(BotKind k) {
  switch (k) {
    case BotKind::Torch: return "torch";
    case BotKind::Nail: return "nail";
    case BotKind::Saw: return "saw";
  }
  return "?";
}

// S = stay (ends the turn without sleeping), U/D/L/R = move, A = special.
enum class Action : std::int8_t { S = 0, U = 1, D = 2, L = 3, R = 4, A = 5 };

inline constexpr std::array<Action, 6> kAllActions = {
    Action::S, Action::U, Action::D, Action::L, Action::R, Action::A};

inline char to_char(Action a) {
  switch (a) {
    case Action::S: return 'S';
    case Action::U: return 'U';
    case Action::D: return 'D';
    case Action::L: return 'L';
    case Action::R: return 'R';
    case Action::A: return 'A';
  }
  return '?';
}

struct BotConfig {
  BotKind kind = BotKind::Torch;
  int health = 1;
  int cooldown = 1;
  int damage = 1;
  int ticks_between_moves = 1;
  // Torch only.
  int torch_duration = 1;
  int torch_range = 1;
  // Saw only.
  int damage_change = 1;
  int ability_duration = 1;

  bool operator==(const BotConfig&) const = default;
};

namespace detail {

inline void check_range(const char* name, int value, int lo, int hi) {
  if (value < lo || value > hi) {
    throw BoundsError(std::string(name) + " = " + std::to_string(value) +
                      " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
}

}  // namespace detail

inline void validate(const BotConfig& cfg) {
  detail::check_range("health", cfg.health, 1, 10);
  detail::check_range("cooldown", cfg.cooldown, 1, 6);
  detail::check_range("damage", cfg.damage, 1, 10);
  detail::check_range("ticks_between_moves", cfg.ticks_between_moves, 1, 6);
  if (cfg.kind == BotKind::Torch) {
    detail::check_range("torch_duration", cfg.torch_duration, 1, 6);
    detail::check_range("torch_range", cfg.torch_range, 1, 4);
  }
  if (cfg.kind == BotKind::Saw) {
    detail::check_range("damage_change", cfg.damage_change, 1, 10);
    detail::check_range("ability_duration", cfg.ability_duration, 1, 6);
  }
}

struct Nail {
  std::int8_t x = 0;
  std::int8_t y = 0;
  std::int8_t dir = 0;  // index into kDirs
  std::int8_t owner = 0;
  std::int16_t damage = 0;

  bool operator==(const Nail&) const = default;
};

struct BotState {
  BotConfig config;
  std::int8_t x = 0;
  std::int8_t y = 0;
  std::int16_t health = 0;
  // Ticks until this bot may act again; it is awake iff 0.
  std::int16_t sleep_remaining = 0;
  // Ticks until A is allowed again; A is legal iff 0.
  std::int16_t cooldown_remaining = 0;
  // Torch: flame ticks left.  Saw: damage-buff ticks left.
  std::int16_t effect_remaining = 0;
  // Flame anchor; meaningful only while a Torch effect is running.
  std::int8_t flame_x = 0;
  std::int8_t flame_y = 0;

  bool operator==(const BotState&) const = default;
};

enum class Outcome { P1Win, P2Win, Draw };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::P1Win: return "p1_win";
    case Outcome::P2Win: return "p2_win";
    case Outcome::Draw: return "draw";
  }
  return "?";
}

struct GameState {
  std::int32_t tick = 0;
  std::uint64_t rng_seed = 0;  // reserved for agents; never read by the engine
  std::array<BotState, 2> bots;
  std::array<Nail, kMaxNails> nails{};
  std::int32_t nail_count = 0;
  std::optional<Outcome> outcome;

  bool operator==(const GameState&) const = default;
};

namespace detail {

// Direction order matches Action U,D,L,R.
inline constexpr std::array<std::array<int, 2>, 4> kDirs = {
    {{0, 1}, {0, -1}, {-1, 0}, {1, 0}}};

inline bool on_grid(int x, int y) {
  return x >= 0 && x < kGridSize && y >= 0 && y < kGridSize;
}

inline int dir_of(Action a) {
  switch (a) {
    case Action::U: return 0;
    case Action::D: return 1;
    case Action::L: return 2;
    case Action::R: return 3;
    default: return -1;
  }
}

inline void tick_down(std::int16_t& t) {
  if (t > 0) --t;
}

inline bool in_flame(const BotState& torch, int x, int y) {
  if (torch.config.kind != BotKind::Torch || torch.effect_remaining <= 0) {
    return false;
  }
  const int dx = x - torch.flame_x;
  const int dy = y - torch.flame_y;
  if (dx != 0 && dy != 0) return false;
  const int dist = std::abs(dx) + std::abs(dy);
  return dist >= 1 && dist <= torch.config.torch_range;
}

}  // namespace detail

inline int effective_damage(const BotState& bot) {
  int dmg = bot.config.damage;
  if (bot.config.kind == BotKind::Saw && bot.effect_remaining > 0) {
    dmg += bot.config.damage_change;
  }
  return dmg;
}

inline GameState new_state(const BotConfig& p1, const BotConfig& p2,
                           std::uint64_t rng_seed = 0) {
  validate(p1);
  validate(p2);
  GameState s;
  s.rng_seed = rng_seed;
  s.bots[0].config = p1;
  s.bots[0].x = 0;
  s.bots[0].y = 0;
  s.bots[0].health = static_cast<std::int16_t>(p1.health);
  s.bots[1].config = p2;
  s.bots[1].x = kGridSize - 1;
  s.bots[1].y = kGridSize - 1;
  s.bots[1].health = static_cast<std::int16_t>(p2.health);
  return s;
}

inline std::optional<Outcome> outcome_of(const GameState& s) {
  return s.outcome;
}

// The legal actions for `player` (0 or 1) in a non-terminal state.  An empty
// result means the bot is asleep this tick and must be given no action.
// Moves that would leave the grid stay legal; they resolve as standing still.
inline std::vector<Action> legal_actions(const GameState& s, int player) {
  if (player < 0 || player > 1) {
    throw BoundsError("player index must be 0 or 1");
  }
  if (s.outcome.has_value()) {
    throw StateError("legal_actions on a finished game");
  }
  const BotState& bot = s.bots[static_cast<std::size_t>(player)];
  std::vector<Action> out;
  if (bot.sleep_remaining > 0) return out;
  for (Action a : kAllActions) {
    if (a == Action::A && bot.cooldown_remaining > 0) continue;
    out.push_back(a);
  }
  return out;
}

// Advances the game one tick.  Supply an action for each awake bot and
// nullopt for each sleeping bot; anything else throws StateError.
inline GameState step(GameState s, std::optional<Action> a1,
                      std::optional<Action> a2,
                      int tick_limit = kDefaultTickLimit) {
  using detail::kDirs;
  if (s.outcome.has_value()) {
    throw StateError("step on a finished game");
  }
  if (tick_limit <= 0) {
    throw BoundsError("tick_limit must be positive");
  }

  const std::array<std::optional<Action>, 2> acts = {a1, a2};
  for (int p = 0; p < 2; ++p) {
    const BotState& bot = s.bots[static_cast<std::size_t>(p)];
    const bool awake = bot.sleep_remaining == 0;
    if (awake && !acts[static_cast<std::size_t>(p)].has_value()) {
      throw StateError("missing action for awake bot " + std::to_string(p + 1));
    }
    if (!awake && acts[static_cast<std::size_t>(p)].has_value()) {
      throw StateError("action supplied for sleeping bot " +
                       std::to_string(p + 1));
    }
    if (awake && *acts[static_cast<std::size_t>(p)] == Action::A &&
        bot.cooldown_remaining > 0) {
      throw StateError("special used while on cooldown by bot " +
                       std::to_string(p + 1));
    }
  }

  // 1. Timers tick down (sleep, cooldown, effects).
  for (BotState& bot : s.bots) {
    detail::tick_down(bot.sleep_remaining);
    detail::tick_down(bot.cooldown_remaining);
    detail::tick_down(bot.effect_remaining);
    if (bot.effect_remaining == 0) {
      bot.flame_x = 0;
      bot.flame_y = 0;
    }
  }

  // 2. Simultaneous movement.  A move into the other bot's cell, into the
  // cell the other bot is entering, or off the grid resolves to standing
  // still; swaps are blocked by the first rule.
  std::array<std::array<int, 2>, 2> target;
  for (int p = 0; p < 2; ++p) {
    const BotState& bot = s.bots[static_cast<std::size_t>(p)];
    target[static_cast<std::size_t>(p)] = {bot.x, bot.y};
    const std::optional<Action>& act = acts[static_cast<std::size_t>(p)];
    if (!act.has_value()) continue;
    const int d = detail::dir_of(*act);
    if (d < 0) continue;
    const int tx = bot.x + kDirs[static_cast<std::size_t>(d)][0];
    const int ty = bot.y + kDirs[static_cast<std::size_t>(d)][1];
    if (detail::on_grid(tx, ty)) {
      target[static_cast<std::size_t>(p)] = {tx, ty};
    }
  }
  if (target[0][0] == s.bots[1].x && target[0][1] == s.bots[1].y) {
    target[0] = {s.bots[0].x, s.bots[0].y};
  }
  if (target[1][0] == s.bots[0].x && target[1][1] == s.bots[0].y) {
    target[1] = {s.bots[1].x, s.bots[1].y};
  }
  if (target[0] == target[1]) {
    target[0] = {s.bots[0].x, s.bots[0].y};
    target[1] = {s.bots[1].x, s.bots[1].y};
  }
  for (int p = 0; p < 2; ++p) {
    s.bots[static_cast<std::size_t>(p)].x =
        static_cast<std::int8_t>(target[static_cast<std::size_t>(p)][0]);
    s.bots[static_cast<std::size_t>(p)].y =
        static_cast<std::int8_t>(target[static_cast<std::size_t>(p)][1]);
  }

  // 3. Specials.  Fresh nails are collected separately: they do not advance
  // on their spawn tick, but an opponent standing on a spawn cell is hit.
  std::array<Nail, 8> fresh{};
  int fresh_count = 0;
  for (int p = 0; p < 2; ++p) {
    BotState& bot = s.bots[static_cast<std::size_t>(p)];
    if (acts[static_cast<std::size_t>(p)] != Action::A) continue;
    bot.cooldown_remaining = static_cast<std::int16_t>(bot.config.cooldown - 1);
    switch (bot.config.kind) {
      case BotKind::Torch:
        bot.effect_remaining =
            static_cast<std::int16_t>(bot.config.torch_duration);
        bot.flame_x = bot.x;
        bot.flame_y = bot.y;
        break;
      case BotKind::Nail:
        for (int d = 0; d < 4; ++d) {
          const int nx = bot.x + kDirs[static_cast<std::size_t>(d)][0];
          const int ny = bot.y + kDirs[static_cast<std::size_t>(d)][1];
          if (!detail::on_grid(nx, ny)) continue;
          fresh[static_cast<std::size_t>(fresh_count++)] =
              Nail{static_cast<std::int8_t>(nx), static_cast<std::int8_t>(ny),
                   static_cast<std::int8_t>(d), static_cast<std::int8_t>(p),
                   static_cast<std::int16_t>(bot.config.damage)};
        }
        break;
      case BotKind::Saw:
        bot.effect_remaining =
            static_cast<std::int16_t>(bot.config.ability_duration);
        break;
    }
  }

  // 4. Nails fly.  Each existing nail first checks the cell it occupies
  // (catches bots that stepped onto it and fresh spawns onto a bot), then
  // advances one cell and checks the cell it enters; leaving the grid or
  // hitting removes it.
  {
    std::array<Nail, kMaxNails> kept{};
    int kept_count = 0;
    for (int i = 0; i < s.nail_count; ++i) {
      Nail n = s.nails[static_cast<std::size_t>(i)];
      BotState& foe = s.bots[static_cast<std::size_t>(1 - n.owner)];
      if (n.x == foe.x && n.y == foe.y) {
        foe.health = static_cast<std::int16_t>(foe.health - n.damage);
        continue;
      }
      const int nx = n.x + kDirs[static_cast<std::size_t>(n.dir)][0];
      const int ny = n.y + kDirs[static_cast<std::size_t>(n.dir)][1];
      if (!detail::on_grid(nx, ny)) continue;
      n.x = static_cast<std::int8_t>(nx);
      n.y = static_cast<std::int8_t>(ny);
      if (n.x == foe.x && n.y == foe.y) {
        foe.health = static_cast<std::int16_t>(foe.health - n.damage);
        continue;
      }
      kept[static_cast<std::size_t>(kept_count++)] = n;
    }
    for (int i = 0; i < fresh_count; ++i) {
      Nail n = fresh[static_cast<std::size_t>(i)];
      BotState& foe = s.bots[static_cast<std::size_t>(1 - n.owner)];
      if (n.x == foe.x && n.y == foe.y) {
        foe.health = static_cast<std::int16_t>(foe.health - n.damage);
        continue;
      }
      if (kept_count >= kMaxNails) {
        throw StateError("nail capacity exceeded");
      }
      kept[static_cast<std::size_t>(kept_count++)] = n;
    }
    s.nails = kept;
    s.nail_count = kept_count;
  }

  // 5. Flames burn.  Damage applies once per tick per burning torch.
  for (int p = 0; p < 2; ++p) {
    const BotState& torch = s.bots[static_cast<std::size_t>(p)];
    BotState& foe = s.bots[static_cast<std::size_t>(1 - p)];
    if (detail::in_flame(torch, foe.x, foe.y)) {
      foe.health =
          static_cast<std::int16_t>(foe.health - torch.config.damage);
    }
  }

  // 6. Saw contact damage against an orthogonally adjacent opponent.
  for (int p = 0; p < 2; ++p) {
    const BotState& saw = s.bots[static_cast<std::size_t>(p)];
    if (saw.config.kind != BotKind::Saw) continue;
    BotState& foe = s.bots[static_cast<std::size_t>(1 - p)];
    const int dist = std::abs(saw.x - foe.x) + std::abs(saw.y - foe.y);
    if (dist == 1) {
      foe.health =
          static_cast<std::int16_t>(foe.health - effective_damage(saw));
    }
  }

  // 7. Acting bots go to sleep; S ends the turn without sleeping.
  for (int p = 0; p < 2; ++p) {
    const std::optional<Action>& act = acts[static_cast<std::size_t>(p)];
    if (!act.has_value()) continue;
    BotState& bot = s.bots[static_cast<std::size_t>(p)];
    bot.sleep_remaining =
        *act == Action::S
            ? 0
            : static_cast<std::int16_t>(bot.config.ticks_between_moves - 1);
  }

  // 8. Outcome.
  ++s.tick;
  const bool dead1 = s.bots[0].health <= 0;
  const bool dead2 = s.bots[1].health <= 0;
  if (dead1 && dead2) {
    s.outcome = Outcome::Draw;
  } else if (dead1) {
    s.outcome = Outcome::P2Win;
  } else if (dead2) {
    s.outcome = Outcome::P1Win;
  } else if (s.tick >= tick_limit) {
    s.outcome = Outcome::Draw;
  }
  return s;
}

// One replay line: tick;p1_action;p2_action;p1_hp;p2_hp;positions;nails.
// Sleeping bots show "-".  Positions are x,y|x,y; nails are
// x,y,dir,owner entries separated by spaces (dir in UDLR order, owner 1/2).
inline std::string replay_line(const GameState& before,
                               std::optional<Action> a1,
                               std::optional<Action> a2,
                               const GameState& after) {
  std::string line = std::to_string(before.tick);
  line += ';';
  line += a1.has_value() ? std::string(1, to_char(*a1)) : std::string("-");
  line += ';';
  line += a2.has_value() ? std::string(1, to_char(*a2)) : std::string("-");
  line += ';';
  line += std::to_string(after.bots[0].health);
  line += ';';
  line += std::to_string(after.bots[1].health);
  line += ';';
  line += std::to_string(after.bots[0].x) + ',' +
          std::to_string(after.bots[0].y) + '|' +
          std::to_string(after.bots[1].x) + ',' +
          std::to_string(after.bots[1].y);
  line += ';';
  static constexpr const char* kDirNames = "UDLR";
  for (int i = 0; i < after.nail_count; ++i) {
    const Nail& n = after.nails[static_cast<std::size_t>(i)];
    if (i > 0) line += ' ';
    line += std::to_string(n.x) + ',' + std::to_string(n.y) + ',' +
            kDirNames[static_cast<std::size_t>(n.dir)] + ',' +
            std::to_string(n.owner + 1);
  }
  return line;
}

}  // namespace metabalance::warfare
