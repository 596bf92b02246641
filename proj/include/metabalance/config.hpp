#pragma once

// Experiment configuration: the declarative text format that names the
// game flavor, the meta-game target, the searched parameters and their
// bounds, and all optimizer/evaluation knobs. parse_config applies
// defaults and validates everything eagerly; serialize_config writes the
// canonical form, and parse(serialize(cfg)) == cfg.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "metabalance/balance.hpp"
#include "metabalance/errors.hpp"
#include "metabalance/evalmat.hpp"
#include "metabalance/metagame.hpp"
#include "metabalance/normal_form.hpp"
#include "metabalance/optimize.hpp"
#include "metabalance/toml_lite.hpp"
#include "metabalance/tpe.hpp"
#include "metabalance/warfare.hpp"

namespace metabalance::config {

enum class GameKind { NormalForm, Warfare };

/// One searched or pinned game parameter. `name` doubles as the slot the
/// value is bound to: `<bot label>.<field>` for grid-duel games, the
/// generated `payoff.<a>.<b>` names for normal-form games. Exactly one of
/// {min+max, fixed} is present.
struct ParamRow {
  std::string name;
  std::optional<double> min;
  std::optional<double> max;
  std::optional<double> fixed;

  bool operator==(const ParamRow&) const = default;
};

struct ExperimentConfig {
  GameKind game = GameKind::NormalForm;
  std::string output_dir = "out";
  std::vector<std::string> strategies;
  /// Grid-duel games: strategy label -> bot kind name, for labels that are
  /// not themselves kind names.
  std::map<std::string, std::string> kinds;
  std::vector<ParamRow> params;
  std::vector<TargetEdge> edges;
  BackendKind backend = BackendKind::Tpe;
  std::uint64_t seed = 0;
  TpeConfig tpe;
  BalanceConfig balance;
  DistanceMetric metric = DistanceMetric::MeanSquared;
  /// Grid-duel games only; base_seed is derived per trial at run time.
  evalmat::EvalConfig eval;

  bool operator==(const ExperimentConfig&) const = default;

  TargetGraph target() const { return {strategies, edges}; }
};

namespace detail {

using toml::Table;
using toml::Value;

[[noreturn]] inline void fail(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

/// Typed view over one parsed table: every get marks its key as consumed,
/// and finish() rejects whatever is left over.
class TableReader {
 public:
  TableReader(const Table& t, std::string path)
      : table_(t), path_(std::move(path)) {}

  const Value* get(const std::string& key) {
    used_.insert(key);
    return table_.find(key);
  }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  std::string string_or(const std::string& key, const std::string& def) {
    const Value* v = get(key);
    if (!v) return def;
    if (v->kind != Value::Kind::String) {
      fail(v->line, where(key) + " must be a string");
    }
    return v->str;
  }

  std::optional<std::string> string_opt(const std::string& key) {
    const Value* v = get(key);
    if (!v) return std::nullopt;
    if (v->kind != Value::Kind::String) {
      fail(v->line, where(key) + " must be a string");
    }
    return v->str;
  }

  double number_or(const std::string& key, double def) {
    const Value* v = get(key);
    if (!v) return def;
    if (!v->is_number()) fail(v->line, where(key) + " must be a number");
    return v->as_double();
  }

  std::optional<double> number_opt(const std::string& key) {
    const Value* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) fail(v->line, where(key) + " must be a number");
    return v->as_double();
  }

  std::int64_t integer_or(const std::string& key, std::int64_t def) {
    const Value* v = get(key);
    if (!v) return def;
    if (v->kind != Value::Kind::Integer) {
      fail(v->line, where(key) + " must be an integer");
    }
    return v->integer;
  }

  bool bool_or(const std::string& key, bool def) {
    const Value* v = get(key);
    if (!v) return def;
    if (v->kind != Value::Kind::Boolean) {
      fail(v->line, where(key) + " must be true or false");
    }
    return v->boolean;
  }

  std::vector<std::string> string_array(const std::string& key) {
    const Value* v = get(key);
    if (!v) fail(table_.line, "missing required key " + where(key));
    if (v->kind != Value::Kind::Array) {
      fail(v->line, where(key) + " must be an array");
    }
    std::vector<std::string> out;
    for (const Value& item : v->items) {
      if (item.kind != Value::Kind::String) {
        fail(item.line, where(key) + " must contain only strings");
      }
      out.push_back(item.str);
    }
    return out;
  }

  std::optional<std::vector<double>> number_array_opt(const std::string& key) {
    const Value* v = get(key);
    if (!v) return std::nullopt;
    if (v->kind != Value::Kind::Array) {
      fail(v->line, where(key) + " must be an array");
    }
    std::vector<double> out;
    for (const Value& item : v->items) {
      if (!item.is_number()) {
        fail(item.line, where(key) + " must contain only numbers");
      }
      out.push_back(item.as_double());
    }
    return out;
  }

  /// Every key must have been consumed by now.
  void finish() const {
    for (const auto& [key, value] : table_.entries) {
      if (!used_.count(key)) {
        fail(value.line, "unknown key " + where(key));
      }
    }
  }

 private:
  const Table& table_;
  std::string path_;
  std::set<std::string> used_;
};

inline const Table& table_or_empty(const toml::Document& doc,
                                   const std::string& path) {
  static const Table empty;
  const auto it = doc.tables.find(path);
  return it == doc.tables.end() ? empty : it->second;
}

inline warfare::BotKind parse_kind(const std::string& name, int line) {
  if (name == "torch") return warfare::BotKind::Torch;
  if (name == "nail") return warfare::BotKind::Nail;
  if (name == "saw") return warfare::BotKind::Saw;
  const std::string what =
      "unknown bot kind '" + name + "' (expected torch, nail, or saw)";
  if (line > 0) fail(line, what);
  throw ConfigError(what);
}

/// Fields each bot kind exposes as binding slots, in canonical order.
inline const std::vector<std::string>& kind_fields(warfare::BotKind kind) {
  static const std::vector<std::string> torch = {
      "health", "cooldown", "damage", "ticks_between_moves",
      "torch_duration", "torch_range"};
  static const std::vector<std::string> nail = {
      "health", "cooldown", "damage", "ticks_between_moves"};
  static const std::vector<std::string> saw = {
      "health", "cooldown", "damage", "ticks_between_moves",
      "damage_change", "ability_duration"};
  switch (kind) {
    case warfare::BotKind::Torch: return torch;
    case warfare::BotKind::Nail: return nail;
    case warfare::BotKind::Saw: return saw;
  }
  throw StructureError("unreachable bot kind");
}

inline void set_bot_field(warfare::BotConfig& bot, const std::string& field,
                          int value) {
  if (field == "health") {
    bot.health = value;
  } else if (field == "cooldown") {
    bot.cooldown = value;
  } else if (field == "damage") {
    bot.damage = value;
  } else if (field == "ticks_between_moves") {
    bot.ticks_between_moves = value;
  } else if (field == "torch_duration") {
    bot.torch_duration = value;
  } else if (field == "torch_range") {
    bot.torch_range = value;
  } else if (field == "damage_change") {
    bot.damage_change = value;
  } else if (field == "ability_duration") {
    bot.ability_duration = value;
  } else {
    throw StructureError("unknown bot field: " + field);
  }
}

}  // namespace detail

/// Bot kind for a strategy label: the [kinds] entry if present, otherwise
/// the label itself must name a kind.
inline warfare::BotKind strategy_kind(const ExperimentConfig& cfg,
                                      const std::string& label) {
  const auto it = cfg.kinds.find(label);
  const std::string& name = it == cfg.kinds.end() ? label : it->second;
  return detail::parse_kind(name, 0);
}

/// The search domain declared by the config: one spec per [[param]] row
/// for grid-duel games (integer-valued, pinned rows get min = max = fixed),
/// or the generated pair space with overrides applied for normal-form.
inline ParameterSpace parameter_space(const ExperimentConfig& cfg) {
  if (cfg.game == GameKind::NormalForm) {
    NormalFormSpec base = make_normal_form_spec(cfg.strategies);
    std::vector<ParameterSpec> specs = base.space.specs();
    for (const ParamRow& row : cfg.params) {
      const auto it =
          std::find_if(specs.begin(), specs.end(),
                       [&](const ParameterSpec& s) { return s.name == row.name; });
      if (it == specs.end()) {
        throw ConfigError("param '" + row.name +
                          "' does not name a strategy pair payoff");
      }
      if (row.fixed) {
        it->min = *row.fixed;
        it->max = *row.fixed;
        it->fixed = *row.fixed;
      } else {
        it->min = *row.min;
        it->max = *row.max;
      }
    }
    return ParameterSpace(std::move(specs));
  }

  std::vector<ParameterSpec> specs;
  specs.reserve(cfg.params.size());
  for (const ParamRow& row : cfg.params) {
    ParameterSpec s;
    s.name = row.name;
    s.integer = true;
    if (row.fixed) {
      s.min = *row.fixed;
      s.max = *row.fixed;
      s.fixed = *row.fixed;
    } else {
      s.min = *row.min;
      s.max = *row.max;
    }
    specs.push_back(std::move(s));
  }
  return ParameterSpace(std::move(specs));
}

/// Materialize the grid-duel roster for one parameter vector, one bot per
/// strategy in declaration order.
inline std::vector<warfare::BotConfig> bind_roster(
    const ExperimentConfig& cfg, const ParameterVector& theta) {
  if (cfg.game != GameKind::Warfare) {
    throw StateError("bind_roster applies only to grid-duel games");
  }
  if (theta.size() != cfg.params.size()) {
    throw BoundsError("parameter vector arity mismatch: got " +
                      std::to_string(theta.size()) + ", expected " +
                      std::to_string(cfg.params.size()));
  }
  std::vector<warfare::BotConfig> roster;
  roster.reserve(cfg.strategies.size());
  for (const std::string& label : cfg.strategies) {
    warfare::BotConfig bot;
    bot.kind = strategy_kind(cfg, label);
    const std::string prefix = label + ".";
    for (std::size_t k = 0; k < cfg.params.size(); ++k) {
      const std::string& name = cfg.params[k].name;
      if (name.rfind(prefix, 0) != 0) continue;
      detail::set_bot_field(bot, name.substr(prefix.size()),
                            static_cast<int>(std::llround(theta[k])));
    }
    warfare::validate(bot);
    roster.push_back(bot);
  }
  return roster;
}

namespace detail {

inline void validate_warfare_params(const ExperimentConfig& cfg) {
  // Every slot of every strategy's kind must be bound exactly once, there
  // must be nothing else, and the declared bounds must be values the
  // engine accepts (checked by probing a bot at each extreme).
  std::set<std::string> expected;
  for (const std::string& label : cfg.strategies) {
    for (const std::string& field : kind_fields(strategy_kind(cfg, label))) {
      expected.insert(label + "." + field);
    }
  }
  std::set<std::string> seen;
  for (const ParamRow& row : cfg.params) {
    if (!expected.count(row.name)) {
      throw ConfigError("param '" + row.name +
                        "' does not name a bot parameter slot");
    }
    if (!seen.insert(row.name).second) {
      throw ConfigError("param '" + row.name + "' is bound twice");
    }
    for (const std::optional<double>& v : {row.min, row.max, row.fixed}) {
      if (v && *v != std::floor(*v)) {
        throw ConfigError("param '" + row.name +
                          "' must use whole numbers, got " +
                          toml::format_float(*v));
      }
    }
  }
  for (const std::string& slot : expected) {
    if (!seen.count(slot)) {
      throw ConfigError("bot parameter slot '" + slot +
                        "' is not bound; add a [[param]] entry with a range "
                        "or a fixed value");
    }
  }
  // Probe the extremes of every bound so range errors surface at parse
  // time instead of abandoning trials later.
  for (const bool low : {true, false}) {
    ParameterVector probe;
    probe.reserve(cfg.params.size());
    for (const ParamRow& row : cfg.params) {
      probe.push_back(row.fixed ? *row.fixed : (low ? *row.min : *row.max));
    }
    try {
      bind_roster(cfg, probe);
    } catch (const BoundsError& e) {
      throw ConfigError(std::string("param bounds outside engine limits: ") +
                        e.what());
    }
  }
}

inline std::vector<ParamRow> read_params(const toml::Document& doc) {
  std::vector<ParamRow> rows;
  const auto it = doc.arrays.find("param");
  if (it == doc.arrays.end()) return rows;
  for (const Table& t : it->second) {
    TableReader r(t, "param");
    ParamRow row;
    const std::optional<std::string> name = r.string_opt("name");
    if (!name) fail(t.line, "param needs a name");
    row.name = *name;
    row.min = r.number_opt("min");
    row.max = r.number_opt("max");
    row.fixed = r.number_opt("fixed");
    r.finish();
    const bool has_range = row.min.has_value() || row.max.has_value();
    if (row.fixed && has_range) {
      fail(t.line, "param '" + row.name +
                       "' must use either min/max or fixed, not both");
    }
    if (!row.fixed) {
      if (!row.min || !row.max) {
        fail(t.line, "param '" + row.name + "' needs both min and max");
      }
      if (!(*row.min <= *row.max)) {
        fail(t.line, "param '" + row.name + "': min must be <= max");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<TargetEdge> read_edges(const toml::Document& doc) {
  std::vector<TargetEdge> edges;
  const auto it = doc.arrays.find("edge");
  if (it == doc.arrays.end()) return edges;
  for (const Table& t : it->second) {
    TableReader r(t, "edge");
    TargetEdge e;
    const std::optional<std::string> from = r.string_opt("from");
    const std::optional<std::string> to = r.string_opt("to");
    if (!from || !to) fail(t.line, "edge needs both from and to");
    e.from = *from;
    e.to = *to;
    e.winrate = r.number_or("winrate", 0.5);
    r.finish();
    edges.push_back(std::move(e));
  }
  return edges;
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text) {
  const toml::Document doc = toml::parse(text);
  ExperimentConfig cfg;

  // Only these table paths may appear; [[edge]] and [[param]] are the only
  // arrays of tables.
  for (const auto& [path, table] : doc.tables) {
    static const std::set<std::string> known = {
        "kinds", "optimizer", "balance", "eval", "agents", "agents.rewards"};
    if (!known.count(path)) {
      detail::fail(table.line, "unknown table [" + path + "]");
    }
  }
  for (const auto& [path, tables] : doc.arrays) {
    if (path != "edge" && path != "param") {
      detail::fail(tables.front().line, "unknown table [[" + path + "]]");
    }
  }

  detail::TableReader root(doc.root, "");
  const std::optional<std::string> game = root.string_opt("game");
  if (!game) throw ConfigError("missing required key: game");
  if (*game == "normal-form") {
    cfg.game = GameKind::NormalForm;
  } else if (*game == "warfare") {
    cfg.game = GameKind::Warfare;
  } else {
    throw ConfigError("game must be \"normal-form\" or \"warfare\", got \"" +
                      *game + "\"");
  }
  cfg.output_dir = root.string_or("output_dir", "out");
  cfg.strategies = root.string_array("strategies");
  root.finish();

  if (cfg.strategies.size() < 2) {
    throw ConfigError("strategies must list at least two names");
  }
  {
    std::set<std::string> unique;
    for (const std::string& s : cfg.strategies) {
      if (s.empty()) throw ConfigError("strategy names must not be empty");
      if (!unique.insert(s).second) {
        throw ConfigError("duplicate strategy name: " + s);
      }
    }
  }

  if (doc.tables.count("kinds")) {
    if (cfg.game != GameKind::Warfare) {
      detail::fail(doc.tables.at("kinds").line,
                   "[kinds] applies only to warfare games");
    }
    const detail::Table& t = doc.tables.at("kinds");
    for (const auto& [key, value] : t.entries) {
      if (std::find(cfg.strategies.begin(), cfg.strategies.end(), key) ==
          cfg.strategies.end()) {
        detail::fail(value.line, "[kinds] names unknown strategy '" + key + "'");
      }
      if (value.kind != toml::Value::Kind::String) {
        detail::fail(value.line, "kinds." + key + " must be a string");
      }
      cfg.kinds[key] = value.str;
    }
  }

  cfg.edges = detail::read_edges(doc);
  cfg.params = detail::read_params(doc);

  {
    detail::TableReader opt(detail::table_or_empty(doc, "optimizer"),
                            "optimizer");
    const std::string backend = opt.string_or("backend", "tpe");
    if (backend == "tpe") {
      cfg.backend = BackendKind::Tpe;
    } else if (backend == "random") {
      cfg.backend = BackendKind::Random;
    } else {
      throw ConfigError("optimizer.backend must be \"tpe\" or \"random\"");
    }
    const std::int64_t seed = opt.integer_or("seed", 0);
    if (seed < 0) throw ConfigError("optimizer.seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);
    TpeConfig defaults;
    cfg.tpe.n_startup =
        static_cast<int>(opt.integer_or("n_startup", defaults.n_startup));
    cfg.tpe.gamma = opt.number_or("gamma", defaults.gamma);
    cfg.tpe.good_cap =
        static_cast<int>(opt.integer_or("good_cap", defaults.good_cap));
    cfg.tpe.n_candidates = static_cast<int>(
        opt.integer_or("n_candidates", defaults.n_candidates));
    cfg.tpe.bandwidth_floor =
        opt.number_or("bandwidth_floor", defaults.bandwidth_floor);
    opt.finish();
    validate(cfg.tpe);
  }

  {
    detail::TableReader bal(detail::table_or_empty(doc, "balance"), "balance");
    BalanceConfig defaults;
    cfg.balance.epsilon = bal.number_or("epsilon", defaults.epsilon);
    cfg.balance.max_iterations =
        bal.integer_or("max_iterations", defaults.max_iterations);
    cfg.balance.parallel_width = static_cast<int>(
        bal.integer_or("parallel_width", defaults.parallel_width));
    const std::string metric = bal.string_or("metric", "mse");
    if (metric == "mse") {
      cfg.metric = DistanceMetric::MeanSquared;
    } else if (metric == "mae") {
      cfg.metric = DistanceMetric::MeanAbsolute;
    } else {
      throw ConfigError("balance.metric must be \"mse\" or \"mae\"");
    }
    cfg.balance.initial_theta = bal.number_array_opt("initial_theta");
    bal.finish();
    validate(cfg.balance);
  }

  const bool warfare_game = cfg.game == GameKind::Warfare;
  if (!warfare_game) {
    for (const char* path : {"eval", "agents", "agents.rewards"}) {
      if (doc.tables.count(path)) {
        detail::fail(doc.tables.at(path).line,
                     std::string("[") + path +
                         "] applies only to warfare games");
      }
    }
  } else {
    detail::TableReader ev(detail::table_or_empty(doc, "eval"), "eval");
    evalmat::EvalConfig defaults;
    cfg.eval.games_per_matchup = static_cast<int>(
        ev.integer_or("games_per_matchup", defaults.games_per_matchup));
    cfg.eval.tick_limit =
        static_cast<int>(ev.integer_or("tick_limit", defaults.tick_limit));
    cfg.eval.exploit_symmetry =
        ev.bool_or("exploit_symmetry", defaults.exploit_symmetry);
    ev.finish();

    detail::TableReader agent(detail::table_or_empty(doc, "agents"), "agents");
    const std::string kind = agent.string_or("kind", "mcts");
    if (kind == "mcts") {
      cfg.eval.agent.kind = agents::AgentKind::Mcts;
    } else if (kind == "random") {
      cfg.eval.agent.kind = agents::AgentKind::Random;
    } else {
      throw ConfigError("agents.kind must be \"mcts\" or \"random\"");
    }
    agents::AgentConfig adef;
    cfg.eval.agent.budget =
        static_cast<int>(agent.integer_or("budget", adef.budget));
    cfg.eval.agent.uct_c = agent.number_or("uct_c", adef.uct_c);
    cfg.eval.agent.rollout_depth = static_cast<int>(
        agent.integer_or("rollout_depth", adef.rollout_depth));
    agent.finish();

    detail::TableReader rw(detail::table_or_empty(doc, "agents.rewards"),
                           "agents.rewards");
    agents::RewardWeights rdef;
    cfg.eval.rewards.distance_penalty =
        rw.number_or("distance_penalty", rdef.distance_penalty);
    cfg.eval.rewards.damage_scale =
        rw.number_or("damage_scale", rdef.damage_scale);
    cfg.eval.rewards.win_score = rw.number_or("win_score", rdef.win_score);
    rw.finish();

    cfg.eval.base_seed = 0;
    validate(cfg.eval);
  }

  // Game-specific parameter checks, then realize the space and the target
  // once so every structural error surfaces here.
  if (warfare_game) {
    for (const auto& [label, kind_name] : cfg.kinds) {
      detail::parse_kind(kind_name, doc.tables.at("kinds").line);
    }
    for (const std::string& label : cfg.strategies) {
      strategy_kind(cfg, label);  // throws for unresolvable labels
    }
    detail::validate_warfare_params(cfg);
  } else {
    std::set<std::string> seen;
    for (const ParamRow& row : cfg.params) {
      if (!seen.insert(row.name).second) {
        throw ConfigError("param '" + row.name + "' is bound twice");
      }
    }
  }
  ParameterSpace space = parameter_space(cfg);
  if (cfg.balance.initial_theta) {
    space.validate(*cfg.balance.initial_theta);
  }
  target_winrate_matrix(cfg.target());

  return cfg;
}

// ---------------------------------------------------------------------------
// Canonical serialization

namespace detail {

inline std::string format_number(double v) {
  // Whole numbers in integer-typed slots read back as integers; both parse
  // into the same double, so the round-trip stays exact.
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    return toml::format_integer(static_cast<std::int64_t>(v));
  }
  return toml::format_float(v);
}

}  // namespace detail

inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  const bool warfare_game = cfg.game == GameKind::Warfare;
  out += "game = ";
  out += warfare_game ? "\"warfare\"" : "\"normal-form\"";
  out += "\noutput_dir = " + toml::escape(cfg.output_dir);
  out += "\nstrategies = [";
  for (std::size_t i = 0; i < cfg.strategies.size(); ++i) {
    if (i) out += ", ";
    out += toml::escape(cfg.strategies[i]);
  }
  out += "]\n";

  if (!cfg.kinds.empty()) {
    out += "\n[kinds]\n";
    for (const auto& [label, kind] : cfg.kinds) {
      out += label + " = " + toml::escape(kind) + "\n";
    }
  }

  for (const TargetEdge& e : cfg.edges) {
    out += "\n[[edge]]\n";
    out += "from = " + toml::escape(e.from) + "\n";
    out += "to = " + toml::escape(e.to) + "\n";
    out += "winrate = " + toml::format_float(e.winrate) + "\n";
  }

  for (const ParamRow& row : cfg.params) {
    out += "\n[[param]]\n";
    out += "name = " + toml::escape(row.name) + "\n";
    if (row.fixed) {
      out += "fixed = " + detail::format_number(*row.fixed) + "\n";
    } else {
      out += "min = " + detail::format_number(*row.min) + "\n";
      out += "max = " + detail::format_number(*row.max) + "\n";
    }
  }

  out += "\n[optimizer]\n";
  out += std::string("backend = ") +
         (cfg.backend == BackendKind::Tpe ? "\"tpe\"" : "\"random\"") + "\n";
  out += "seed = " + std::to_string(cfg.seed) + "\n";
  out += "n_startup = " + toml::format_integer(cfg.tpe.n_startup) + "\n";
  out += "gamma = " + toml::format_float(cfg.tpe.gamma) + "\n";
  out += "good_cap = " + toml::format_integer(cfg.tpe.good_cap) + "\n";
  out += "n_candidates = " + toml::format_integer(cfg.tpe.n_candidates) + "\n";
  out += "bandwidth_floor = " + toml::format_float(cfg.tpe.bandwidth_floor) +
         "\n";

  out += "\n[balance]\n";
  out += "epsilon = " + toml::format_float(cfg.balance.epsilon) + "\n";
  out += "max_iterations = " +
         std::to_string(cfg.balance.max_iterations) + "\n";
  out += "parallel_width = " +
         toml::format_integer(cfg.balance.parallel_width) + "\n";
  out += std::string("metric = ") +
         (cfg.metric == DistanceMetric::MeanSquared ? "\"mse\"" : "\"mae\"") +
         "\n";
  if (cfg.balance.initial_theta) {
    out += "initial_theta = [";
    for (std::size_t i = 0; i < cfg.balance.initial_theta->size(); ++i) {
      if (i) out += ", ";
      out += toml::format_float((*cfg.balance.initial_theta)[i]);
    }
    out += "]\n";
  }

  if (warfare_game) {
    out += "\n[eval]\n";
    out += "games_per_matchup = " +
           toml::format_integer(cfg.eval.games_per_matchup) + "\n";
    out += "tick_limit = " + toml::format_integer(cfg.eval.tick_limit) + "\n";
    out += std::string("exploit_symmetry = ") +
           toml::format_bool(cfg.eval.exploit_symmetry) + "\n";

    out += "\n[agents]\n";
    out += std::string("kind = ") +
           (cfg.eval.agent.kind == agents::AgentKind::Mcts ? "\"mcts\""
                                                           : "\"random\"") +
           "\n";
    out += "budget = " + toml::format_integer(cfg.eval.agent.budget) + "\n";
    out += "uct_c = " + toml::format_float(cfg.eval.agent.uct_c) + "\n";
    out += "rollout_depth = " +
           toml::format_integer(cfg.eval.agent.rollout_depth) + "\n";

    out += "\n[agents.rewards]\n";
    out += "distance_penalty = " +
           toml::format_float(cfg.eval.rewards.distance_penalty) + "\n";
    out += "damage_scale = " +
           toml::format_float(cfg.eval.rewards.damage_scale) + "\n";
    out += "win_score = " + toml::format_float(cfg.eval.rewards.win_score) +
           "\n";
  }

  return out;
}

}  // namespace metabalance::config
