#pragma once

// Command implementations behind the CLI: wire a parsed experiment config
// into the balancing loop, stream progression rows as trials complete,
// persist resumable checkpoints at wave boundaries, and render the final
// win-rate reports. Pure string-in/string-out where possible so everything
// is testable without a process boundary.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metabalance/balance.hpp"
#include "metabalance/config.hpp"
#include "metabalance/errors.hpp"
#include "metabalance/evalmat.hpp"
#include "metabalance/metagame.hpp"
#include "metabalance/normal_form.hpp"
#include "metabalance/optimize.hpp"
#include "metabalance/rng.hpp"

namespace metabalance::runner {

// ---------------------------------------------------------------------------
// Formatting

/// Shortest decimal form that parses back to the same double ("inf" for
/// infinities); keeps every emitted CSV byte-deterministic.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof probe, "%.*g", prec, v);
    // strtod, not stod: stod throws on subnormals (ERANGE), strtod just
    // returns the rounded value.
    if (std::strtod(probe, nullptr) == v) {
      s = probe;
      break;
    }
  }
  return s;
}

inline std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  return buf;
}

// ---------------------------------------------------------------------------
// Files

inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StateError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw StateError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

struct RunPaths {
  std::filesystem::path progression;
  std::filesystem::path best_theta;
  std::filesystem::path report;
  std::filesystem::path checkpoint;
};

inline RunPaths run_paths(const std::string& output_dir) {
  const std::filesystem::path dir(output_dir);
  return {dir / "progression.csv", dir / "best_theta.csv",
          dir / "report.txt", dir / "checkpoint.json"};
}

// ---------------------------------------------------------------------------
// Evaluators

/// The per-trial evaluation seed: stream-tagged so it can never collide
/// with the optimizer's suggestion stream for the same run seed.
inline std::uint64_t trial_eval_seed(std::uint64_t run_seed,
                                     std::int64_t trial_id) {
  return derive_seed(run_seed, kStreamEval, static_cast<std::uint64_t>(trial_id));
}

inline GraphEvaluator make_evaluator(const config::ExperimentConfig& cfg,
                                     std::uint64_t run_seed) {
  if (cfg.game == config::GameKind::NormalForm) {
    return nf_evaluator(NormalFormSpec{cfg.strategies, parameter_space(cfg)});
  }
  return [cfg, run_seed](std::int64_t trial_id, const ParameterVector& theta) {
    evalmat::EvalConfig eval = cfg.eval;
    eval.base_seed = trial_eval_seed(run_seed, trial_id);
    const auto [wm, matrix] = evalmat::build_evaluation_matrix(
        config::bind_roster(cfg, theta), cfg.strategies, eval);
    return response_graph(matrix);
  };
}

// ---------------------------------------------------------------------------
// Progression CSV

/// One logged trial: the loop's row plus the win rates of the upper
/// matchup pairs ((0,1), (0,2), ..., in label order), absent for failed
/// evaluations.
struct LoggedRow {
  ProgressionRow row;
  std::optional<std::vector<double>> winrates;

  bool operator==(const LoggedRow&) const = default;
};

inline std::string progression_header(const std::vector<std::string>& labels) {
  std::string h = "iteration,trial_id,loss,best_loss";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      h += ",w_" + labels[i] + "_" + labels[j];
    }
  }
  h += "\n";
  return h;
}

inline std::vector<double> upper_winrates(const ResponseGraph& g) {
  const SquareMatrix w = winrates_from_graph(g);
  std::vector<double> out;
  out.reserve(w.size() * (w.size() - 1) / 2);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      out.push_back(w(i, j));
    }
  }
  return out;
}

inline std::string progression_line(const LoggedRow& lr, std::size_t n_pairs) {
  std::string s = std::to_string(lr.row.iteration) + "," +
                  std::to_string(lr.row.trial_id) + "," +
                  format_double(lr.row.loss) + "," +
                  format_double(lr.row.best_loss);
  for (std::size_t k = 0; k < n_pairs; ++k) {
    s += ",";
    if (lr.winrates) s += format_double((*lr.winrates)[k]);
  }
  s += "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Checkpoints

inline constexpr int kCheckpointFormat = 1;

inline nlohmann::json checkpoint_json(const std::string& config_text,
                                      std::uint64_t run_seed,
                                      const Optimizer& opt,
                                      const std::vector<LoggedRow>& rows) {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["config"] = config_text;
  j["run_seed"] = run_seed;
  nlohmann::json trials = nlohmann::json::array();
  for (const Trial& t : opt.history()) {
    nlohmann::json tj;
    tj["id"] = t.id;
    tj["theta"] = t.theta;
    switch (t.state) {
      case TrialState::Completed: tj["state"] = "completed"; break;
      case TrialState::Abandoned: tj["state"] = "abandoned"; break;
      case TrialState::Pending:
        throw StateError("cannot checkpoint a pending trial");
    }
    switch (t.origin) {
      case TrialOrigin::Uniform: tj["origin"] = "uniform"; break;
      case TrialOrigin::Model: tj["origin"] = "model"; break;
      case TrialOrigin::Enqueued: tj["origin"] = "enqueued"; break;
    }
    if (t.state == TrialState::Completed) tj["loss"] = t.loss;
    trials.push_back(std::move(tj));
  }
  j["trials"] = std::move(trials);
  nlohmann::json queued = nlohmann::json::array();
  for (const ParameterVector& theta : opt.queued()) queued.push_back(theta);
  j["queued"] = std::move(queued);
  nlohmann::json progression = nlohmann::json::array();
  for (const LoggedRow& lr : rows) {
    nlohmann::json rj;
    rj["iteration"] = lr.row.iteration;
    rj["trial_id"] = lr.row.trial_id;
    if (std::isfinite(lr.row.loss)) rj["loss"] = lr.row.loss;
    if (std::isfinite(lr.row.best_loss)) rj["best_loss"] = lr.row.best_loss;
    if (lr.winrates) rj["winrates"] = *lr.winrates;
    progression.push_back(std::move(rj));
  }
  j["progression"] = std::move(progression);
  return j;
}

struct RestoredRun {
  std::uint64_t run_seed = 0;
  std::string config_text;
  std::vector<Trial> history;
  std::deque<ParameterVector> queued;
  std::vector<LoggedRow> rows;
};

inline RestoredRun parse_checkpoint(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<int>() != kCheckpointFormat) {
      throw ConfigError("unsupported checkpoint format");
    }
    RestoredRun run;
    run.config_text = j.at("config").get<std::string>();
    run.run_seed = j.at("run_seed").get<std::uint64_t>();
    for (const nlohmann::json& tj : j.at("trials")) {
      Trial t;
      t.id = tj.at("id").get<std::int64_t>();
      t.theta = tj.at("theta").get<ParameterVector>();
      const std::string state = tj.at("state").get<std::string>();
      if (state == "completed") {
        t.state = TrialState::Completed;
        t.loss = tj.at("loss").get<double>();
      } else if (state == "abandoned") {
        t.state = TrialState::Abandoned;
      } else {
        throw ConfigError("unknown trial state: " + state);
      }
      const std::string origin = tj.at("origin").get<std::string>();
      if (origin == "uniform") {
        t.origin = TrialOrigin::Uniform;
      } else if (origin == "model") {
        t.origin = TrialOrigin::Model;
      } else if (origin == "enqueued") {
        t.origin = TrialOrigin::Enqueued;
      } else {
        throw ConfigError("unknown trial origin: " + origin);
      }
      run.history.push_back(std::move(t));
    }
    for (const nlohmann::json& q : j.at("queued")) {
      run.queued.push_back(q.get<ParameterVector>());
    }
    for (const nlohmann::json& rj : j.at("progression")) {
      LoggedRow lr;
      lr.row.iteration = rj.at("iteration").get<std::int64_t>();
      lr.row.trial_id = rj.at("trial_id").get<std::int64_t>();
      lr.row.loss = rj.contains("loss")
                        ? rj.at("loss").get<double>()
                        : std::numeric_limits<double>::infinity();
      lr.row.best_loss = rj.contains("best_loss")
                             ? rj.at("best_loss").get<double>()
                             : std::numeric_limits<double>::infinity();
      if (rj.contains("winrates")) {
        lr.winrates = rj.at("winrates").get<std::vector<double>>();
      }
      run.rows.push_back(std::move(lr));
    }
    return run;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed checkpoint: ") + e.what());
  }
}

/// Resuming may legitimately raise the trial budget or change the wave
/// width, but anything that alters what a trial means must match.
inline void check_resume_compatible(const config::ExperimentConfig& cfg,
                                    const RestoredRun& restored) {
  config::ExperimentConfig stored = config::parse_config(restored.config_text);
  config::ExperimentConfig current = cfg;
  stored.balance.max_iterations = current.balance.max_iterations;
  stored.balance.parallel_width = current.balance.parallel_width;
  if (!(stored == current)) {
    throw ConfigError(
        "checkpoint was produced by a different config; only "
        "balance.max_iterations and balance.parallel_width may change on "
        "resume");
  }
  if (cfg.seed != restored.run_seed) {
    throw ConfigError("checkpoint run seed " +
                      std::to_string(restored.run_seed) +
                      " does not match configured seed " +
                      std::to_string(cfg.seed));
  }
}

// ---------------------------------------------------------------------------
// Theta files

inline std::string serialize_theta(const ParameterSpace& space,
                                   const ParameterVector& theta) {
  space.validate(theta);
  std::string out = "parameter,value\n";
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    out += space.specs()[i].name + "," + format_double(theta[i]) + "\n";
  }
  return out;
}

inline ParameterVector parse_theta(const ParameterSpace& space,
                                   const std::string& text) {
  std::map<std::string, double> values;
  std::size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string line = nl == std::string::npos ? text.substr(start)
                                               : text.substr(start, nl - start);
    start = nl == std::string::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "parameter,value") {
        throw ConfigError("theta file must start with 'parameter,value'");
      }
      continue;
    }
    const std::size_t comma = line.rfind(',');
    if (comma == std::string::npos || comma == 0) {
      throw ConfigError("theta line " + std::to_string(line_no) +
                        ": expected 'name,value'");
    }
    const std::string name = line.substr(0, comma);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(line.substr(comma + 1), &used);
      if (used != line.size() - comma - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ConfigError("theta line " + std::to_string(line_no) +
                        ": bad value for " + name);
    }
    if (!values.emplace(name, value).second) {
      throw ConfigError("theta file sets " + name + " twice");
    }
  }
  ParameterVector theta;
  theta.reserve(space.dimension());
  for (const ParameterSpec& spec : space.specs()) {
    const auto it = values.find(spec.name);
    if (it == values.end()) {
      throw ConfigError("theta file is missing parameter " + spec.name);
    }
    theta.push_back(it->second);
    values.erase(it);
  }
  if (!values.empty()) {
    throw ConfigError("theta file names unknown parameter " +
                      values.begin()->first);
  }
  space.validate(theta);
  return theta;
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

inline std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

/// Aligned matrix of strings with row/column labels.
inline std::string render_grid(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<std::string>>& cells) {
  std::size_t w = 0;
  for (const std::string& l : labels) w = std::max(w, l.size());
  for (const auto& row : cells) {
    for (const std::string& c : row) w = std::max(w, c.size());
  }
  w += 2;
  std::string out = pad("", w);
  for (const std::string& l : labels) out += pad(l, w);
  out += "\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += pad(labels[i], w);
    for (const std::string& c : cells[i]) out += pad(c, w);
    out += "\n";
  }
  return out;
}

}  // namespace detail

/// Everything the evaluate command prints: the matchup matrix as aligned
/// text, a per-declared-pair target-vs-found table in win-rate percent,
/// the aggregate graph distance, and a machine-readable CSV twin.
struct EvaluationReport {
  std::string text;
  std::string csv;
  double distance = 0.0;
};

inline EvaluationReport render_evaluation_report(
    const config::ExperimentConfig& cfg, const SquareMatrix& winrates,
    const EvaluationMatrix& matrix) {
  const std::vector<std::string>& labels = cfg.strategies;
  const std::size_t n = labels.size();
  const bool warfare_game = cfg.game == config::GameKind::Warfare;
  const ResponseGraph found = response_graph(matrix);
  const ResponseGraph target = target_to_response_graph(cfg.target());
  const SquareMatrix target_w = target_winrate_matrix(cfg.target());
  const double distance = graph_distance(found, target, cfg.metric);

  std::string text;
  EvaluationReport report;

  // Matchup matrix.
  text += warfare_game ? "win rates (row vs column)\n"
                       : "payoffs (row vs column)\n";
  std::vector<std::vector<std::string>> cells(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cells[i].push_back(detail::fixed3(warfare_game ? winrates(i, j)
                                                     : matrix.payoff(i, j)));
    }
  }
  text += detail::render_grid(labels, cells);

  // 95% binomial confidence half-widths only make sense for simulated
  // win rates.
  if (warfare_game) {
    const double ng = cfg.eval.games_per_matchup;
    text += "\n95% confidence intervals (row vs column)\n";
    std::vector<std::vector<std::string>> ci(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) {
          ci[i].push_back("-");
          continue;
        }
        const double w = winrates(i, j);
        const double half = 1.96 * std::sqrt(w * (1.0 - w) / ng);
        ci[i].push_back(detail::fixed3(std::max(0.0, w - half)) + ".." +
                        detail::fixed3(std::min(1.0, w + half)));
      }
    }
    text += detail::render_grid(labels, ci);
  }

  // Target-vs-found table over the upper pairs, in win-rate percent.
  text += "\ntarget vs found (win-rate %)\n";
  text += "matchup              target   found    error\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double found_w =
          warfare_game ? winrates(i, j) : matrix.payoff(i, j) + 0.5;
      const double target_ww = target_w(i, j);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%-20s %-8s %-8s %s\n",
                    (labels[i] + " vs " + labels[j]).c_str(),
                    format_percent(target_ww).c_str(),
                    format_percent(found_w).c_str(),
                    format_percent(std::fabs(found_w - target_ww)).c_str());
      text += buf;
    }
  }

  const char* metric_name =
      cfg.metric == DistanceMetric::MeanSquared ? "mse" : "mae";
  text += "\ngraph distance (" + std::string(metric_name) +
          "): " + format_double(distance) + "\n";

  // CSV twin: one row per ordered matchup.
  std::string csv = warfare_game
                        ? "row,column,winrate,ci_low,ci_high\n"
                        : "row,column,payoff\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (warfare_game) {
        const double w = winrates(i, j);
        const double half =
            1.96 * std::sqrt(w * (1.0 - w) / cfg.eval.games_per_matchup);
        csv += labels[i] + "," + labels[j] + "," + format_double(w) + "," +
               format_double(std::max(0.0, w - half)) + "," +
               format_double(std::min(1.0, w + half)) + "\n";
      } else {
        csv += labels[i] + "," + labels[j] + "," +
               format_double(matrix.payoff(i, j)) + "\n";
      }
    }
  }

  report.text = std::move(text);
  report.csv = std::move(csv);
  report.distance = distance;
  return report;
}

/// Evaluate a parameter vector under the config's own evaluation settings.
/// Deterministic in (config, seed): the standalone command uses the eval
/// seed stream of trial 0.
inline EvaluationReport run_evaluate_command(
    const config::ExperimentConfig& cfg, const ParameterVector& theta) {
  const ParameterSpace space = config::parameter_space(cfg);
  space.validate(theta);
  if (cfg.game == config::GameKind::NormalForm) {
    const NormalFormSpec spec{cfg.strategies, space};
    const EvaluationMatrix matrix = nf_evaluation_matrix(spec, theta);
    // Payoff matrices may leave the [0,1] win-rate box, so the grid shows
    // payoffs; winrates are only used for the shared table maths.
    SquareMatrix w(cfg.strategies.size(), 0.5);
    return render_evaluation_report(cfg, w, matrix);
  }
  evalmat::EvalConfig eval = cfg.eval;
  eval.base_seed = trial_eval_seed(cfg.seed, 0);
  const auto [wm, matrix] = evalmat::build_evaluation_matrix(
      config::bind_roster(cfg, theta), cfg.strategies, eval);
  return render_evaluation_report(cfg, wm.w, matrix);
}

// ---------------------------------------------------------------------------
// The balance command

struct BalanceArtifacts {
  RunPaths paths;
  BalanceResult result;
  std::vector<LoggedRow> rows;
  std::int64_t best_trial_id = -1;
};

/// Messages about run progress go through this hook (the CLI prints them
/// to stderr so stdout stays machine-readable).
using LogSink = std::function<void(const std::string&)>;

inline BalanceArtifacts run_balance_command(
    const config::ExperimentConfig& cfg,
    const std::optional<std::string>& resume_checkpoint,
    const LogSink& log = {}) {
  const auto say = [&log](const std::string& msg) {
    if (log) log(msg);
  };
  const ParameterSpace space = config::parameter_space(cfg);
  const std::string config_text = config::serialize_config(cfg);
  const RunPaths paths = run_paths(cfg.output_dir);
  std::filesystem::create_directories(cfg.output_dir);

  std::vector<LoggedRow> rows;
  std::optional<Optimizer> opt;
  if (resume_checkpoint) {
    RestoredRun restored = parse_checkpoint(read_file(*resume_checkpoint));
    check_resume_compatible(cfg, restored);
    rows = std::move(restored.rows);
    opt.emplace(space, cfg.backend, cfg.tpe, restored.run_seed,
                std::move(restored.history), std::move(restored.queued));
    say("resumed " + std::to_string(opt->history().size()) + " trials from " +
        *resume_checkpoint);
  } else {
    opt.emplace(space, cfg.backend, cfg.tpe, cfg.seed);
  }

  const std::string header = progression_header(cfg.strategies);
  const std::size_t n = cfg.strategies.size();
  const std::size_t n_pairs = n * (n - 1) / 2;

  // Rows stream into a live side file as trials complete; the durable
  // progression.csv is written atomically at the end of the run.
  const std::filesystem::path live = paths.progression.string() + ".partial";
  std::ofstream stream(live, std::ios::binary | std::ios::trunc);
  if (!stream) throw StateError("cannot write " + live.string());
  stream << header;
  for (const LoggedRow& lr : rows) stream << progression_line(lr, n_pairs);
  stream.flush();

  const GraphEvaluator evaluator = make_evaluator(cfg, opt->seed());

  const BalanceObserver observer = [&](const ProgressionRow& row,
                                       const ResponseGraph* graph) {
    LoggedRow lr{row, std::nullopt};
    if (graph) lr.winrates = upper_winrates(*graph);
    stream << progression_line(lr, n_pairs);
    stream.flush();
    rows.push_back(std::move(lr));
    say("trial " + std::to_string(row.trial_id) + ": loss " +
        format_double(row.loss) + " (best " + format_double(row.best_loss) +
        ")");
  };
  const WaveHook wave_hook = [&](const Optimizer& o,
                                 const std::vector<ProgressionRow>&) {
    write_file_atomic(paths.checkpoint,
                      checkpoint_json(config_text, o.seed(), o, rows).dump(2) +
                          "\n");
  };

  BalanceArtifacts artifacts;
  artifacts.paths = paths;
  artifacts.result = balance(*opt, cfg.target(), evaluator, cfg.metric,
                             cfg.balance, observer, wave_hook);
  artifacts.rows = rows;

  const std::optional<Trial> best = opt->best();
  if (!best) {
    throw StateError(
        "no trial completed successfully; nothing to report. The progression "
        "log and checkpoint were still written for inspection.");
  }
  artifacts.best_trial_id = best->id;

  // Durable artifacts, all atomic: progression, checkpoint, best theta,
  // and the final report for the best parameters.
  std::string csv = header;
  for (const LoggedRow& lr : rows) csv += progression_line(lr, n_pairs);
  write_file_atomic(paths.progression, csv);
  stream.close();
  std::filesystem::remove(live);
  write_file_atomic(paths.checkpoint,
                    checkpoint_json(config_text, opt->seed(), *opt, rows)
                            .dump(2) +
                        "\n");
  write_file_atomic(paths.best_theta, serialize_theta(space, best->theta));

  const ResponseGraph best_graph = evaluator(best->id, best->theta);
  const SquareMatrix best_w = winrates_from_graph(best_graph);
  EvaluationMatrix best_matrix = center_winrates(cfg.strategies, best_w);
  EvaluationReport eval_report =
      render_evaluation_report(cfg, best_w, best_matrix);
  std::string report;
  report += "trials: " + std::to_string(opt->history().size()) + "\n";
  report += "best trial: " + std::to_string(best->id) + "\n";
  report += "best loss: " + format_double(artifacts.result.best_loss) + "\n";
  report += std::string("converged: ") +
            (artifacts.result.converged ? "yes" : "no") + "\n\n";
  report += eval_report.text;
  write_file_atomic(paths.report, report);

  say("best loss " + format_double(artifacts.result.best_loss) + " at trial " +
      std::to_string(best->id));
  return artifacts;
}

// ---------------------------------------------------------------------------
// The report command

struct ProgressionSummary {
  std::int64_t trials = 0;
  std::int64_t failures = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  std::int64_t best_iteration = -1;
  /// Plot-ready CSV: iteration,loss,best_loss with failed evaluations as
  /// empty loss cells.
  std::string csv;
};

inline ProgressionSummary aggregate_progression(const std::string& text) {
  ProgressionSummary sum;
  sum.csv = "iteration,loss,best_loss\n";
  std::size_t start = 0;
  int line_no = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string line = nl == std::string::npos ? text.substr(start)
                                               : text.substr(start, nl - start);
    start = nl == std::string::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line.rfind("iteration,trial_id,loss,best_loss", 0) != 0) {
        throw ConfigError(
            "not a progression CSV: header must start with "
            "'iteration,trial_id,loss,best_loss'");
      }
      continue;
    }
    std::vector<std::string> fields;
    std::size_t fs = 0;
    while (true) {
      const std::size_t comma = line.find(',', fs);
      fields.push_back(line.substr(fs, comma - fs));
      if (comma == std::string::npos) break;
      fs = comma + 1;
    }
    if (fields.size() < 4) {
      throw ConfigError("progression line " + std::to_string(line_no) +
                        ": expected at least 4 columns");
    }
    std::int64_t iteration = 0;
    double loss = 0.0;
    double best = 0.0;
    try {
      iteration = std::stoll(fields[0]);
      loss = std::stod(fields[2]);
      best = std::stod(fields[3]);
    } catch (const std::exception&) {
      throw ConfigError("progression line " + std::to_string(line_no) +
                        ": malformed numbers");
    }
    ++sum.trials;
    if (!std::isfinite(loss)) ++sum.failures;
    if (std::isfinite(loss) && loss < sum.best_loss) {
      sum.best_loss = loss;
      sum.best_iteration = iteration;
    }
    sum.csv += std::to_string(iteration) + ",";
    if (std::isfinite(loss)) sum.csv += format_double(loss);
    sum.csv += ",";
    if (std::isfinite(best)) sum.csv += format_double(best);
    sum.csv += "\n";
  }
  if (sum.trials == 0) throw ConfigError("progression CSV has no data rows");
  return sum;
}

}  // namespace metabalance::runner
