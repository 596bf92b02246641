#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <vector>

#include "metabalance/errors.hpp"
#include "metabalance/metagame.hpp"
#include "metabalance/optimize.hpp"

namespace metabalance {

struct BalanceConfig {
  /// Converged once a trial's loss drops strictly below this.
  double epsilon = 0.0;
  /// Hard cap on the number of trials.
  std::int64_t max_iterations = 100;
  /// Trials evaluated concurrently per wave.
  int parallel_width = 6;
  /// Optional designer guess evaluated as trial 0.
  std::optional<ParameterVector> initial_theta;

  bool operator==(const BalanceConfig&) const = default;
};

inline void validate(const BalanceConfig& c) {
  if (!(c.epsilon >= 0.0)) throw BoundsError("epsilon must be >= 0");
  if (c.max_iterations < 1) throw BoundsError("max_iterations must be >= 1");
  if (c.parallel_width < 1) throw BoundsError("parallel_width must be >= 1");
}

/// One line of the optimization log. iteration counts individual trials and
/// therefore equals trial_id; both are kept because the log format lists
/// both columns.
struct ProgressionRow {
  std::int64_t iteration = 0;
  std::int64_t trial_id = 0;
  /// +infinity when the evaluation failed and the trial was skipped.
  double loss = std::numeric_limits<double>::infinity();
  /// Lowest completed loss up to and including this row; never increases.
  double best_loss = std::numeric_limits<double>::infinity();

  bool operator==(const ProgressionRow&) const = default;
};

struct BalanceResult {
  ParameterVector best_theta;
  double best_loss = std::numeric_limits<double>::infinity();
  std::vector<ProgressionRow> progression;
  bool converged = false;
};

/// Maps a candidate parameter vector to its empirical response graph. The
/// trial id lets simulation-backed evaluators derive a per-trial seed so
/// reruns and resumes reproduce byte-identical results.
using GraphEvaluator =
    std::function<ResponseGraph(std::int64_t trial_id,
                                const ParameterVector& theta)>;

/// Called once per trial, in trial order. The graph pointer is null when
/// the evaluation failed.
using BalanceObserver =
    std::function<void(const ProgressionRow&, const ResponseGraph*)>;

/// Called at every wave boundary (all issued trials resolved) — the safe
/// moment to persist a checkpoint.
using WaveHook = std::function<void(const Optimizer&,
                                    const std::vector<ProgressionRow>&)>;

/// The balancing loop: ask a wave of candidates, evaluate their response
/// graphs concurrently, score each against the declared target, and feed
/// the losses back — until a loss beats epsilon or the trial budget is
/// spent. A failed or non-finite evaluation abandons its trial and logs a
/// +infinity sentinel instead of aborting the run. Works on a fresh
/// optimizer or one restored mid-run; max_iterations counts total trials
/// including restored ones.
inline BalanceResult balance(Optimizer& opt, const TargetGraph& target,
                             const GraphEvaluator& evaluator,
                             DistanceMetric metric, const BalanceConfig& cfg,
                             const BalanceObserver& observer = {},
                             const WaveHook& wave_hook = {}) {
  validate(cfg);
  if (!evaluator) throw StateError("balance requires an evaluator");
  const ResponseGraph target_rg = target_to_response_graph(target);

  if (cfg.initial_theta && opt.history().empty() && opt.queued().empty()) {
    opt.enqueue(*cfg.initial_theta);
  }

  double best_loss = std::numeric_limits<double>::infinity();
  if (auto b = opt.best()) best_loss = b->loss;
  bool converged = best_loss < cfg.epsilon;

  BalanceResult result;
  while (!converged &&
         static_cast<std::int64_t>(opt.history().size()) <
             cfg.max_iterations) {
    const std::int64_t remaining =
        cfg.max_iterations - static_cast<std::int64_t>(opt.history().size());
    const std::int64_t width =
        std::min<std::int64_t>(cfg.parallel_width, remaining);

    struct InFlight {
      std::int64_t id;
      std::future<ResponseGraph> graph;
    };
    std::vector<InFlight> wave;
    wave.reserve(static_cast<std::size_t>(width));
    for (std::int64_t k = 0; k < width; ++k) {
      const Trial& t = opt.ask();
      wave.push_back({t.id, std::async(std::launch::async, evaluator, t.id,
                                       t.theta)});
    }

    for (InFlight& f : wave) {
      ProgressionRow row;
      row.iteration = f.id;
      row.trial_id = f.id;
      std::optional<ResponseGraph> graph;
      double loss = std::numeric_limits<double>::quiet_NaN();
      try {
        graph = f.graph.get();
        loss = graph_distance(*graph, target_rg, metric);
      } catch (const StructureError&) {
        throw;  // label mismatch is systematic, not a transient failure
      } catch (const std::exception&) {
        graph.reset();
      }
      if (graph && std::isfinite(loss)) {
        opt.tell(f.id, loss);
        if (loss < best_loss) best_loss = loss;
        if (loss < cfg.epsilon) converged = true;
        row.loss = loss;
      } else {
        opt.abandon(f.id);
      }
      row.best_loss = best_loss;
      result.progression.push_back(row);
      if (observer) observer(row, graph ? &*graph : nullptr);
    }
    if (wave_hook) wave_hook(opt, result.progression);
  }

  if (auto b = opt.best()) {
    result.best_theta = b->theta;
    result.best_loss = b->loss;
  }
  result.converged = converged;
  return result;
}

}  // namespace metabalance
