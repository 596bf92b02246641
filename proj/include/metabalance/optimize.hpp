#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "metabalance/errors.hpp"
#include "metabalance/metagame.hpp"
#include "metabalance/rng.hpp"
#include "metabalance/tpe.hpp"

namespace metabalance {

// Seed-stream tags. Every consumer of randomness derives its own engine
// from (base seed, stream, index), so adding a consumer never shifts the
// draws of another.
inline constexpr std::uint64_t kStreamAsk = 1;
inline constexpr std::uint64_t kStreamEval = 2;

enum class TrialState { Pending, Completed, Abandoned };
enum class TrialOrigin { Uniform, Model, Enqueued };

struct Trial {
  std::int64_t id = -1;
  ParameterVector theta;
  TrialState state = TrialState::Pending;
  TrialOrigin origin = TrialOrigin::Uniform;
  double loss = std::numeric_limits<double>::quiet_NaN();
};

enum class BackendKind { Random, Tpe };

/// Ask/tell optimizer over a parameter space. ask() hands out trials with
/// dense ids; tell() reports a loss; abandon() discards a trial that could
/// not be evaluated. Each ask derives a fresh engine from (seed, id), so
/// the suggestion stream depends only on the set of completed trials at ask
/// time, never on scheduling order.
class Optimizer {
 public:
  Optimizer(ParameterSpace space, BackendKind backend, TpeConfig config,
            std::uint64_t seed)
      : space_(std::move(space)),
        backend_(backend),
        sampler_(config),
        seed_(seed) {
    if (space_.dimension() == 0) {
      throw StructureError("parameter space must have at least one parameter");
    }
  }

  /// Restore a quiescent optimizer: every historical trial must be resolved
  /// (completed or abandoned) and ids must be dense from zero.
  Optimizer(ParameterSpace space, BackendKind backend, TpeConfig config,
            std::uint64_t seed, std::vector<Trial> history,
            std::deque<ParameterVector> queued)
      : Optimizer(std::move(space), backend, config, seed) {
    for (std::size_t i = 0; i < history.size(); ++i) {
      const Trial& t = history[i];
      if (t.id != static_cast<std::int64_t>(i)) {
        std::ostringstream msg;
        msg << "restored trial ids must be dense: position " << i << " holds id "
            << t.id;
        throw StructureError(msg.str());
      }
      if (t.state == TrialState::Pending) {
        throw StateError("cannot restore an optimizer with pending trials");
      }
      space_.validate(t.theta);
      if (t.state == TrialState::Completed) check_loss(t.loss);
    }
    for (const auto& theta : queued) space_.validate(theta);
    history_ = std::move(history);
    queue_ = std::move(queued);
  }

  const ParameterSpace& space() const { return space_; }
  BackendKind backend() const { return backend_; }
  const TpeConfig& config() const { return sampler_.config(); }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Trial>& history() const { return history_; }
  const std::deque<ParameterVector>& queued() const { return queue_; }

  std::size_t pending_count() const {
    std::size_t n = 0;
    for (const Trial& t : history_) n += t.state == TrialState::Pending;
    return n;
  }

  /// Queue a specific parameter vector; the next ask() returns it verbatim.
  void enqueue(ParameterVector theta) {
    space_.validate(theta);
    queue_.push_back(std::move(theta));
  }

  const Trial& ask() {
    Trial t;
    t.id = static_cast<std::int64_t>(history_.size());
    Rng rng = make_rng(
        derive_seed(seed_, kStreamAsk, static_cast<std::uint64_t>(t.id)));
    if (!queue_.empty()) {
      t.theta = std::move(queue_.front());
      queue_.pop_front();
      t.origin = TrialOrigin::Enqueued;
    } else if (backend_ == BackendKind::Random) {
      t.theta = space_.sample(rng);
      t.origin = TrialOrigin::Uniform;
    } else {
      Suggestion s = sampler_.suggest(space_, completed_observations(), rng);
      t.theta = std::move(s.theta);
      t.origin = s.from_model ? TrialOrigin::Model : TrialOrigin::Uniform;
    }
    history_.push_back(std::move(t));
    return history_.back();
  }

  void tell(std::int64_t id, double loss) {
    Trial& t = resolve(id);
    check_loss(loss);
    t.loss = loss;
    t.state = TrialState::Completed;
  }

  void abandon(std::int64_t id) {
    Trial& t = resolve(id);
    t.state = TrialState::Abandoned;
  }

  /// Completed trial with the lowest loss; earliest wins ties. Empty until
  /// the first tell().
  std::optional<Trial> best() const {
    std::optional<Trial> out;
    for (const Trial& t : history_) {
      if (t.state == TrialState::Completed && (!out || t.loss < out->loss)) {
        out = t;
      }
    }
    return out;
  }

 private:
  std::vector<Observation> completed_observations() const {
    std::vector<Observation> obs;
    obs.reserve(history_.size());
    for (const Trial& t : history_) {
      if (t.state == TrialState::Completed) {
        obs.push_back({t.theta, t.loss});
      }
    }
    return obs;
  }

  Trial& resolve(std::int64_t id) {
    if (id < 0 || id >= static_cast<std::int64_t>(history_.size())) {
      std::ostringstream msg;
      msg << "unknown trial id " << id;
      throw UnknownTrialError(msg.str());
    }
    Trial& t = history_[static_cast<std::size_t>(id)];
    if (t.state != TrialState::Pending) {
      std::ostringstream msg;
      msg << "trial " << id << " was already resolved";
      throw DoubleTellError(msg.str());
    }
    return t;
  }

  static void check_loss(double loss) {
    if (std::isnan(loss) || std::isinf(loss) || loss < 0.0) {
      std::ostringstream msg;
      msg << "loss must be finite and non-negative, got " << loss;
      throw InvalidLossError(msg.str());
    }
  }

  ParameterSpace space_;
  BackendKind backend_;
  TpeSampler sampler_;
  std::uint64_t seed_;
  std::vector<Trial> history_;
  std::deque<ParameterVector> queue_;
};

}  // namespace metabalance
