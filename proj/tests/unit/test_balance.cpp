#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "metabalance/balance.hpp"
#include "metabalance/normal_form.hpp"

using namespace metabalance;

namespace {

ParameterSpace pair_space() {
  return ParameterSpace(
      {{"x", -10.0, 10.0, false, {}}, {"y", -10.0, 10.0, false, {}}});
}

// Deterministic two-strategy evaluator: the win rate of a over b moves
// smoothly with x - y.
GraphEvaluator smooth_evaluator() {
  return [](std::int64_t, const ParameterVector& th) {
    const double w = std::clamp(0.5 + (th[0] - th[1]) / 40.0, 0.0, 1.0);
    SquareMatrix winrates{{0.5, w}, {1.0 - w, 0.5}};
    return response_graph_from_winrates({"a", "b"}, winrates);
  };
}

TargetGraph ab_target(double winrate) {
  return {{"a", "b"}, {{"a", "b", winrate}}};
}

}  // namespace

TEST_CASE("a single-iteration budget evaluates exactly one trial") {
  Optimizer opt(pair_space(), BackendKind::Random, TpeConfig{}, 1);
  BalanceConfig cfg;
  cfg.max_iterations = 1;
  cfg.epsilon = 1e-9;
  BalanceResult r =
      balance(opt, ab_target(0.7), smooth_evaluator(),
              DistanceMetric::MeanSquared, cfg);
  REQUIRE(r.progression.size() == 1);
  CHECK(r.progression[0].trial_id == 0);
  CHECK(r.best_loss == r.progression[0].loss);
  CHECK(r.converged == (r.best_loss < cfg.epsilon));
}

TEST_CASE("the designer's initial guess runs as trial zero") {
  Optimizer opt(pair_space(), BackendKind::Tpe, TpeConfig{}, 2);
  BalanceConfig cfg;
  cfg.max_iterations = 6;
  cfg.initial_theta = ParameterVector{4.0, -4.0};
  balance(opt, ab_target(0.7), smooth_evaluator(),
          DistanceMetric::MeanSquared, cfg);
  CHECK(opt.history()[0].theta == ParameterVector{4.0, -4.0});
  CHECK(opt.history()[0].origin == TrialOrigin::Enqueued);
}

TEST_CASE("best loss never increases along the progression") {
  Optimizer opt(pair_space(), BackendKind::Tpe, TpeConfig{}, 3);
  BalanceConfig cfg;
  cfg.max_iterations = 48;
  BalanceResult r = balance(opt, ab_target(0.7), smooth_evaluator(),
                            DistanceMetric::MeanSquared, cfg);
  REQUIRE(r.progression.size() == 48);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.progression.size(); ++i) {
    const ProgressionRow& row = r.progression[i];
    CHECK(row.trial_id == static_cast<std::int64_t>(i));
    CHECK(row.iteration == row.trial_id);
    CHECK(row.best_loss <= prev);
    CHECK(row.best_loss <= row.loss);
    prev = row.best_loss;
  }
  CHECK(r.best_loss == r.progression.back().best_loss);
}

TEST_CASE("convergence stops the loop at a wave boundary") {
  Optimizer opt(pair_space(), BackendKind::Random, TpeConfig{}, 4);
  BalanceConfig cfg;
  cfg.max_iterations = 100;
  cfg.parallel_width = 6;
  cfg.epsilon = 10.0;  // any finite loss converges immediately
  BalanceResult r = balance(opt, ab_target(0.5), smooth_evaluator(),
                            DistanceMetric::MeanSquared, cfg);
  CHECK(r.converged);
  CHECK(r.progression.size() == 6);  // the wave in flight still finishes
}

TEST_CASE("failed evaluations are skipped with a sentinel, not fatal") {
  Optimizer opt(pair_space(), BackendKind::Random, TpeConfig{}, 5);
  BalanceConfig cfg;
  cfg.max_iterations = 12;
  GraphEvaluator flaky = [](std::int64_t id, const ParameterVector& th) {
    if (id % 3 == 1) throw std::runtime_error("simulation crashed");
    return smooth_evaluator()(id, th);
  };
  std::vector<const ResponseGraph*> seen;
  int rows = 0;
  BalanceResult r = balance(
      opt, ab_target(0.7), flaky, DistanceMetric::MeanSquared, cfg,
      [&](const ProgressionRow& row, const ResponseGraph* g) {
        ++rows;
        if (row.trial_id % 3 == 1) {
          CHECK(std::isinf(row.loss));
          CHECK(g == nullptr);
        } else {
          CHECK(std::isfinite(row.loss));
          CHECK(g != nullptr);
        }
      });
  CHECK(rows == 12);
  CHECK(r.progression.size() == 12);
  for (const Trial& t : opt.history()) {
    CHECK(t.state == (t.id % 3 == 1 ? TrialState::Abandoned
                                    : TrialState::Completed));
  }
  CHECK(std::isfinite(r.best_loss));
}

TEST_CASE("a non-finite response graph counts as a failed evaluation") {
  Optimizer opt(pair_space(), BackendKind::Random, TpeConfig{}, 6);
  BalanceConfig cfg;
  cfg.max_iterations = 3;
  cfg.parallel_width = 1;
  GraphEvaluator nan_eval = [](std::int64_t, const ParameterVector&) {
    ResponseGraph g{{"a", "b"}, SquareMatrix(2, 0.0)};
    g.weights(0, 1) = std::nan("");
    return g;
  };
  BalanceResult r = balance(opt, ab_target(0.7), nan_eval,
                            DistanceMetric::MeanSquared, cfg);
  CHECK(!r.converged);
  CHECK(std::isinf(r.best_loss));
  for (const ProgressionRow& row : r.progression) {
    CHECK(std::isinf(row.loss));
  }
}

TEST_CASE("an evaluator with mismatched labels aborts the run") {
  Optimizer opt(pair_space(), BackendKind::Random, TpeConfig{}, 7);
  BalanceConfig cfg;
  cfg.max_iterations = 3;
  GraphEvaluator wrong = [](std::int64_t, const ParameterVector&) {
    return ResponseGraph{{"x", "y"}, SquareMatrix(2, 0.0)};
  };
  CHECK_THROWS_AS(balance(opt, ab_target(0.7), wrong,
                          DistanceMetric::MeanSquared, cfg),
                  StructureError);
}

TEST_CASE("configuration bounds are enforced") {
  Optimizer opt(pair_space(), BackendKind::Random, TpeConfig{}, 8);
  BalanceConfig cfg;
  cfg.epsilon = -1.0;
  CHECK_THROWS_AS(balance(opt, ab_target(0.7), smooth_evaluator(),
                          DistanceMetric::MeanSquared, cfg),
                  BoundsError);
  cfg = BalanceConfig{};
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(balance(opt, ab_target(0.7), smooth_evaluator(),
                          DistanceMetric::MeanSquared, cfg),
                  BoundsError);
  cfg = BalanceConfig{};
  cfg.parallel_width = 0;
  CHECK_THROWS_AS(balance(opt, ab_target(0.7), smooth_evaluator(),
                          DistanceMetric::MeanSquared, cfg),
                  BoundsError);
}

TEST_CASE("a run resumed from a wave boundary replays the original exactly") {
  BalanceConfig cfg;
  cfg.max_iterations = 36;
  cfg.parallel_width = 6;
  const TargetGraph target = ab_target(0.7);

  Optimizer full(pair_space(), BackendKind::Tpe, TpeConfig{}, 99);
  std::vector<Trial> snapshot;
  BalanceResult uninterrupted =
      balance(full, target, smooth_evaluator(), DistanceMetric::MeanSquared,
              cfg, {}, [&](const Optimizer& o, const auto&) {
                if (o.history().size() == 18) snapshot = o.history();
              });
  REQUIRE(snapshot.size() == 18);

  Optimizer restored(pair_space(), BackendKind::Tpe, TpeConfig{}, 99,
                     snapshot, {});
  BalanceResult resumed = balance(restored, target, smooth_evaluator(),
                                  DistanceMetric::MeanSquared, cfg);
  REQUIRE(resumed.progression.size() == 18);  // trials 18..35
  for (std::size_t i = 0; i < 18; ++i) {
    const ProgressionRow& a = uninterrupted.progression[18 + i];
    const ProgressionRow& b = resumed.progression[i];
    CHECK(a.trial_id == b.trial_id);
    CHECK(a.loss == b.loss);
    CHECK(a.best_loss == b.best_loss);
    CHECK(full.history()[18 + i].theta == restored.history()[18 + i].theta);
  }
  CHECK(uninterrupted.best_loss == resumed.best_loss);
  CHECK(uninterrupted.best_theta == resumed.best_theta);
}

TEST_CASE("balancing the payoff game onto a cyclic target converges") {
  NormalFormSpec spec = make_normal_form_spec({"R", "P", "S"});
  TargetGraph target{{"R", "P", "S"},
                     {{"P", "R", 1.0}, {"R", "S", 1.0}, {"S", "P", 1.0}}};
  Optimizer opt(spec.space, BackendKind::Tpe, TpeConfig{}, 12345);
  BalanceConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.max_iterations = 200;
  BalanceResult r = balance(opt, target, nf_evaluator(spec),
                            DistanceMetric::MeanSquared, cfg);
  CHECK(r.converged);
  CHECK(r.best_loss < 1e-3);
  // The winning direction of every pair must match the declared cycle.
  REQUIRE(r.best_theta.size() == 3);
  CHECK(r.best_theta[0] < 0.0);  // R loses to P
  CHECK(r.best_theta[1] > 0.0);  // R beats S
  CHECK(r.best_theta[2] < 0.0);  // P loses to S
}
