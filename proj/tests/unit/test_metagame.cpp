#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "metabalance/metagame.hpp"
#include "metabalance/rng.hpp"

using namespace metabalance;

namespace {

// Random valid win-rate matrix: w(i,j) in [0,1], w(i,j) + w(j,i) == 1.
SquareMatrix random_winrates(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SquareMatrix w(n, 0.5);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = u(rng);
      w(i, j) = v;
      w(j, i) = 1.0 - v;
    }
  }
  return w;
}

ResponseGraph random_graph(const std::vector<std::string>& labels, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0);
  ResponseGraph g{labels, SquareMatrix(labels.size())};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) {
      g.weights(i, j) = u(rng);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("splitmix64 matches the published reference sequence") {
  // First three outputs for seed 0 of the canonical generator.
  std::uint64_t state = 0;
  CHECK(splitmix64(state) == 0xE220A8397B1DCDAFULL);
  CHECK(splitmix64(state) == 0x6E789E6AA1B965F4ULL);
  CHECK(splitmix64(state) == 0x06C45D188009454FULL);
}

TEST_CASE("derive_seed separates streams by tag") {
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0, 1) != derive_seed(42, 1, 0));
  CHECK(derive_seed(42, 3, 7) == derive_seed(42, 3, 7));
  CHECK(derive_seed(42, 3, 7) != derive_seed(43, 3, 7));

  // No collisions across a modest tag grid for one base seed.
  std::vector<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 32; ++a) {
    for (std::uint64_t b = 0; b < 32; ++b) {
      seen.push_back(derive_seed(1234, a, b));
    }
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("response graph keeps positive payoffs and drops the rest") {
  EvaluationMatrix eval{{"a", "b"}, {{1.0, -2.0}, {2.0, -1.0}}};
  ResponseGraph g = response_graph(eval);
  CHECK(g.weights == SquareMatrix{{1.0, 0.0}, {2.0, 0.0}});
  CHECK(g.labels == std::vector<std::string>{"a", "b"});
}

TEST_CASE("response graph is identity on non-negative matrices") {
  Rng rng = make_rng(7);
  ResponseGraph g = random_graph({"a", "b", "c", "d"}, rng);
  ResponseGraph again = response_graph(EvaluationMatrix{g.labels, g.weights});
  CHECK(again.weights == g.weights);
}

TEST_CASE("graph distance on a worked pair") {
  ResponseGraph a{{"x", "y"}, {{0.0, 0.2}, {0.0, 0.0}}};
  ResponseGraph zeros{{"x", "y"}, SquareMatrix(2)};
  // One differing edge of 0.2 over 4 ordered pairs.
  CHECK(graph_distance(a, zeros, DistanceMetric::MeanSquared) ==
        Catch::Approx(0.01).margin(1e-15));
  CHECK(graph_distance(a, zeros, DistanceMetric::MeanAbsolute) ==
        Catch::Approx(0.05).margin(1e-15));

  ResponseGraph b{{"x", "y"}, {{0.0, 0.0}, {0.3, 0.0}}};
  // |0.2| + |-0.3| over 4 ordered pairs; squares 0.04 + 0.09 over 4.
  CHECK(graph_distance(a, b, DistanceMetric::MeanAbsolute) ==
        Catch::Approx(0.125).margin(1e-15));
  CHECK(graph_distance(a, b, DistanceMetric::MeanSquared) ==
        Catch::Approx(0.0325).margin(1e-15));
}

TEST_CASE("the classic three-way cycle drops to its winning edges") {
  EvaluationMatrix rps{{"r", "p", "s"},
                       {{0.0, -1.0, 1.0}, {1.0, 0.0, -1.0}, {-1.0, 1.0, 0.0}}};
  CHECK(response_graph(rps).weights == SquareMatrix{{0.0, 0.0, 1.0},
                                                    {1.0, 0.0, 0.0},
                                                    {0.0, 1.0, 0.0}});
}

TEST_CASE("graph distance is a symmetric premetric") {
  Rng rng = make_rng(11);
  const std::vector<std::string> labels{"a", "b", "c"};
  for (int rep = 0; rep < 50; ++rep) {
    ResponseGraph g1 = random_graph(labels, rng);
    ResponseGraph g2 = random_graph(labels, rng);
    for (auto metric :
         {DistanceMetric::MeanAbsolute, DistanceMetric::MeanSquared}) {
      CHECK(graph_distance(g1, g1, metric) == 0.0);
      CHECK(graph_distance(g1, g2, metric) ==
            Catch::Approx(graph_distance(g2, g1, metric)).margin(1e-15));
      if (g1.weights != g2.weights) {
        CHECK(graph_distance(g1, g2, metric) > 0.0);
      }
    }
  }
}

TEST_CASE("mean squared distance scales quadratically, mean absolute linearly") {
  Rng rng = make_rng(13);
  const std::vector<std::string> labels{"a", "b", "c"};
  ResponseGraph base = random_graph(labels, rng);
  ResponseGraph near = base;
  ResponseGraph far = base;
  std::uniform_real_distribution<double> u(0.0, 0.25);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      const double delta = u(rng);
      near.weights(i, j) += delta;
      far.weights(i, j) += 2.0 * delta;
    }
  }
  const double mse1 = graph_distance(base, near, DistanceMetric::MeanSquared);
  const double mse2 = graph_distance(base, far, DistanceMetric::MeanSquared);
  CHECK(mse2 == Catch::Approx(4.0 * mse1).epsilon(1e-12));
  const double mae1 = graph_distance(base, near, DistanceMetric::MeanAbsolute);
  const double mae2 = graph_distance(base, far, DistanceMetric::MeanAbsolute);
  CHECK(mae2 == Catch::Approx(2.0 * mae1).epsilon(1e-12));
}

TEST_CASE("graph distance rejects mismatched strategies") {
  ResponseGraph a{{"x", "y"}, SquareMatrix(2)};
  ResponseGraph b{{"x", "z"}, SquareMatrix(2)};
  ResponseGraph c{{"x", "y", "z"}, SquareMatrix(3)};
  CHECK_THROWS_AS(graph_distance(a, b, DistanceMetric::MeanSquared),
                  StructureError);
  CHECK_THROWS_AS(graph_distance(a, c, DistanceMetric::MeanSquared),
                  StructureError);
  CHECK_THROWS_MATCHES(
      graph_distance(a, b, DistanceMetric::MeanSquared), StructureError,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("strategy 1")));
}

TEST_CASE("centering win rates produces an antisymmetric payoff matrix") {
  SquareMatrix w{{0.5, 0.7, 0.1}, {0.3, 0.5, 0.9}, {0.9, 0.1, 0.5}};
  EvaluationMatrix eval = center_winrates({"a", "b", "c"}, w);
  CHECK(eval.payoff(0, 1) == Catch::Approx(0.2).margin(1e-15));
  CHECK(eval.payoff(1, 0) == -eval.payoff(0, 1));  // exact
  CHECK(eval.payoff(0, 2) == Catch::Approx(-0.4).margin(1e-15));
  CHECK(eval.payoff(2, 0) == -eval.payoff(0, 2));
  for (std::size_t i = 0; i < 3; ++i) CHECK(eval.payoff(i, i) == 0.0);
}

TEST_CASE("centering rejects invalid win rates") {
  SquareMatrix out_of_range{{0.5, 1.2}, {-0.2, 0.5}};
  CHECK_THROWS_AS(center_winrates({"a", "b"}, out_of_range), BoundsError);
  SquareMatrix not_complementary{{0.5, 0.6}, {0.6, 0.5}};
  CHECK_THROWS_AS(center_winrates({"a", "b"}, not_complementary), BoundsError);
  SquareMatrix bad_diagonal{{0.4, 0.6}, {0.4, 0.5}};
  CHECK_THROWS_AS(center_winrates({"a", "b"}, bad_diagonal), BoundsError);
  SquareMatrix wrong_size{{0.5, 0.5}, {0.5, 0.5}};
  CHECK_THROWS_AS(center_winrates({"a", "b", "c"}, wrong_size),
                  StructureError);
}

TEST_CASE("a pure cycle of win rates becomes a cyclic response graph") {
  // a beats b, b beats c, c beats a, all decisively.
  SquareMatrix w{{0.5, 1.0, 0.0}, {0.0, 0.5, 1.0}, {1.0, 0.0, 0.5}};
  ResponseGraph g = response_graph_from_winrates({"a", "b", "c"}, w);
  CHECK(g.weights == SquareMatrix{{0.0, 0.5, 0.0},
                                  {0.0, 0.0, 0.5},
                                  {0.5, 0.0, 0.0}});
}

TEST_CASE("antisymmetric payoffs put weight on at most one edge direction") {
  Rng rng = make_rng(29);
  for (int rep = 0; rep < 20; ++rep) {
    SquareMatrix w = random_winrates(4, rng);
    EvaluationMatrix eval = center_winrates({"a", "b", "c", "d"}, w);
    REQUIRE(eval.zero_sum);
    ResponseGraph g = response_graph(eval);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK((g.weights(i, j) == 0.0 || g.weights(j, i) == 0.0));
      }
    }
  }
}

TEST_CASE("win rates survive the round trip through a response graph") {
  Rng rng = make_rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    SquareMatrix w = random_winrates(4, rng);
    ResponseGraph g = response_graph_from_winrates({"a", "b", "c", "d"}, w);
    SquareMatrix back = winrates_from_graph(g);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(back(i, j) == Catch::Approx(w(i, j)).margin(1e-12));
      }
    }
  }
}

TEST_CASE("an undeclared target is perfectly fair") {
  TargetGraph fair{{"torch", "nail", "saw"}, {}};
  ResponseGraph g = target_to_response_graph(fair);
  CHECK(g.weights == SquareMatrix(3, 0.0));
}

TEST_CASE("a declared even matchup adds no edge weight") {
  TargetGraph t{{"a", "b"}, {{"a", "b", 0.5}}};
  CHECK(target_to_response_graph(t).weights == SquareMatrix(2, 0.0));
}

TEST_CASE("a cyclic 70 percent target yields 0.2-weight edges") {
  TargetGraph t{{"torch", "nail", "saw"},
                {{"saw", "torch", 0.7},
                 {"torch", "nail", 0.7},
                 {"nail", "saw", 0.7}}};
  ResponseGraph g = target_to_response_graph(t);
  CHECK(g.weights(2, 0) == Catch::Approx(0.2).margin(1e-15));
  CHECK(g.weights(0, 1) == Catch::Approx(0.2).margin(1e-15));
  CHECK(g.weights(1, 2) == Catch::Approx(0.2).margin(1e-15));
  CHECK(g.weights(0, 2) == 0.0);
  CHECK(g.weights(1, 0) == 0.0);
  CHECK(g.weights(2, 1) == 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(g.weights(i, i) == 0.0);
}

TEST_CASE("reversing and complementing every target edge changes nothing") {
  Rng rng = make_rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<std::string> labels{"a", "b", "c", "d"};
  for (int rep = 0; rep < 25; ++rep) {
    TargetGraph t{labels, {}};
    TargetGraph reversed{labels, {}};
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (u(rng) < 0.5) continue;  // leave some pairs undeclared
        const double w = u(rng);
        t.edges.push_back({labels[i], labels[j], w});
        reversed.edges.push_back({labels[j], labels[i], 1.0 - w});
      }
    }
    // Equal up to rounding: the complement 1 - w is itself already rounded
    // before either graph is built, so bit-identity is unattainable.
    const SquareMatrix g1 = target_to_response_graph(t).weights;
    const SquareMatrix g2 = target_to_response_graph(reversed).weights;
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        CHECK(g1(i, j) == Catch::Approx(g2(i, j)).margin(1e-15));
      }
    }
  }
}

TEST_CASE("malformed targets are rejected") {
  CHECK_THROWS_AS(target_to_response_graph({{"a"}, {}}), StructureError);
  CHECK_THROWS_AS(target_to_response_graph({{"a", "a"}, {}}), StructureError);
  CHECK_THROWS_AS(
      target_to_response_graph({{"a", "b"}, {{"a", "z", 0.7}}}),
      StructureError);
  CHECK_THROWS_AS(target_to_response_graph({{"a", "b"}, {{"a", "a", 0.7}}}),
                  StructureError);
  CHECK_THROWS_AS(target_to_response_graph({{"a", "b"}, {{"a", "b", 1.2}}}),
                  BoundsError);
  CHECK_THROWS_AS(
      target_to_response_graph(
          {{"a", "b"}, {{"a", "b", 0.7}, {"a", "b", 0.7}}}),
      StructureError);
  CHECK_THROWS_AS(
      target_to_response_graph(
          {{"a", "b"}, {{"a", "b", 0.7}, {"b", "a", 0.4}}}),
      StructureError);
  // Consistent two-sided declaration is fine.
  CHECK_NOTHROW(target_to_response_graph(
      {{"a", "b"}, {{"a", "b", 0.7}, {"b", "a", 0.3}}}));
}

TEST_CASE("transposing win rates negates the centered payoffs") {
  Rng rng = make_rng(19);
  SquareMatrix w = random_winrates(5, rng);
  SquareMatrix wt(5);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) wt(i, j) = w(j, i);
  }
  const std::vector<std::string> labels{"a", "b", "c", "d", "e"};
  EvaluationMatrix e1 = center_winrates(labels, w);
  EvaluationMatrix e2 = center_winrates(labels, wt);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      // Equal up to rounding: the two matrices are centered independently.
      CHECK(e2.payoff(i, j) == Catch::Approx(-e1.payoff(i, j)).margin(1e-15));
    }
  }
}

TEST_CASE("parameter space validates its specs") {
  CHECK_THROWS_AS(ParameterSpace({{"x", 2.0, 1.0, false, {}}}), BoundsError);
  CHECK_THROWS_AS(
      ParameterSpace({{"x", 0.0, 1.0, false, {}}, {"x", 0.0, 1.0, false, {}}}),
      BoundsError);
  CHECK_THROWS_AS(ParameterSpace({{"x", 0.5, 2.5, true, {}}}), BoundsError);
  CHECK_THROWS_AS(ParameterSpace({{"x", 0.0, 1.0, false, 2.0}}), BoundsError);
  CHECK_THROWS_AS(ParameterSpace({{"", 0.0, 1.0, false, {}}}), BoundsError);
  CHECK_NOTHROW(ParameterSpace({{"x", 1.0, 6.0, true, 3.0}}));
}

TEST_CASE("parameter space validates vectors") {
  ParameterSpace space({{"hp", 1.0, 10.0, true, {}},
                        {"rate", 0.0, 1.0, false, {}},
                        {"pin", 0.0, 5.0, false, 2.5}});
  CHECK_NOTHROW(space.validate({4.0, 0.25, 2.5}));
  CHECK_THROWS_AS(space.validate({4.0, 0.25}), BoundsError);
  CHECK_THROWS_AS(space.validate({11.0, 0.25, 2.5}), BoundsError);
  CHECK_THROWS_AS(space.validate({4.5, 0.25, 2.5}), BoundsError);
  CHECK_THROWS_AS(space.validate({4.0, 0.25, 2.0}), BoundsError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(space.validate({4.0, nan, 2.5}), BoundsError);
}

TEST_CASE("clamping repairs out-of-range and non-integral vectors") {
  ParameterSpace space({{"hp", 1.0, 10.0, true, {}},
                        {"rate", 0.0, 1.0, false, {}},
                        {"pin", 0.0, 5.0, false, 2.5}});
  ParameterVector fixed = space.clamp({12.7, -0.5, 4.0});
  CHECK(fixed == ParameterVector{10.0, 0.0, 2.5});
  ParameterVector rounded = space.clamp({3.4, 0.5, 2.5});
  CHECK(rounded == ParameterVector{3.0, 0.5, 2.5});
  CHECK_NOTHROW(space.validate(fixed));
  CHECK_NOTHROW(space.validate(rounded));
}

TEST_CASE("sampling stays inside the box and honors integrality") {
  ParameterSpace space({{"hp", 1.0, 10.0, true, {}},
                        {"rate", 0.0, 1.0, false, {}},
                        {"pin", 0.0, 5.0, false, 2.5}});
  Rng rng = make_rng(23);
  bool saw_low = false;
  bool saw_high = false;
  for (int rep = 0; rep < 500; ++rep) {
    ParameterVector theta = space.sample(rng);
    CHECK_NOTHROW(space.validate(theta));
    if (theta[0] <= 3.0) saw_low = true;
    if (theta[0] >= 8.0) saw_high = true;
  }
  CHECK(saw_low);
  CHECK(saw_high);
}
