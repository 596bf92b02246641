#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "metabalance/errors.hpp"
#include "metabalance/matrix.hpp"
#include "metabalance/rng.hpp"

namespace metabalance {

// ---------------------------------------------------------------------------
// Parameter space
// ---------------------------------------------------------------------------

/// One tunable game parameter: a bounded scalar, optionally integer-valued,
/// optionally pinned to a fixed value (still part of the vector, but the
/// search never moves it).
struct ParameterSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  bool integer = false;
  std::optional<double> fixed;

  bool operator==(const ParameterSpec&) const = default;
};

using ParameterVector = std::vector<double>;

/// Ordered list of parameter specs defining the search domain.
class ParameterSpace {
 public:
  ParameterSpace() = default;

  explicit ParameterSpace(std::vector<ParameterSpec> specs)
      : specs_(std::move(specs)) {
    std::unordered_set<std::string> seen;
    for (const auto& s : specs_) {
      if (s.name.empty()) {
        throw BoundsError("parameter name must not be empty");
      }
      if (!seen.insert(s.name).second) {
        throw BoundsError("duplicate parameter name: " + s.name);
      }
      if (!(s.min <= s.max)) {
        throw BoundsError("parameter " + s.name + ": min must be <= max");
      }
      if (!std::isfinite(s.min) || !std::isfinite(s.max)) {
        throw BoundsError("parameter " + s.name + ": bounds must be finite");
      }
      if (s.integer &&
          (s.min != std::floor(s.min) || s.max != std::floor(s.max))) {
        throw BoundsError("parameter " + s.name +
                          ": integer parameter needs integer bounds");
      }
      if (s.fixed) {
        check_value(s, *s.fixed);
      }
    }
  }

  std::size_t dimension() const { return specs_.size(); }
  const std::vector<ParameterSpec>& specs() const { return specs_; }
  const ParameterSpec& spec(std::size_t i) const { return specs_.at(i); }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(specs_.size());
    for (const auto& s : specs_) out.push_back(s.name);
    return out;
  }

  /// Throws BoundsError unless theta has the right arity and every entry
  /// respects its bounds, integrality, and fixed pin.
  void validate(const ParameterVector& theta) const {
    if (theta.size() != specs_.size()) {
      std::ostringstream msg;
      msg << "parameter vector has " << theta.size() << " entries, expected "
          << specs_.size();
      throw BoundsError(msg.str());
    }
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      check_value(specs_[i], theta[i]);
    }
  }

  /// Clamp every coordinate into range, round integer coordinates to the
  /// nearest integer, and force fixed coordinates to their pinned value.
  ParameterVector clamp(ParameterVector theta) const {
    if (theta.size() != specs_.size()) {
      throw BoundsError("parameter vector arity mismatch in clamp");
    }
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      const auto& s = specs_[i];
      double v = theta[i];
      if (s.fixed) {
        v = *s.fixed;
      } else {
        v = std::min(std::max(v, s.min), s.max);
        if (s.integer) v = std::round(v);
      }
      theta[i] = v;
    }
    return theta;
  }

  /// Uniform sample from the box, honoring integrality and fixed pins.
  ParameterVector sample(Rng& rng) const {
    ParameterVector theta(specs_.size());
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      const auto& s = specs_[i];
      if (s.fixed) {
        theta[i] = *s.fixed;
      } else if (s.integer) {
        std::uniform_int_distribution<long long> d(
            static_cast<long long>(s.min), static_cast<long long>(s.max));
        theta[i] = static_cast<double>(d(rng));
      } else {
        std::uniform_real_distribution<double> d(s.min, s.max);
        theta[i] = d(rng);
      }
    }
    return theta;
  }

 private:
  static void check_value(const ParameterSpec& s, double v) {
    if (!std::isfinite(v)) {
      throw BoundsError("parameter " + s.name + ": value must be finite");
    }
    if (v < s.min || v > s.max) {
      std::ostringstream msg;
      msg << "parameter " << s.name << ": value " << v << " outside ["
          << s.min << ", " << s.max << "]";
      throw BoundsError(msg.str());
    }
    if (s.integer && v != std::floor(v)) {
      throw BoundsError("parameter " + s.name + ": value must be integral");
    }
    if (s.fixed && v != *s.fixed) {
      throw BoundsError("parameter " + s.name + ": pinned to fixed value");
    }
  }

  std::vector<ParameterSpec> specs_;
};

// ---------------------------------------------------------------------------
// Evaluation matrices and response graphs
// ---------------------------------------------------------------------------

/// Pairwise payoff matrix over n strategies. Entry (i, j) is the payoff of
/// strategy i against strategy j. When zero_sum is set the matrix is
/// antisymmetric: a_ij = -a_ji with a zero diagonal.
struct EvaluationMatrix {
  std::vector<std::string> labels;
  SquareMatrix payoff;
  bool zero_sum = false;
};

/// Weighted directed graph over the same strategies. Entry (i, j) is the
/// weight of the edge i -> j; all weights are non-negative.
struct ResponseGraph {
  std::vector<std::string> labels;
  SquareMatrix weights;
};

/// One designer-declared matchup outcome: `from` should beat `to` with the
/// given win rate.
struct TargetEdge {
  std::string from;
  std::string to;
  double winrate = 0.5;

  bool operator==(const TargetEdge&) const = default;
};

/// A designer-declared meta-game target: node names plus desired win rates
/// for any subset of ordered pairs. Pairs left undeclared default to an
/// even 50% matchup; declaring one direction implies the complement for the
/// other.
struct TargetGraph {
  std::vector<std::string> labels;
  std::vector<TargetEdge> edges;

  bool operator==(const TargetGraph&) const = default;
};

enum class DistanceMetric { MeanAbsolute, MeanSquared };

namespace detail {

inline void require_square(const std::vector<std::string>& labels,
                           const SquareMatrix& m, const char* what) {
  if (m.size() != labels.size()) {
    std::ostringstream msg;
    msg << what << ": " << labels.size() << " labels but matrix is "
        << m.size() << "x" << m.size();
    throw StructureError(msg.str());
  }
}

inline void require_same_labels(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  if (a.size() != b.size()) {
    std::ostringstream msg;
    msg << "graphs have different strategy counts: " << a.size() << " vs "
        << b.size();
    throw StructureError(msg.str());
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) {
      std::ostringstream msg;
      msg << "graphs disagree at strategy " << i << ": '" << a[i] << "' vs '"
          << b[i] << "'";
      throw StructureError(msg.str());
    }
  }
}

}  // namespace detail

/// Build the response graph of an evaluation matrix: positive payoffs become
/// edge weights, non-positive payoffs become absent (zero-weight) edges.
inline ResponseGraph response_graph(const EvaluationMatrix& eval) {
  detail::require_square(eval.labels, eval.payoff, "evaluation matrix");
  const std::size_t n = eval.payoff.size();
  ResponseGraph g{eval.labels, SquareMatrix(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      g.weights(i, j) = std::max(eval.payoff(i, j), 0.0);
    }
  }
  return g;
}

/// Distance between two response graphs over the same strategies:
/// mean absolute or mean squared difference of edge weights, averaged over
/// all n*n ordered pairs.
inline double graph_distance(const ResponseGraph& a, const ResponseGraph& b,
                             DistanceMetric metric) {
  detail::require_square(a.labels, a.weights, "response graph");
  detail::require_square(b.labels, b.weights, "response graph");
  detail::require_same_labels(a.labels, b.labels);
  const std::size_t n = a.weights.size();
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = a.weights(i, j) - b.weights(i, j);
      acc += metric == DistanceMetric::MeanAbsolute ? std::fabs(d) : d * d;
    }
  }
  return acc / static_cast<double>(n * n);
}

/// Turn a matrix of pairwise win rates into a zero-centered evaluation
/// matrix: payoff(i, j) = winrate(i, j) - 0.5, with the complementary pair
/// constructed exactly antisymmetric. Validates that every rate lies in
/// [0, 1] and that w(i, j) + w(j, i) == 1 within 1e-9.
inline EvaluationMatrix center_winrates(std::vector<std::string> labels,
                                        const SquareMatrix& winrates) {
  detail::require_square(labels, winrates, "win-rate matrix");
  const std::size_t n = winrates.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double w = winrates(i, j);
      if (!(w >= 0.0 && w <= 1.0)) {
        std::ostringstream msg;
        msg << "win rate (" << i << ", " << j << ") = " << w
            << " outside [0, 1]";
        throw BoundsError(msg.str());
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double sum = winrates(i, j) + winrates(j, i);
      if (std::fabs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "win rates (" << i << ", " << j << ") and (" << j << ", " << i
            << ") sum to " << sum << ", expected 1";
        throw BoundsError(msg.str());
      }
    }
  }
  EvaluationMatrix eval{std::move(labels), SquareMatrix(n), true};
  for (std::size_t i = 0; i < n; ++i) {
    eval.payoff(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = winrates(i, j) - 0.5;
      eval.payoff(i, j) = a;
      eval.payoff(j, i) = -a;
    }
  }
  return eval;
}

/// Recover win rates from a response graph that was built from centered win
/// rates: w(i, j) = 0.5 + g(i, j) - g(j, i). Exact because at most one of
/// the pair is nonzero.
inline SquareMatrix winrates_from_graph(const ResponseGraph& g) {
  detail::require_square(g.labels, g.weights, "response graph");
  const std::size_t n = g.weights.size();
  SquareMatrix w(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      w(i, j) = i == j ? 0.5 : 0.5 + g.weights(i, j) - g.weights(j, i);
    }
  }
  return w;
}

/// Convenience: response graph straight from a win-rate matrix.
inline ResponseGraph response_graph_from_winrates(
    std::vector<std::string> labels, const SquareMatrix& winrates) {
  return response_graph(center_winrates(std::move(labels), winrates));
}

/// Expand a declared target into its win-rate matrix: every pair starts at
/// 50%, each declared edge sets its direction and implies the complement,
/// and contradictory or malformed declarations are rejected.
inline SquareMatrix target_winrate_matrix(const TargetGraph& target) {
  const std::size_t n = target.labels.size();
  if (n < 2) {
    throw StructureError("a target graph needs at least two nodes");
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(target.labels[i], i).second) {
      throw StructureError("duplicate target node: " + target.labels[i]);
    }
  }
  SquareMatrix w(n, 0.5);
  std::vector<bool> declared(n * n, false);
  for (const TargetEdge& e : target.edges) {
    const auto from = index.find(e.from);
    const auto to = index.find(e.to);
    if (from == index.end() || to == index.end()) {
      throw StructureError("target edge references undeclared node: " +
                           (from == index.end() ? e.from : e.to));
    }
    const std::size_t i = from->second;
    const std::size_t j = to->second;
    if (i == j) {
      throw StructureError("target edge from a node to itself: " + e.from);
    }
    if (!(e.winrate >= 0.0 && e.winrate <= 1.0)) {
      std::ostringstream msg;
      msg << "target win rate " << e.winrate << " for " << e.from << " -> "
          << e.to << " outside [0, 1]";
      throw BoundsError(msg.str());
    }
    if (declared[i * n + j]) {
      throw StructureError("target edge declared twice: " + e.from + " -> " +
                           e.to);
    }
    if (declared[j * n + i] && std::fabs(w(j, i) - (1.0 - e.winrate)) > 1e-9) {
      std::ostringstream msg;
      msg << "target edges for " << e.from << " and " << e.to
          << " disagree: win rates must sum to 1";
      throw StructureError(msg.str());
    }
    declared[i * n + j] = true;
    w(i, j) = e.winrate;
    if (!declared[j * n + i]) w(j, i) = 1.0 - e.winrate;
  }
  return w;
}

/// Realize a declared target as a response graph comparable with empirical
/// ones: e.g. a 70% edge becomes weight 0.2 in the winner's direction and 0
/// in the loser's.
inline ResponseGraph target_to_response_graph(const TargetGraph& target) {
  return response_graph(
      center_winrates(target.labels, target_winrate_matrix(target)));
}

}  // namespace metabalance
