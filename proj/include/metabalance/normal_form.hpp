#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "metabalance/balance.hpp"
#include "metabalance/errors.hpp"
#include "metabalance/metagame.hpp"

namespace metabalance {

/// A normal-form game whose pairwise payoffs ARE the parameters: one bounded
/// scalar per unordered strategy pair, antisymmetrically completed. The
/// simplest test bed for the balancing loop, with a deterministic and
/// noise-free evaluation matrix.
struct NormalFormSpec {
  std::vector<std::string> labels;
  /// One parameter per pair (i, j), i < j, in lexicographic index order:
  /// (0,1), (0,2), ..., (1,2), ... Parameter names follow
  /// "payoff.<label_i>.<label_j>".
  ParameterSpace space;
};

inline std::string nf_parameter_name(const std::string& a,
                                     const std::string& b) {
  return "payoff." + a + "." + b;
}

/// Build the spec with default payoff bounds [-1, 1] for every pair.
inline NormalFormSpec make_normal_form_spec(std::vector<std::string> labels,
                                            double lo = -1.0,
                                            double hi = 1.0) {
  if (labels.size() < 2) {
    throw StructureError("a normal-form game needs at least two strategies");
  }
  std::vector<ParameterSpec> specs;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      specs.push_back({nf_parameter_name(labels[i], labels[j]), lo, hi,
                       false, {}});
    }
  }
  return {std::move(labels), ParameterSpace(std::move(specs))};
}

/// Payoff matrix for a parameter vector: entry (i, j) with i < j is the
/// pair's parameter, (j, i) its exact negation, diagonal zero.
inline EvaluationMatrix nf_evaluation_matrix(const NormalFormSpec& spec,
                                             const ParameterVector& theta) {
  const std::size_t k = spec.labels.size();
  if (spec.space.dimension() != k * (k - 1) / 2) {
    throw StructureError(
        "normal-form spec must have one parameter per strategy pair");
  }
  spec.space.validate(theta);
  EvaluationMatrix eval{spec.labels, SquareMatrix(k), true};
  std::size_t p = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j, ++p) {
      eval.payoff(i, j) = theta[p];
      eval.payoff(j, i) = -theta[p];
    }
  }
  return eval;
}

/// Evaluator for the balancing loop. Deterministic: the trial id is unused.
inline GraphEvaluator nf_evaluator(NormalFormSpec spec) {
  return [spec = std::move(spec)](std::int64_t /*trial_id*/,
                                  const ParameterVector& theta) {
    return response_graph(nf_evaluation_matrix(spec, theta));
  };
}

}  // namespace metabalance
