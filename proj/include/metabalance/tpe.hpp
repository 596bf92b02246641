#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "metabalance/errors.hpp"
#include "metabalance/metagame.hpp"
#include "metabalance/rng.hpp"

namespace metabalance {

/// Tuning knobs for the tree-structured Parzen estimator.
struct TpeConfig {
  /// Trials sampled uniformly before the model takes over.
  int n_startup = 10;
  /// Fraction of completed trials forming the low-loss ("good") set.
  double gamma = 0.25;
  /// Upper bound on the size of the good set.
  int good_cap = 25;
  /// Candidates drawn from the good-set density per suggestion.
  int n_candidates = 24;
  /// Minimum kernel bandwidth, as a fraction of the parameter range.
  double bandwidth_floor = 1e-6;

  bool operator==(const TpeConfig&) const = default;
};

inline void validate(const TpeConfig& c) {
  if (c.n_startup < 0) throw BoundsError("n_startup must be >= 0");
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) {
    throw BoundsError("gamma must lie strictly between 0 and 1");
  }
  if (c.good_cap < 1) throw BoundsError("good_cap must be >= 1");
  if (c.n_candidates < 1) throw BoundsError("n_candidates must be >= 1");
  if (!(c.bandwidth_floor > 0.0)) {
    throw BoundsError("bandwidth_floor must be positive");
  }
}

/// One finished trial as seen by the sampler.
struct Observation {
  ParameterVector theta;
  double loss = 0.0;
};

namespace detail {

inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * 0.7071067811865476);  // 1/sqrt(2)
}

/// Density of a normal(mu, sigma) truncated to [lo, hi], evaluated at x.
inline double truncated_normal_pdf(double x, double mu, double sigma,
                                   double lo, double hi) {
  if (x < lo || x > hi) return 0.0;
  const double mass =
      normal_cdf((hi - mu) / sigma) - normal_cdf((lo - mu) / sigma);
  const double z = (x - mu) / sigma;
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z) /
         (sigma * std::max(mass, 1e-300));
}

inline double sample_truncated_normal(Rng& rng, double mu, double sigma,
                                      double lo, double hi) {
  std::normal_distribution<double> d(mu, sigma);
  // Kernel centers always lie inside [lo, hi], so acceptance is high; the
  // cap only guards against pathological inputs.
  for (int attempt = 0; attempt < 256; ++attempt) {
    const double x = d(rng);
    if (x >= lo && x <= hi) return x;
  }
  return std::clamp(mu, lo, hi);
}

/// Kernel density over one dimension: a truncated-Gaussian kernel per
/// observation plus one uniform component, all equally weighted.
class KernelDensity {
 public:
  KernelDensity(std::vector<double> centers, double lo, double hi,
                double floor_frac)
      : centers_(std::move(centers)), lo_(lo), hi_(hi) {
    const double range = hi_ - lo_;
    // Two floors keep the mixture from degenerating: the configured
    // absolute floor guards against zero-width kernels on duplicates, and a
    // count-dependent floor (range / min(100, k+1), the standard kernel
    // shrink rate) keeps kernels overlapping so the good/bad density ratio
    // stays informative instead of collapsing into disjoint spikes.
    const double shrink_floor =
        range / std::min(100.0, static_cast<double>(centers_.size()) + 1.0);
    const double floor = std::max(floor_frac * range, shrink_floor);
    bandwidths_.resize(centers_.size());
    std::vector<double> sorted = centers_;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      double bw;
      if (sorted.size() == 1) {
        bw = range;
      } else {
        const auto it =
            std::lower_bound(sorted.begin(), sorted.end(), centers_[i]);
        const std::size_t k = static_cast<std::size_t>(it - sorted.begin());
        const double left = k > 0 ? centers_[i] - sorted[k - 1] : 0.0;
        const double right =
            k + 1 < sorted.size() ? sorted[k + 1] - centers_[i] : 0.0;
        bw = std::max(left, right);
      }
      bandwidths_[i] = std::clamp(bw, floor, range);
    }
  }

  double log_pdf(double x) const {
    // The uniform component keeps the density bounded away from zero
    // everywhere in [lo, hi].
    double acc = x >= lo_ && x <= hi_ ? 1.0 / (hi_ - lo_) : 0.0;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      acc += truncated_normal_pdf(x, centers_[i], bandwidths_[i], lo_, hi_);
    }
    return std::log(acc / static_cast<double>(centers_.size() + 1));
  }

  double sample(Rng& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, centers_.size());
    const std::size_t i = pick(rng);
    if (i == centers_.size()) {
      std::uniform_real_distribution<double> u(lo_, hi_);
      return u(rng);
    }
    return sample_truncated_normal(rng, centers_[i], bandwidths_[i], lo_, hi_);
  }

 private:
  std::vector<double> centers_;
  std::vector<double> bandwidths_;
  double lo_;
  double hi_;
};

}  // namespace detail

/// A suggested parameter vector plus whether the density model produced it
/// (false means uniform startup/fallback sampling).
struct Suggestion {
  ParameterVector theta;
  bool from_model = false;
};

/// Tree-structured Parzen estimator: split completed trials into a low-loss
/// and a high-loss set, model each with a per-dimension kernel density, then
/// propose the candidate that maximizes the density ratio good/bad.
class TpeSampler {
 public:
  explicit TpeSampler(TpeConfig config) : config_(config) {
    validate(config_);
  }

  const TpeConfig& config() const { return config_; }

  Suggestion suggest(const ParameterSpace& space,
                     const std::vector<Observation>& completed,
                     Rng& rng) const {
    const std::size_t n = completed.size();
    const std::size_t startup =
        std::max<std::size_t>(static_cast<std::size_t>(config_.n_startup), 2);
    if (n < startup) {
      return {space.sample(rng), false};
    }

    // Rank by loss; ties keep submission order so runs are reproducible.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return completed[a].loss < completed[b].loss;
                     });
    const std::size_t n_good = std::min<std::size_t>(
        static_cast<std::size_t>(config_.good_cap),
        std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::ceil(config_.gamma * static_cast<double>(n)))));
    if (n - n_good < 1) {
      return {space.sample(rng), false};
    }

    const std::size_t dims = space.dimension();
    std::vector<std::optional<detail::KernelDensity>> good_density(dims);
    std::vector<std::optional<detail::KernelDensity>> bad_density(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      const ParameterSpec& spec = space.spec(d);
      if (spec.fixed) continue;
      std::vector<double> good;
      std::vector<double> bad;
      good.reserve(n_good);
      bad.reserve(n - n_good);
      for (std::size_t r = 0; r < n; ++r) {
        (r < n_good ? good : bad).push_back(completed[order[r]].theta[d]);
      }
      good_density[d].emplace(std::move(good), spec.min, spec.max,
                              config_.bandwidth_floor);
      bad_density[d].emplace(std::move(bad), spec.min, spec.max,
                             config_.bandwidth_floor);
    }

    ParameterVector best_theta;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < config_.n_candidates; ++c) {
      ParameterVector theta(dims);
      double score = 0.0;
      for (std::size_t d = 0; d < dims; ++d) {
        const ParameterSpec& spec = space.spec(d);
        if (spec.fixed) {
          theta[d] = *spec.fixed;
          continue;
        }
        double x = good_density[d]->sample(rng);
        if (spec.integer) x = std::round(x);
        theta[d] = x;
        score += good_density[d]->log_pdf(x) - bad_density[d]->log_pdf(x);
      }
      if (score > best_score) {
        best_score = score;
        best_theta = std::move(theta);
      }
    }
    return {std::move(best_theta), true};
  }

 private:
  TpeConfig config_;
};

}  // namespace metabalance
