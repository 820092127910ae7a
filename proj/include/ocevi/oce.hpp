#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ocevi/distribution.hpp"
#include "ocevi/golden_section.hpp"
#include "ocevi/utility.hpp"

namespace ocevi {

enum class OceSolver { ClosedForm, GoldenSection };

template <typename Scalar = double>
struct OceResult {
  Scalar value;
  Scalar lambda_star;
  OceSolver solver;
};

template <typename Scalar = double>
struct OceOptions {
  /// Extra restriction on lambda; intersected with [min(values), max(values)].
  std::optional<std::pair<Scalar, Scalar>> bracket;
  /// Skip the closed forms and always run golden-section search.
  bool force_golden = false;
  int max_iterations = 200;
  bool validate = true;
};

/// lambda + E[u(X - lambda)].
template <typename Scalar>
Scalar oce_objective(const Utility<Scalar>& u, const Eigen::Ref<const VectorX<Scalar>>& values,
                     const Eigen::Ref<const VectorX<Scalar>>& probs, Scalar lambda) {
  Scalar acc = lambda;
  for (Eigen::Index i = 0; i < values.size(); ++i) acc += probs[i] * u(values[i] - lambda);
  return acc;
}

namespace detail {

template <typename Scalar>
Scalar clamp_to(Scalar x, Scalar lo, Scalar hi) {
  return std::min(std::max(x, lo), hi);
}

template <typename Scalar>
OceResult<Scalar> entropic_closed_form(Scalar beta, const Eigen::Ref<const VectorX<Scalar>>& values,
                                       const Eigen::Ref<const VectorX<Scalar>>& probs) {
  // Shift so that every exponent beta * (x - shift) is <= 0.
  const Scalar lo = values.minCoeff(), hi = values.maxCoeff();
  const Scalar shift = beta > 0 ? hi : lo;
  Scalar acc = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    acc += probs[i] * std::exp(beta * (values[i] - shift));
  const Scalar value = shift + std::log(acc) / beta;
  return {value, clamp_to(value, lo, hi), OceSolver::ClosedForm};
}

/// Rockafellar-Uryasev: lambda* = min{x : F(x) >= alpha}.
template <typename Scalar>
OceResult<Scalar> cvar_closed_form(Scalar alpha, const Eigen::Ref<const VectorX<Scalar>>& values,
                                   const Eigen::Ref<const VectorX<Scalar>>& probs) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
  Scalar cumulative = 0;
  Scalar quantile = values[order.back()];
  for (Eigen::Index idx : order) {
    cumulative += probs[idx];
    if (cumulative >= alpha) {
      quantile = values[idx];
      break;
    }
  }
  Scalar shortfall = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values[i] < quantile) shortfall += probs[i] * (quantile - values[i]);
  return {quantile - shortfall / alpha, quantile, OceSolver::ClosedForm};
}

/// Exact stationary point of the mean-variance objective given its active set
/// {i : x_i - lambda <= 1/(2c)}; repeated until the active set settles.
template <typename Scalar>
Scalar polish_mean_variance(const Utility<Scalar>& u,
                            const Eigen::Ref<const VectorX<Scalar>>& values,
                            const Eigen::Ref<const VectorX<Scalar>>& probs, Scalar lambda,
                            Scalar lo, Scalar hi) {
  const Scalar c = u.param;
  const Scalar knee = Scalar(1) / (2 * c);
  Scalar best = lambda;
  Scalar best_value = oce_objective(u, values, probs, lambda);
  for (int step = 0; step < 8; ++step) {
    Scalar mass = 0, weighted = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      if (values[i] - lambda <= knee) {
        mass += probs[i];
        weighted += probs[i] * values[i];
      }
    }
    if (!(mass > 0)) break;
    const Scalar next = clamp_to((Scalar(1) - mass + 2 * c * weighted) / (2 * c * mass), lo, hi);
    const Scalar next_value = oce_objective(u, values, probs, next);
    if (next_value >= best_value - Scalar(1e-13) * (Scalar(1) + std::abs(best_value))) {
      best = next;
      best_value = std::max(best_value, next_value);
    }
    if (next == lambda) break;
    lambda = next;
  }
  return best;
}

}  // namespace detail

/**
 * Optimized certainty equivalent of a finite distribution.
 *
 * RiskAverse utilities give sup_lambda {lambda + E[u(X - lambda)]},
 * RiskSeeking ones the inf. Table utilities use their closed forms; custom
 * utilities (and mean-variance outside its quadratic region) run a
 * golden-section search on [min(values), max(values)].
 */
template <typename Scalar>
OceResult<Scalar> oce_eval(const Utility<Scalar>& u,
                           const Eigen::Ref<const VectorX<Scalar>>& values,
                           const Eigen::Ref<const VectorX<Scalar>>& probs,
                           const OceOptions<Scalar>& options = {}) {
  if (options.validate) {
    validate_distribution<Scalar>(values, probs);
    u.validate();
  }
  const Scalar vmin = values.minCoeff();
  const Scalar vmax = values.maxCoeff();
  if (vmin == vmax) return {vmin, vmin, OceSolver::ClosedForm};

  if (!options.force_golden) {
    switch (u.kind) {
      case UtilityKind::Mean: {
        const Scalar m = probs.dot(values);
        return {m, detail::clamp_to(m, vmin, vmax), OceSolver::ClosedForm};
      }
      case UtilityKind::Entropic:
        return detail::entropic_closed_form<Scalar>(u.param, values, probs);
      case UtilityKind::CVaR:
        return detail::cvar_closed_form<Scalar>(u.param, values, probs);
      case UtilityKind::MeanVariance: {
        const Scalar m = probs.dot(values);
        if (vmax - m <= Scalar(1) / (2 * u.param)) {
          const Scalar var = probs.dot((values.array() - m).square().matrix());
          return {m - u.param * var, detail::clamp_to(m, vmin, vmax), OceSolver::ClosedForm};
        }
        break;
      }
      case UtilityKind::Custom:
        break;
    }
  }

  Scalar lo = vmin, hi = vmax;
  if (options.bracket) {
    const Scalar blo = std::max(lo, options.bracket->first);
    const Scalar bhi = std::min(hi, options.bracket->second);
    if (blo <= bhi) {
      lo = blo;
      hi = bhi;
    }
  }
  const Scalar tolerance = Scalar(1e-9) * (Scalar(1) + values.cwiseAbs().maxCoeff());
  const Scalar sign = u.risk_averse() ? Scalar(1) : Scalar(-1);
  auto objective = [&](Scalar lambda) { return sign * oce_objective(u, values, probs, lambda); };
  auto found = golden_section_maximize<Scalar>(objective, lo, hi, tolerance, options.max_iterations);
  Scalar lambda = found.argmax;
  if (u.kind == UtilityKind::MeanVariance)
    lambda = detail::polish_mean_variance(u, values, probs, lambda, lo, hi);
  return {oce_objective(u, values, probs, lambda), lambda, OceSolver::GoldenSection};
}

template <typename Scalar>
OceResult<Scalar> oce_eval(const Utility<Scalar>& u, const FiniteDistribution<Scalar>& dist,
                           const OceOptions<Scalar>& options = {}) {
  return oce_eval<Scalar>(u, dist.values, dist.probs, options);
}

/**
 * Weights Lambda(i) in the subdifferential of u at values[i] - lambda_star with
 * sum_i probs[i] * Lambda(i) = 1.
 *
 * Points within a small snapping radius of a kink of u get a common
 * interpolation weight theta in [0, 1] between the one-sided derivatives at
 * the kink. Throws std::runtime_error when no theta reaches mean one, which
 * means lambda_star was not an optimizer.
 */
template <typename Scalar>
VectorX<Scalar> oce_subgradient_weights(const Utility<Scalar>& u,
                                        const Eigen::Ref<const VectorX<Scalar>>& values,
                                        const Eigen::Ref<const VectorX<Scalar>>& probs,
                                        Scalar lambda_star, Scalar tolerance = Scalar(1e-8)) {
  validate_distribution<Scalar>(values, probs);
  u.validate();
  const Eigen::Index n = values.size();
  const Scalar snap = Scalar(1e-7) * (Scalar(1) + values.cwiseAbs().maxCoeff());

  VectorX<Scalar> low(n), high(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar t = values[i] - lambda_star;
    for (Scalar k : u.kinks) {
      if (std::abs(t - k) <= snap) {
        t = k;
        break;
      }
    }
    const Scalar left = u.left_derivative(t);
    const Scalar right = u.right_derivative(t);
    low[i] = std::min(left, right);
    high[i] = std::max(left, right);
  }

  const Scalar base = probs.dot(low);
  const Scalar spread = probs.dot(high - low);
  Scalar theta = 0;
  if (spread > 0) theta = detail::clamp_to((Scalar(1) - base) / spread, Scalar(0), Scalar(1));
  const Scalar achieved = base + theta * spread;
  if (std::abs(achieved - Scalar(1)) > tolerance)
    throw std::runtime_error("no subgradient selection has mean one; lambda_star is not optimal");
  return low + theta * (high - low);
}

template <typename Scalar>
VectorX<Scalar> oce_subgradient_weights(const Utility<Scalar>& u,
                                        const FiniteDistribution<Scalar>& dist, Scalar lambda_star,
                                        Scalar tolerance = Scalar(1e-8)) {
  return oce_subgradient_weights<Scalar>(u, dist.values, dist.probs, lambda_star, tolerance);
}

}  // namespace ocevi
