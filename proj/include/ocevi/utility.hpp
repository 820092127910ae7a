#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ocevi {

enum class UtilityKind { Mean, Entropic, CVaR, MeanVariance, Custom };

/// RiskAverse: concave u, the OCE is a sup over lambda.
/// RiskSeeking: convex u, the OCE is an inf over lambda.
enum class RiskMode { RiskAverse, RiskSeeking };

/**
 * A normalized utility u with u(0) = 0 and 1 in the subdifferential at 0.
 *
 * `param` holds beta (Entropic), alpha (CVaR) or c (MeanVariance). Custom
 * utilities carry their own evaluators; `kinks` lists points where the left
 * and right derivatives differ so that subgradient extraction can snap to them.
 */
template <typename Scalar = double>
struct Utility {
  using Fn = std::function<Scalar(Scalar)>;

  UtilityKind kind = UtilityKind::Mean;
  Scalar param = Scalar(0);
  RiskMode mode = RiskMode::RiskAverse;

  Fn custom_eval;
  Fn custom_left;
  Fn custom_right;
  std::vector<Scalar> kinks;

  static Utility mean(RiskMode mode = RiskMode::RiskAverse) {
    Utility u;
    u.mode = mode;
    return u;
  }

  static Utility entropic(Scalar beta) {
    if (!(beta != Scalar(0)) || !std::isfinite(beta))
      throw std::invalid_argument("entropic utility requires finite beta != 0");
    Utility u;
    u.kind = UtilityKind::Entropic;
    u.param = beta;
    u.mode = beta < 0 ? RiskMode::RiskAverse : RiskMode::RiskSeeking;
    return u;
  }

  static Utility cvar(Scalar alpha) {
    if (!(alpha > Scalar(0) && alpha <= Scalar(1)))
      throw std::invalid_argument("cvar utility requires alpha in (0, 1]");
    Utility u;
    u.kind = UtilityKind::CVaR;
    u.param = alpha;
    u.kinks = {Scalar(0)};
    return u;
  }

  static Utility mean_variance(Scalar c) {
    if (!(c > Scalar(0)) || !std::isfinite(c))
      throw std::invalid_argument("mean-variance utility requires c > 0");
    Utility u;
    u.kind = UtilityKind::MeanVariance;
    u.param = c;
    return u;
  }

  static Utility custom(Fn eval, Fn left, Fn right, RiskMode mode,
                        std::vector<Scalar> kinks = {}) {
    if (!eval || !left || !right)
      throw std::invalid_argument("custom utility needs value and derivative evaluators");
    Utility u;
    u.kind = UtilityKind::Custom;
    u.mode = mode;
    u.custom_eval = std::move(eval);
    u.custom_left = std::move(left);
    u.custom_right = std::move(right);
    u.kinks = std::move(kinks);
    return u;
  }

  bool risk_averse() const { return mode == RiskMode::RiskAverse; }

  /// Throws when the parameters or the mode are inconsistent with the kind.
  void validate() const {
    switch (kind) {
      case UtilityKind::Mean:
        return;
      case UtilityKind::Entropic:
        if (param == Scalar(0) || !std::isfinite(param))
          throw std::invalid_argument("entropic utility requires finite beta != 0");
        if ((param < 0) != risk_averse())
          throw std::invalid_argument(
              "entropic utility: beta < 0 is risk-averse only, beta > 0 risk-seeking only");
        return;
      case UtilityKind::CVaR:
        if (!(param > 0 && param <= 1))
          throw std::invalid_argument("cvar utility requires alpha in (0, 1]");
        if (!risk_averse()) throw std::invalid_argument("cvar utility is risk-averse only");
        return;
      case UtilityKind::MeanVariance:
        if (!(param > 0)) throw std::invalid_argument("mean-variance utility requires c > 0");
        if (!risk_averse())
          throw std::invalid_argument("mean-variance utility is risk-averse only");
        return;
      case UtilityKind::Custom:
        if (!custom_eval || !custom_left || !custom_right)
          throw std::invalid_argument("custom utility is missing an evaluator");
        return;
    }
  }

  Scalar operator()(Scalar t) const {
    using std::expm1;
    switch (kind) {
      case UtilityKind::Mean:
        return t;
      case UtilityKind::Entropic:
        return expm1(param * t) / param;
      case UtilityKind::CVaR:
        return t < 0 ? t / param : Scalar(0);
      case UtilityKind::MeanVariance:
        return t <= Scalar(1) / (2 * param) ? t - param * t * t : Scalar(1) / (4 * param);
      case UtilityKind::Custom:
        return custom_eval(t);
    }
    return t;
  }

  Scalar left_derivative(Scalar t) const {
    using std::exp;
    switch (kind) {
      case UtilityKind::Mean:
        return Scalar(1);
      case UtilityKind::Entropic:
        return exp(param * t);
      case UtilityKind::CVaR:
        return t <= 0 ? Scalar(1) / param : Scalar(0);
      case UtilityKind::MeanVariance:
        return t <= Scalar(1) / (2 * param) ? Scalar(1) - 2 * param * t : Scalar(0);
      case UtilityKind::Custom:
        return custom_left(t);
    }
    return Scalar(1);
  }

  Scalar right_derivative(Scalar t) const {
    using std::exp;
    switch (kind) {
      case UtilityKind::Mean:
        return Scalar(1);
      case UtilityKind::Entropic:
        return exp(param * t);
      case UtilityKind::CVaR:
        return t < 0 ? Scalar(1) / param : Scalar(0);
      case UtilityKind::MeanVariance:
        return t < Scalar(1) / (2 * param) ? Scalar(1) - 2 * param * t : Scalar(0);
      case UtilityKind::Custom:
        return custom_right(t);
    }
    return Scalar(1);
  }
};

template <typename Scalar>
Scalar utility_eval(const Utility<Scalar>& u, Scalar t) {
  return u(t);
}

template <typename Scalar>
Scalar utility_left_derivative(const Utility<Scalar>& u, Scalar t) {
  return u.left_derivative(t);
}

template <typename Scalar>
Scalar utility_right_derivative(const Utility<Scalar>& u, Scalar t) {
  return u.right_derivative(t);
}

/// Parses "mean", "entropic:beta=<f>", "cvar:alpha=<f>" or "meanvar:c=<f>".
Utility<double> parse_utility(const std::string& text);

/// Inverse of parse_utility for the built-in kinds; "custom" for Custom.
std::string to_string(const Utility<double>& u);

}  // namespace ocevi
