#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ocevi {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kProbabilitySumTolerance = 1e-12;

/// Throws std::invalid_argument unless `probs` is a probability vector over `values`.
template <typename Scalar>
void validate_distribution(const Eigen::Ref<const VectorX<Scalar>>& values,
                           const Eigen::Ref<const VectorX<Scalar>>& probs,
                           Scalar tolerance = Scalar(kProbabilitySumTolerance)) {
  if (values.size() == 0) throw std::invalid_argument("distribution has no support points");
  if (values.size() != probs.size())
    throw std::invalid_argument("distribution values and probabilities differ in length");
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= Scalar(0)))
      throw std::invalid_argument("negative probability at index " + std::to_string(i));
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("non-finite support value at index " + std::to_string(i));
  }
  const Scalar total = probs.sum();
  if (std::abs(total - Scalar(1)) > tolerance)
    throw std::invalid_argument("probabilities sum to " + std::to_string(total) + ", not 1");
}

/// Finite-support random variable: P(X = values[i]) = probs[i].
template <typename Scalar = double>
struct FiniteDistribution {
  VectorX<Scalar> values;
  VectorX<Scalar> probs;

  FiniteDistribution() = default;
  FiniteDistribution(VectorX<Scalar> v, VectorX<Scalar> p)
      : values(std::move(v)), probs(std::move(p)) {}

  static FiniteDistribution point_mass(Scalar x) {
    return {VectorX<Scalar>::Constant(1, x), VectorX<Scalar>::Ones(1)};
  }

  Eigen::Index size() const { return values.size(); }
  void validate() const { validate_distribution<Scalar>(values, probs); }
  Scalar mean() const { return probs.dot(values); }
};

}  // namespace ocevi
