#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyprank {

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Points live strictly inside the open unit ball; norms are clipped to
// 1 - ball_eps so the distance and its gradient stay finite.
inline constexpr double ball_eps = 1e-5;

// Arguments of arcosh below 1 by more than this are a domain error; within
// the band they are treated as rounding noise and clamped to 1.  The same
// tolerance decides when two ball points count as numerically coincident
// (zero gradient instead of a near-0/0 division).  Stated for double; for
// float the guard widens to a few machine epsilons.
inline constexpr double coincidence_tol = 1e-12;

template <class Scalar>
constexpr Scalar coincidence_guard() {
  Scalar eps_based = Scalar(8) * std::numeric_limits<Scalar>::epsilon();
  return eps_based > Scalar(coincidence_tol) ? eps_based : Scalar(coincidence_tol);
}

template <class Scalar>
constexpr Scalar max_ball_norm() {
  return Scalar(1) - Scalar(ball_eps);
}

// Inverse hyperbolic cosine, ln(x + sqrt(x^2 - 1)) for x >= 1.
template <class Scalar>
Scalar arcosh(Scalar x) {
  if (x < Scalar(1)) {
    if (x < Scalar(1) - coincidence_guard<Scalar>())
      throw std::domain_error("arcosh: argument below 1");
    x = Scalar(1);
  }
  return std::log(x + std::sqrt(x * x - Scalar(1)));
}

// d(q,a) = arcosh(1 + 2 ||q-a||^2 / ((1-||q||^2)(1-||a||^2))).
// Symmetric in its arguments bit-for-bit: every subexpression is evaluated
// the same way under argument swap.
template <class DerivedQ, class DerivedA>
typename DerivedQ::Scalar poincare_distance(const Eigen::MatrixBase<DerivedQ>& q,
                                            const Eigen::MatrixBase<DerivedA>& a) {
  using Scalar = typename DerivedQ::Scalar;
  const Scalar qq = q.squaredNorm();
  const Scalar aa = a.squaredNorm();
  const Scalar diff = (q - a).squaredNorm();
  const Scalar arg = Scalar(1) + Scalar(2) * diff / ((Scalar(1) - qq) * (Scalar(1) - aa));
  return arcosh(arg);
}

// Conformal factor of the ball metric at theta, (2/(1-||theta||^2))^2.
template <class Derived>
typename Derived::Scalar metric_coefficient(const Eigen::MatrixBase<Derived>& theta) {
  using Scalar = typename Derived::Scalar;
  const Scalar alpha = Scalar(1) - theta.squaredNorm();
  return (Scalar(2) / alpha) * (Scalar(2) / alpha);
}

// Inverse of the metric coefficient, (1-||theta||^2)^2 / 4.  Multiplying a
// Euclidean gradient at theta by this converts it to the ball gradient.
template <class Derived>
typename Derived::Scalar metric_scale(const Eigen::MatrixBase<Derived>& theta) {
  using Scalar = typename Derived::Scalar;
  const Scalar alpha = Scalar(1) - theta.squaredNorm();
  return alpha * alpha / Scalar(4);
}

// Euclidean gradient of poincare_distance(theta, x) with respect to theta:
//   (4 / (beta sqrt(gamma^2-1))) (((||x||^2 - 2<theta,x> + 1)/alpha^2) theta - x/alpha)
// with alpha = 1-||theta||^2, beta = 1-||x||^2,
// gamma = 1 + (2/(alpha beta)) ||theta-x||^2.
// Returns zero when the points numerically coincide (gamma - 1 below the
// guard); the distance is at its minimum there and any subgradient works.
// The gradient with respect to x is distance_grad(x, theta).
template <class DerivedT, class DerivedX>
Vec<typename DerivedT::Scalar> distance_grad(const Eigen::MatrixBase<DerivedT>& theta,
                                             const Eigen::MatrixBase<DerivedX>& x) {
  using Scalar = typename DerivedT::Scalar;
  const Scalar alpha = Scalar(1) - theta.squaredNorm();
  const Scalar beta = Scalar(1) - x.squaredNorm();
  const Scalar gamma = Scalar(1) + Scalar(2) / (alpha * beta) * (theta - x).squaredNorm();
  if (gamma - Scalar(1) < coincidence_guard<Scalar>())
    return Vec<Scalar>::Zero(theta.size());
  const Scalar coeff = Scalar(4) / (beta * std::sqrt(gamma * gamma - Scalar(1)));
  const Scalar theta_weight = (x.squaredNorm() - Scalar(2) * theta.dot(x) + Scalar(1)) / (alpha * alpha);
  return coeff * (theta_weight * theta - x / alpha);
}

// Retraction onto the ball: vectors with norm above 1 - ball_eps are scaled
// back onto that radius, everything else passes through unchanged.  Rounding
// can leave the rescaled norm an ulp high, so rescale until the invariant
// holds exactly (one extra pass at most in practice).
template <class Derived>
Vec<typename Derived::Scalar> project_into_ball(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (!v.allFinite())
    throw std::domain_error("project_into_ball: non-finite component");
  const Scalar limit = max_ball_norm<Scalar>();
  Vec<Scalar> out = v;
  Scalar norm = out.norm();
  for (int pass = 0; norm > limit && pass < 8; ++pass) {
    out *= limit / norm;
    norm = out.norm();
  }
  return out;
}

template <class Derived>
bool is_in_ball(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  return v.allFinite() && v.norm() <= max_ball_norm<Scalar>();
}

}  // namespace hyprank
