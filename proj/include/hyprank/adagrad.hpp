#pragma once

#include <cmath>
#include <stdexcept>

#include "hyprank/objective.hpp"

namespace hyprank {

// Elementwise AdaGrad with L2 folded into the gradient before the
// accumulator update:
//   g   = grad + l2 * param
//   acc = acc + g^2
//   param -= lr * g / sqrt(acc + eps)
template <class Scalar, int Rows, int Cols>
void adagrad_update(Eigen::Matrix<Scalar, Rows, Cols>& param, const Eigen::Matrix<Scalar, Rows, Cols>& grad,
                    Eigen::Matrix<Scalar, Rows, Cols>& acc, Scalar lr, Scalar eps, Scalar l2) {
  if (!grad.allFinite()) throw std::runtime_error("adagrad: non-finite gradient, run diverged");
  Eigen::Matrix<Scalar, Rows, Cols> g = grad;
  if (l2 != Scalar(0)) g += l2 * param;
  acc.array() += g.array().square();
  param.array() -= lr * g.array() / (acc.array() + eps).sqrt();
}

template <class Scalar>
void adagrad_update(Scalar& param, Scalar grad, Scalar& acc, Scalar lr, Scalar eps, Scalar l2) {
  if (!std::isfinite(grad)) throw std::runtime_error("adagrad: non-finite gradient, run diverged");
  const Scalar g = grad + l2 * param;
  acc += g * g;
  param -= lr * g / std::sqrt(acc + eps);
}

// Accumulators and settings for the whole parameter set.  Weight decay
// applies to the projection weight matrix only.
template <class Scalar>
struct AdaGradState {
  Scalar lr = Scalar(0.05);
  Scalar eps = Scalar(1e-8);
  Scalar l2 = 0;

  Mat<Scalar> acc_proj_weight;
  Vec<Scalar> acc_proj_bias;
  Scalar acc_score_weight = 0;
  Scalar acc_score_bias = 0;

  AdaGradState() = default;
  AdaGradState(int ball_dim, int word_dim, Scalar lr_, Scalar l2_) : lr(lr_), l2(l2_) {
    acc_proj_weight = Mat<Scalar>::Zero(ball_dim, word_dim);
    acc_proj_bias = Vec<Scalar>::Zero(ball_dim);
  }
};

template <class Scalar>
void apply_gradients(ModelParams<Scalar>& model, const GradientSet<Scalar>& grads,
                     AdaGradState<Scalar>& state) {
  adagrad_update(model.proj.weight, grads.proj_weight, state.acc_proj_weight, state.lr, state.eps, state.l2);
  adagrad_update(model.proj.bias, grads.proj_bias, state.acc_proj_bias, state.lr, state.eps, Scalar(0));
  adagrad_update(model.score.weight, grads.score_weight, state.acc_score_weight, state.lr, state.eps,
                 Scalar(0));
  adagrad_update(model.score.bias, grads.score_bias, state.acc_score_bias, state.lr, state.eps, Scalar(0));
}

}  // namespace hyprank
