#pragma once

#include <algorithm>
#include <stdexcept>

#include "hyprank/ball_geometry.hpp"
#include "hyprank/model.hpp"

namespace hyprank {

// One training example: a question with a correct and a corrupted answer.
struct TrainingTriple {
  TokenSequence question;
  TokenSequence positive;
  TokenSequence negative;
};

template <class Scalar>
struct LossConfig {
  Scalar margin = 5;
  Similarity similarity = Similarity::hyperbolic;
  bool riemannian = true;  // scale ball-point gradients by the inverse metric
};

// <q,a>/(||q|| ||a||); zero vectors score 0.  Higher means more similar, the
// reverse of the hyperbolic distance.
template <class DerivedQ, class DerivedA>
typename DerivedQ::Scalar cosine_score(const Eigen::MatrixBase<DerivedQ>& q,
                                       const Eigen::MatrixBase<DerivedA>& a) {
  using Scalar = typename DerivedQ::Scalar;
  const Scalar nq = q.norm();
  const Scalar na = a.norm();
  if (nq == Scalar(0) || na == Scalar(0)) return 0;
  return q.dot(a) / (nq * na);
}

template <class Scalar, class DerivedQ, class DerivedA>
Scalar similarity_value(const Eigen::MatrixBase<DerivedQ>& q, const Eigen::MatrixBase<DerivedA>& a,
                        Similarity sim) {
  return sim == Similarity::hyperbolic ? poincare_distance(q, a) : cosine_score(q, a);
}

// s(q,a) = w d(q,a) + b over the configured similarity.
template <class Scalar>
Scalar score(const Vec<Scalar>& q, const Vec<Scalar>& a, const ScoreLayer<Scalar>& layer,
             Similarity sim = Similarity::hyperbolic) {
  return layer.weight * similarity_value<Scalar>(q, a, sim) + layer.bias;
}

// Hyperbolic form: max(0, s_pos + margin - s_neg) pushes correct pairs at
// least `margin` below corrupted ones.  Cosine similarity reverses the
// orientation so the margin keeps the same meaning.
template <class Scalar>
Scalar hinge_loss(Scalar s_pos, Scalar s_neg, Scalar margin) {
  return std::max(Scalar(0), s_pos + margin - s_neg);
}

template <class Scalar>
Scalar hinge_loss(Scalar s_pos, Scalar s_neg, Scalar margin, Similarity sim) {
  return sim == Similarity::hyperbolic ? hinge_loss(s_pos, s_neg, margin)
                                       : hinge_loss(-s_pos, -s_neg, margin);
}

// Accumulated parameter gradients plus the (converted) per-representation
// gradients, kept for diagnostics and the conversion tests.
template <class Scalar>
struct GradientSet {
  Mat<Scalar> proj_weight;
  Vec<Scalar> proj_bias;
  Scalar score_weight = 0;
  Scalar score_bias = 0;

  Vec<Scalar> rep_question, rep_positive, rep_negative;

  void setZero(int ball_dim, int word_dim) {
    proj_weight = Mat<Scalar>::Zero(ball_dim, word_dim);
    proj_bias = Vec<Scalar>::Zero(ball_dim);
    score_weight = 0;
    score_bias = 0;
    rep_question = Vec<Scalar>::Zero(ball_dim);
    rep_positive = Vec<Scalar>::Zero(ball_dim);
    rep_negative = Vec<Scalar>::Zero(ball_dim);
  }

  bool all_finite() const {
    return proj_weight.allFinite() && proj_bias.allFinite() && std::isfinite(score_weight) &&
           std::isfinite(score_bias);
  }
};

template <class Scalar>
struct TripleForward {
  EncodeCache<Scalar> question, positive, negative;
  Scalar sim_pos = 0, sim_neg = 0;
  Scalar s_pos = 0, s_neg = 0;
  Scalar loss = 0;
};

template <class Scalar>
Scalar triple_forward(const TrainingTriple& triple, const ModelParams<Scalar>& model,
                      const LossConfig<Scalar>& cfg, TripleForward<Scalar>& fwd) {
  const auto& q = encode_sequence(triple.question, *model.words, model.proj, fwd.question);
  const auto& a = encode_sequence(triple.positive, *model.words, model.proj, fwd.positive);
  const auto& an = encode_sequence(triple.negative, *model.words, model.proj, fwd.negative);
  fwd.sim_pos = similarity_value<Scalar>(q, a, cfg.similarity);
  fwd.sim_neg = similarity_value<Scalar>(q, an, cfg.similarity);
  fwd.s_pos = model.score.weight * fwd.sim_pos + model.score.bias;
  fwd.s_neg = model.score.weight * fwd.sim_neg + model.score.bias;
  fwd.loss = hinge_loss(fwd.s_pos, fwd.s_neg, cfg.margin, cfg.similarity);
  return fwd.loss;
}

namespace detail {

// d cos(q,a) / dq
template <class Scalar>
Vec<Scalar> cosine_grad(const Vec<Scalar>& q, const Vec<Scalar>& a) {
  const Scalar nq = q.norm();
  const Scalar na = a.norm();
  if (nq == Scalar(0) || na == Scalar(0)) return Vec<Scalar>::Zero(q.size());
  const Scalar c = q.dot(a) / (nq * na);
  return a / (nq * na) - (c / (nq * nq)) * q;
}

template <class Scalar>
Vec<Scalar> similarity_grad(const Vec<Scalar>& wrt, const Vec<Scalar>& other, Similarity sim) {
  return sim == Similarity::hyperbolic ? distance_grad(wrt, other) : cosine_grad(wrt, other);
}

}  // namespace detail

// Backward pass for one triple, scaled by `scale` (1/batch for mean loss)
// and accumulated into `grads`.  An inactive hinge contributes nothing.  The
// Euclidean gradient collected at each encoded representation is multiplied
// by metric_scale there before flowing into the projection parameters; the
// score bias cancels between the two terms of the loss and stays zero.
template <class Scalar>
void triple_backward(const TripleForward<Scalar>& fwd, const ModelParams<Scalar>& model,
                     const LossConfig<Scalar>& cfg, Scalar scale, GradientSet<Scalar>& grads) {
  if (fwd.question.output.size() == 0) throw std::invalid_argument("triple_backward: missing forward pass");
  if (fwd.loss <= Scalar(0)) return;

  // hinge orientation: +1 pushes sim_pos down (hyperbolic), -1 up (cosine)
  const Scalar sign = cfg.similarity == Similarity::hyperbolic ? Scalar(1) : Scalar(-1);

  grads.score_weight += scale * sign * (fwd.sim_pos - fwd.sim_neg);

  const auto& q = fwd.question.output;
  const auto& a = fwd.positive.output;
  const auto& an = fwd.negative.output;
  const Scalar w = model.score.weight;

  Vec<Scalar> g_q = sign * w *
                    (detail::similarity_grad(q, a, cfg.similarity) - detail::similarity_grad(q, an, cfg.similarity));
  Vec<Scalar> g_a = sign * w * detail::similarity_grad(a, q, cfg.similarity);
  Vec<Scalar> g_an = -sign * w * detail::similarity_grad(an, q, cfg.similarity);

  if (cfg.riemannian && cfg.similarity == Similarity::hyperbolic) {
    g_q *= metric_scale(q);
    g_a *= metric_scale(a);
    g_an *= metric_scale(an);
  }
  g_q *= scale;
  g_a *= scale;
  g_an *= scale;

  grads.rep_question += g_q;
  grads.rep_positive += g_a;
  grads.rep_negative += g_an;

  encode_backward(fwd.question, g_q, grads.proj_weight, grads.proj_bias);
  encode_backward(fwd.positive, g_a, grads.proj_weight, grads.proj_bias);
  encode_backward(fwd.negative, g_an, grads.proj_weight, grads.proj_bias);
}

}  // namespace hyprank
