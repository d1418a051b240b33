#pragma once

#include <cassert>
#include <stdexcept>
#include <vector>

#include "hyprank/ball_geometry.hpp"
#include "hyprank/corpus.hpp"
#include "hyprank/word_vectors.hpp"

namespace hyprank {

// Single relu layer shared by the question and answer sides: maps a frozen
// n-dimensional word vector to the d-dimensional task space.
template <class Scalar>
struct ProjectionLayer {
  Mat<Scalar> weight;  // d x n
  Vec<Scalar> bias;    // d

  int in_dim() const { return static_cast<int>(weight.cols()); }
  int out_dim() const { return static_cast<int>(weight.rows()); }
};

// relu(W z + b).  Projected word vectors are not ball-constrained.
template <class Scalar, class Derived>
Vec<Scalar> project_word(const Eigen::MatrixBase<Derived>& z, const ProjectionLayer<Scalar>& layer) {
  if (z.size() != layer.weight.cols()) throw std::invalid_argument("project_word: dimension mismatch");
  return ((layer.weight * z + layer.bias).array().max(Scalar(0))).matrix();
}

// Forward intermediates needed by encode_backward.
template <class Scalar>
struct EncodeCache {
  std::vector<std::int32_t> active_ids;  // non-pad token ids, in order
  Mat<Scalar> embedded;                  // n x m frozen word vectors
  Mat<Scalar> pre_activation;            // d x m, W z_i + b
  Vec<Scalar> sum;                       // pre-constraint sequence vector
  Scalar sum_norm = 0;
  bool clipped = false;
  Vec<Scalar> output;                    // the ball point
};

// Sum of the projected non-pad words, constrained to the ball.  Padding
// contributes nothing; an all-pad sequence encodes to the origin.
template <class Scalar>
const Vec<Scalar>& encode_sequence(const TokenSequence& seq, const WordVectorTable<Scalar>& table,
                                   const ProjectionLayer<Scalar>& layer, EncodeCache<Scalar>& cache) {
  if (table.dim() != layer.in_dim()) throw std::invalid_argument("encode_sequence: table/layer dimension mismatch");
  const int d = layer.out_dim();
  cache.active_ids.clear();
  for (std::int32_t id : seq.ids)
    if (id != pad_id) cache.active_ids.push_back(id);

  const auto m = static_cast<Eigen::Index>(cache.active_ids.size());
  cache.embedded.resize(table.dim(), m);
  for (Eigen::Index i = 0; i < m; ++i) cache.embedded.col(i) = table.vectors.col(cache.active_ids[static_cast<std::size_t>(i)]);

  cache.pre_activation = layer.weight * cache.embedded;
  cache.pre_activation.colwise() += layer.bias;
  cache.sum = cache.pre_activation.array().max(Scalar(0)).matrix().rowwise().sum();
  if (m == 0) cache.sum = Vec<Scalar>::Zero(d);

  cache.sum_norm = cache.sum.norm();
  cache.clipped = cache.sum_norm > max_ball_norm<Scalar>();
  cache.output = project_into_ball(cache.sum);
  assert(is_in_ball(cache.output));
  return cache.output;
}

// Chain rule from a gradient at the ball point back into the projection
// parameters.  Walks the constraint branch, the word sum, and the relu;
// accumulates into grad_weight / grad_bias (+=).  The constraint gradient at
// the clip boundary uses the pass-through branch.
template <class Scalar, class Derived>
void encode_backward(const EncodeCache<Scalar>& cache, const Eigen::MatrixBase<Derived>& upstream,
                     Mat<Scalar>& grad_weight, Vec<Scalar>& grad_bias) {
  if (cache.output.size() == 0) throw std::invalid_argument("encode_backward: cache missing forward pass");
  Vec<Scalar> g_sum;
  if (cache.clipped) {
    // y = v * c/||v||  =>  J^T g = (c/||v||) g - (c <v,g>/||v||^3) v
    const Scalar c = max_ball_norm<Scalar>();
    const Scalar norm = cache.sum_norm;
    const Scalar vg = cache.sum.dot(upstream);
    g_sum = (c / norm) * upstream - (c * vg / (norm * norm * norm)) * cache.sum;
  } else {
    g_sum = upstream;
  }

  const auto m = static_cast<Eigen::Index>(cache.active_ids.size());
  if (m == 0) return;
  // relu mask per word, then dW += g_i z_i^T, db += g_i
  Mat<Scalar> g_pre(g_sum.size(), m);
  for (Eigen::Index i = 0; i < m; ++i)
    g_pre.col(i) = (cache.pre_activation.col(i).array() >= Scalar(0)).select(g_sum, Vec<Scalar>::Zero(g_sum.size()));
  grad_weight.noalias() += g_pre * cache.embedded.transpose();
  grad_bias += g_pre.rowwise().sum();
}

}  // namespace hyprank
