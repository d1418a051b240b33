#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "hyprank/encoder.hpp"
#include "hyprank/word_vectors.hpp"

namespace hyprank {

// Linear transform of the similarity value: s = w d + b.
template <class Scalar>
struct ScoreLayer {
  Scalar weight = 1;
  Scalar bias = 0;
};

enum class Similarity { hyperbolic, cosine };

// Projection weights, score scalars, and the frozen word vector table.
template <class Scalar>
struct ModelParams {
  ProjectionLayer<Scalar> proj;
  ScoreLayer<Scalar> score;
  std::shared_ptr<const WordVectorTable<Scalar>> words;

  int word_dim() const { return proj.in_dim(); }
  int ball_dim() const { return proj.out_dim(); }

  bool all_finite() const {
    return proj.weight.allFinite() && proj.bias.allFinite() && std::isfinite(score.weight) &&
           std::isfinite(score.bias);
  }
};

// W uniform in [-s, s] with s = sqrt(6/(n+d)); bias zero; score layer at
// identity (w=1, b=0) so lower scores mean closer pairs from the start.
template <class Scalar>
ModelParams<Scalar> init_model(std::shared_ptr<const WordVectorTable<Scalar>> words, int ball_dim,
                               std::mt19937& rng) {
  ModelParams<Scalar> m;
  m.words = std::move(words);
  const int n = m.words->dim();
  const Scalar span = std::sqrt(Scalar(6) / Scalar(n + ball_dim));
  std::uniform_real_distribution<Scalar> uniform(-span, span);
  m.proj.weight.resize(ball_dim, n);
  // explicit fill order keeps the draw sequence reproducible
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < ball_dim; ++i) m.proj.weight(i, j) = uniform(rng);
  m.proj.bias = Vec<Scalar>::Zero(ball_dim);
  m.score.weight = 1;
  m.score.bias = 0;
  return m;
}

}  // namespace hyprank
