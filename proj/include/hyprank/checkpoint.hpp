#pragma once

#include <string>
#include <vector>

#include "hyprank/corpus.hpp"
#include "hyprank/model.hpp"

namespace hyprank {

// Binary model snapshot.  Layout (all integers and floats little-endian):
//   magic "HYQA" | u32 version | u32 n | u32 d | u32 vocab_size
//   vocab_size x (u32 length + utf-8 bytes)
//   W (d*n float32, row-major) | b (d float32) | w_f float32 | b_f float32
//   u32 length + config JSON bytes
// The word vector table is not stored; evaluation reloads it from the
// pretrained file for the saved vocabulary.
struct Checkpoint {
  std::uint32_t version = 1;
  std::uint32_t word_dim = 0;  // n
  std::uint32_t ball_dim = 0;  // d
  std::vector<std::string> vocab_words;
  Eigen::MatrixXf proj_weight;
  Eigen::VectorXf proj_bias;
  float score_weight = 1.0f;
  float score_bias = 0.0f;
  std::string config_json;
};

void save_checkpoint(const std::string& path, const ModelParams<float>& model, const Vocabulary& vocab,
                     const std::string& config_json);

Checkpoint load_checkpoint(const std::string& path);

// Rebuilds the vocabulary stored in a checkpoint (ids preserved).
Vocabulary checkpoint_vocabulary(const Checkpoint& ckpt);

// Assembles runnable parameters from a checkpoint and a freshly loaded word
// vector table; throws when the dimensions disagree.
ModelParams<float> checkpoint_model(const Checkpoint& ckpt,
                                    std::shared_ptr<const WordVectorTable<float>> words);

}  // namespace hyprank
