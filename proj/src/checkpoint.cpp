#include "hyprank/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hyprank {

namespace {

constexpr char magic[4] = {'H', 'Y', 'Q', 'A'};

void write_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

void write_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  write_u32(out, bits);
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4))
    throw std::runtime_error(path + ": truncated checkpoint");
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
}

float read_f32(std::istream& in, const std::string& path) {
  const std::uint32_t bits = read_u32(in, path);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

std::string read_string(std::istream& in, const std::string& path) {
  const std::uint32_t len = read_u32(in, path);
  std::string s(len, '\0');
  if (len > 0 && !in.read(s.data(), len)) throw std::runtime_error(path + ": truncated checkpoint");
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams<float>& model, const Vocabulary& vocab,
                     const std::string& config_json) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);

  out.write(magic, 4);
  write_u32(out, 1);
  write_u32(out, static_cast<std::uint32_t>(model.word_dim()));
  write_u32(out, static_cast<std::uint32_t>(model.ball_dim()));
  write_u32(out, static_cast<std::uint32_t>(vocab.size()));
  for (const auto& w : vocab.words()) {
    write_u32(out, static_cast<std::uint32_t>(w.size()));
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
  for (Eigen::Index r = 0; r < model.proj.weight.rows(); ++r)
    for (Eigen::Index c = 0; c < model.proj.weight.cols(); ++c) write_f32(out, model.proj.weight(r, c));
  for (Eigen::Index i = 0; i < model.proj.bias.size(); ++i) write_f32(out, model.proj.bias[i]);
  write_f32(out, model.score.weight);
  write_f32(out, model.score.bias);
  write_u32(out, static_cast<std::uint32_t>(config_json.size()));
  out.write(config_json.data(), static_cast<std::streamsize>(config_json.size()));
  if (!out) throw std::runtime_error("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);

  char head[4];
  if (!in.read(head, 4) || std::memcmp(head, magic, 4) != 0)
    throw std::runtime_error(path + ": not a checkpoint file (bad magic)");

  Checkpoint ckpt;
  ckpt.version = read_u32(in, path);
  if (ckpt.version != 1)
    throw std::runtime_error(path + ": unsupported checkpoint version " + std::to_string(ckpt.version));
  ckpt.word_dim = read_u32(in, path);
  ckpt.ball_dim = read_u32(in, path);
  const std::uint32_t vocab_size = read_u32(in, path);
  ckpt.vocab_words.reserve(vocab_size);
  for (std::uint32_t i = 0; i < vocab_size; ++i) ckpt.vocab_words.push_back(read_string(in, path));

  ckpt.proj_weight.resize(ckpt.ball_dim, ckpt.word_dim);
  for (Eigen::Index r = 0; r < ckpt.proj_weight.rows(); ++r)
    for (Eigen::Index c = 0; c < ckpt.proj_weight.cols(); ++c) ckpt.proj_weight(r, c) = read_f32(in, path);
  ckpt.proj_bias.resize(ckpt.ball_dim);
  for (Eigen::Index i = 0; i < ckpt.proj_bias.size(); ++i) ckpt.proj_bias[i] = read_f32(in, path);
  ckpt.score_weight = read_f32(in, path);
  ckpt.score_bias = read_f32(in, path);
  ckpt.config_json = read_string(in, path);
  return ckpt;
}

Vocabulary checkpoint_vocabulary(const Checkpoint& ckpt) {
  Vocabulary vocab;
  if (ckpt.vocab_words.empty() || ckpt.vocab_words[0] != "<pad>")
    throw std::runtime_error("checkpoint vocabulary missing padding entry");
  for (std::size_t i = 1; i < ckpt.vocab_words.size(); ++i) vocab.add(ckpt.vocab_words[i]);
  return vocab;
}

ModelParams<float> checkpoint_model(const Checkpoint& ckpt,
                                    std::shared_ptr<const WordVectorTable<float>> words) {
  if (words->dim() != static_cast<int>(ckpt.word_dim))
    throw std::runtime_error("word vector dimension " + std::to_string(words->dim()) +
                             " does not match checkpoint dimension " + std::to_string(ckpt.word_dim));
  if (words->vocab_size() != static_cast<std::int64_t>(ckpt.vocab_words.size()))
    throw std::runtime_error("word vector table size does not match checkpoint vocabulary");
  ModelParams<float> model;
  model.words = std::move(words);
  model.proj.weight = ckpt.proj_weight;
  model.proj.bias = ckpt.proj_bias;
  model.score.weight = ckpt.score_weight;
  model.score.bias = ckpt.score_bias;
  return model;
}

}  // namespace hyprank
