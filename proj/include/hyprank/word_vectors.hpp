#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "hyprank/ball_geometry.hpp"
#include "hyprank/corpus.hpp"

namespace hyprank {

// Frozen pretrained word vectors, one column per vocabulary id.  Column 0 is
// the padding row and stays zero; vocabulary words missing from the
// pretrained file also keep zero columns.  Never mutated after load.
template <class Scalar>
struct WordVectorTable {
  Mat<Scalar> vectors;  // n x vocab_size

  int dim() const { return static_cast<int>(vectors.rows()); }
  std::int64_t vocab_size() const { return vectors.cols(); }

  // FNV-1a over the raw coefficients; lets tests pin down that training
  // leaves the table untouched.
  std::uint64_t checksum() const {
    std::uint64_t h = 1469598103934665603ull;
    const Scalar* data = vectors.data();
    const auto bytes = static_cast<std::size_t>(vectors.size()) * sizeof(Scalar);
    const auto* p = reinterpret_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Text format, one entry per line: word SPACE v1 SPACE ... SPACE vn.  The
// dimension is inferred from the first line and enforced on every later
// line.  Only rows for in-vocabulary words are kept.
template <class Scalar>
WordVectorTable<Scalar> load_word_vectors(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open word vector file: " + path);

  WordVectorTable<Scalar> table;
  std::string line;
  std::size_t lineno = 0;
  int dim = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const std::size_t word_end = line.find(' ');
    if (word_end == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": no vector components");
    const std::string word = line.substr(0, word_end);

    int fields = 0;
    for (std::size_t i = word_end; i < line.size();) {
      while (i < line.size() && line[i] == ' ') ++i;
      if (i >= line.size()) break;
      ++fields;
      while (i < line.size() && line[i] != ' ') ++i;
    }
    if (dim < 0) {
      dim = fields;
      if (dim == 0) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": no vector components");
      table.vectors = Mat<Scalar>::Zero(dim, static_cast<Eigen::Index>(vocab.size()));
    } else if (fields != dim) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                               " components, got " + std::to_string(fields));
    }

    const std::int32_t id = vocab.lookup(word);
    if (id == pad_id) continue;

    const char* cursor = line.c_str() + word_end;
    for (int k = 0; k < dim; ++k) {
      char* end = nullptr;
      const double value = std::strtod(cursor, &end);
      if (end == cursor)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-numeric component " +
                                 std::to_string(k + 1));
      table.vectors(k, id) = static_cast<Scalar>(value);
      cursor = end;
    }
  }
  if (dim < 0) {
    // empty file: every word keeps a zero row of the vocabulary's choosing
    throw std::runtime_error(path + ": empty word vector file");
  }
  return table;
}

// All-zero table for vocabularies trained without pretrained vectors
// (testing convenience).
template <class Scalar>
WordVectorTable<Scalar> zero_word_vectors(int dim, const Vocabulary& vocab) {
  WordVectorTable<Scalar> table;
  table.vectors = Mat<Scalar>::Zero(dim, static_cast<Eigen::Index>(vocab.size()));
  return table;
}

}  // namespace hyprank
