#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyprank/eval.hpp"
#include "hyprank/objective.hpp"

namespace hyprank {

enum class Population { question, answer, word };

// Contiguous unit bins from 0; counts sum to the population size.
struct NormHistogram {
  double bin_width = 1.0;
  std::vector<long> counts;  // counts[k] covers [k*bin_width, (k+1)*bin_width)
  Population population = Population::question;

  void insert(double norm) {
    const auto bin = static_cast<std::size_t>(std::floor(norm / bin_width));
    if (counts.size() <= bin) counts.resize(bin + 1, 0);
    ++counts[bin];
  }
  long total() const {
    long t = 0;
    for (long c : counts) t += c;
    return t;
  }
};

// Norms of the raw word sums, taken before the ball constraint, for every
// question and every candidate answer in the corpus.
template <class Scalar>
std::pair<NormHistogram, NormHistogram> qa_norm_histogram(const QaCorpus& corpus,
                                                          const ModelParams<Scalar>& model,
                                                          const Vocabulary& vocab, const SequenceOptions& seq,
                                                          double bin_width) {
  NormHistogram questions{bin_width, {}, Population::question};
  NormHistogram answers{bin_width, {}, Population::answer};
  EncodeCache<Scalar> cache;
  for (const auto& q : corpus.questions) {
    encode_sequence(make_sequence(q.tokens, vocab, Role::question, seq.max_question_len), *model.words,
                    model.proj, cache);
    questions.insert(static_cast<double>(cache.sum_norm));
    for (const auto& c : q.candidates) {
      encode_sequence(make_sequence(c.tokens, vocab, Role::answer, seq.max_answer_len), *model.words,
                      model.proj, cache);
      answers.insert(static_cast<double>(cache.sum_norm));
    }
  }
  return {questions, answers};
}

struct WordLevel {
  std::string word;
  double norm = 0;
  int level = 1;  // 1-based: level k covers norms in [(k-1)*bin, k*bin)
};

template <class Scalar>
int norm_level(Scalar norm, double bin_width) {
  return static_cast<int>(std::floor(static_cast<double>(norm) / bin_width)) + 1;
}

// Projects every vocabulary word and buckets it by norm; small norms sit
// near the origin (top of the hierarchy), large norms near the boundary.
template <class Scalar>
std::vector<WordLevel> word_hierarchy_levels(const Vocabulary& vocab, const ModelParams<Scalar>& model,
                                             double bin_width = 1.0) {
  std::vector<WordLevel> out;
  out.reserve(vocab.size() > 0 ? vocab.size() - 1 : 0);
  for (std::size_t id = 1; id < vocab.size(); ++id) {
    const Vec<Scalar> x = project_word(model.words->vectors.col(static_cast<Eigen::Index>(id)), model.proj);
    const double norm = static_cast<double>(x.norm());
    out.push_back({vocab.words()[id], norm, norm_level(norm, bin_width)});
  }
  return out;
}

// Word-by-word levels for one tokenized text, for inspecting how a QA pair
// distributes over the hierarchy.
template <class Scalar>
std::vector<WordLevel> annotate_tokens(const std::vector<std::string>& tokens,
                                       const ModelParams<Scalar>& model, const Vocabulary& vocab,
                                       double bin_width = 1.0) {
  std::vector<WordLevel> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const std::int32_t id = vocab.lookup(t);
    const Vec<Scalar> x = project_word(model.words->vectors.col(static_cast<Eigen::Index>(id)), model.proj);
    const double norm = static_cast<double>(x.norm());
    out.push_back({t, norm, norm_level(norm, bin_width)});
  }
  return out;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace detail

// bin_lower TAB count, one population per '#'-headed section.
inline void write_histograms_tsv(const std::string& path, const std::vector<NormHistogram>& histograms) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write histogram file: " + path);
  for (const auto& h : histograms) {
    switch (h.population) {
      case Population::question: out << "# question\n"; break;
      case Population::answer: out << "# answer\n"; break;
      case Population::word: out << "# word\n"; break;
    }
    for (std::size_t k = 0; k < h.counts.size(); ++k)
      out << detail::format_double(static_cast<double>(k) * h.bin_width) << '\t' << h.counts[k] << '\n';
  }
}

// word TAB norm TAB level
inline void write_hierarchy_tsv(const std::string& path, const std::vector<WordLevel>& levels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write hierarchy file: " + path);
  for (const auto& w : levels)
    out << w.word << '\t' << detail::format_double(w.norm) << '\t' << w.level << '\n';
}

// qid TAB role TAB coordinates (tab separated), one row per sequence; the
// coordinates are the constrained ball points.
template <class Scalar>
void export_embeddings(const QaCorpus& corpus, const ModelParams<Scalar>& model, const Vocabulary& vocab,
                       const SequenceOptions& seq, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);
  EncodeCache<Scalar> cache;
  const auto write_row = [&](const std::string& qid, const char* role, const Vec<Scalar>& point) {
    out << qid << '\t' << role;
    for (Eigen::Index i = 0; i < point.size(); ++i)
      out << '\t' << detail::format_double(static_cast<double>(point[i]));
    out << '\n';
  };
  for (const auto& q : corpus.questions) {
    const auto& qpoint = encode_sequence(make_sequence(q.tokens, vocab, Role::question, seq.max_question_len),
                                         *model.words, model.proj, cache);
    write_row(q.qid, "question", qpoint);
    for (const auto& c : q.candidates) {
      const auto& apoint = encode_sequence(make_sequence(c.tokens, vocab, Role::answer, seq.max_answer_len),
                                           *model.words, model.proj, cache);
      write_row(q.qid, "answer", apoint);
    }
  }
}

}  // namespace hyprank
