#pragma once

#include <algorithm>
#include <numeric>

#include "hyprank/metrics.hpp"
#include "hyprank/objective.hpp"

namespace hyprank {

struct SequenceOptions {
  int max_question_len = 25;
  int max_answer_len = 50;
};

// Candidate order for one question: ascending score for hyperbolic
// similarity (smaller distance = better match), descending for cosine.
// Stable, so ties keep their input order.
template <class Scalar>
std::vector<int> rank_candidates(const TokenSequence& question, const std::vector<TokenSequence>& candidates,
                                 const ModelParams<Scalar>& model, Similarity sim) {
  EncodeCache<Scalar> qc, ac;
  const Vec<Scalar> q = encode_sequence(question, *model.words, model.proj, qc);
  std::vector<Scalar> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Vec<Scalar>& a = encode_sequence(candidates[i], *model.words, model.proj, ac);
    scores[i] = score(q, a, model.score, sim);
  }
  std::vector<int> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  if (sim == Similarity::hyperbolic)
    std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return scores[l] < scores[r]; });
  else
    std::stable_sort(order.begin(), order.end(), [&](int l, int r) { return scores[l] > scores[r]; });
  return order;
}

// Ranks every question in the corpus and aggregates MAP / MRR / P@1.
template <class Scalar>
EvalReport evaluate(const QaCorpus& corpus, const ModelParams<Scalar>& model, const Vocabulary& vocab,
                    const SequenceOptions& seq, Similarity sim) {
  std::vector<std::pair<std::string, std::vector<int>>> ranked;
  ranked.reserve(corpus.questions.size());
  for (const auto& question : corpus.questions) {
    if (question.candidates.empty()) continue;
    const TokenSequence qseq = make_sequence(question.tokens, vocab, Role::question, seq.max_question_len);
    std::vector<TokenSequence> cands;
    cands.reserve(question.candidates.size());
    for (const auto& c : question.candidates)
      cands.push_back(make_sequence(c.tokens, vocab, Role::answer, seq.max_answer_len));
    const std::vector<int> order = rank_candidates(qseq, cands, model, sim);
    std::vector<int> labels(order.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      labels[i] = question.candidates[static_cast<std::size_t>(order[i])].label;
    ranked.emplace_back(question.qid, std::move(labels));
  }
  return aggregate_rankings(ranked);
}

}  // namespace hyprank
