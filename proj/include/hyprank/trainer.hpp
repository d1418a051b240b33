#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyprank/adagrad.hpp"
#include "hyprank/eval.hpp"
#include "hyprank/objective.hpp"

namespace hyprank {

enum class SelectMetric { map, mrr, p_at_1 };

inline double metric_value(const EvalReport& r, SelectMetric m) {
  switch (m) {
    case SelectMetric::map: return r.map;
    case SelectMetric::mrr: return r.mrr;
    default: return r.p_at_1;
  }
}

template <class Scalar>
struct TrainOptions {
  Scalar lr = Scalar(0.05);
  Scalar margin = 5;
  Scalar l2 = Scalar(1e-5);
  int batch_size = 100;
  int epochs = 25;
  int neg_samples = 4;
  SequenceOptions seq;
  Similarity similarity = Similarity::hyperbolic;
  SelectMetric select = SelectMetric::map;
  std::uint32_t seed = 0;
  bool riemannian = true;
};

struct EpochRow {
  int epoch = 0;
  double mean_loss = 0;
  double dev_map = 0, dev_mrr = 0, dev_p_at_1 = 0;
  double seconds = 0;
  bool improved = false;
};

template <class Scalar>
struct TrainResult {
  ModelParams<Scalar> best;   // parameters at the best dev epoch
  ModelParams<Scalar> final;  // parameters after the last epoch
  std::vector<EpochRow> log;
  double best_metric = 0;
  int best_epoch = 0;
  // run-wide diagnostics
  double max_encoded_norm = 0;  // largest post-constraint norm seen
  long triples_seen = 0;
};

// Called after an epoch that improved the dev metric; used for
// save-on-best checkpointing.
template <class Scalar>
using ImprovedCallback = std::function<void(const ModelParams<Scalar>&, const EpochRow&)>;

// Called after every epoch, for live progress reporting.
using EpochCallback = std::function<void(const EpochRow&)>;

namespace detail {

struct PositivePair {
  int question;
  int candidate;
};

inline std::vector<PositivePair> positive_pairs(const QaCorpus& corpus) {
  std::vector<PositivePair> pairs;
  for (std::size_t qi = 0; qi < corpus.questions.size(); ++qi)
    for (std::size_t ci = 0; ci < corpus.questions[qi].candidates.size(); ++ci)
      if (corpus.questions[qi].candidates[ci].label == 1)
        pairs.push_back({static_cast<int>(qi), static_cast<int>(ci)});
  return pairs;
}

}  // namespace detail

// Trains with shuffled mini-batches of (question, positive, sampled
// negative) triples; the loss of a batch is the mean over its triples.  One
// epoch enumerates every (question, positive) pair and expands it into
// neg_samples triples with freshly drawn negatives.
template <class Scalar>
TrainResult<Scalar> train(const QaCorpus& train_corpus, const QaCorpus& dev_corpus,
                          std::shared_ptr<const WordVectorTable<Scalar>> words, const Vocabulary& vocab,
                          int ball_dim, const TrainOptions<Scalar>& opts,
                          const ImprovedCallback<Scalar>& on_improved = {},
                          const EpochCallback& on_epoch = {}) {
  if (!train_corpus.has_positive())
    throw std::runtime_error("training corpus has no positive answers");

  std::mt19937 rng(opts.seed);
  TrainResult<Scalar> result;
  ModelParams<Scalar> model = init_model(words, ball_dim, rng);
  AdaGradState<Scalar> state(ball_dim, model.word_dim(), opts.lr, opts.l2);
  LossConfig<Scalar> loss_cfg{opts.margin, opts.similarity, opts.riemannian};

  // token sequences are fixed per split; encode ids once
  std::vector<TokenSequence> question_seqs(train_corpus.questions.size());
  std::vector<std::vector<TokenSequence>> candidate_seqs(train_corpus.questions.size());
  for (std::size_t qi = 0; qi < train_corpus.questions.size(); ++qi) {
    question_seqs[qi] =
        make_sequence(train_corpus.questions[qi].tokens, vocab, Role::question, opts.seq.max_question_len);
    for (const auto& c : train_corpus.questions[qi].candidates)
      candidate_seqs[qi].push_back(make_sequence(c.tokens, vocab, Role::answer, opts.seq.max_answer_len));
  }

  const NegativeSampler sampler(train_corpus);
  const auto pairs = detail::positive_pairs(train_corpus);

  struct TripleRef {
    int question;
    int positive;
    CandidateRef negative;
  };

  GradientSet<Scalar> grads;
  TripleForward<Scalar> fwd;
  result.best_metric = -1;

  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<TripleRef> triples;
    triples.reserve(pairs.size() * static_cast<std::size_t>(opts.neg_samples));
    const auto seq_of = [&](const CandidateRef& ref) -> const TokenSequence& {
      return candidate_seqs[static_cast<std::size_t>(ref.question)][static_cast<std::size_t>(ref.candidate)];
    };
    for (const auto& pair : pairs) {
      const auto& pos_seq = candidate_seqs[static_cast<std::size_t>(pair.question)][static_cast<std::size_t>(pair.candidate)];
      auto negatives = sampler.sample(pair.question, opts.neg_samples, rng);
      const int n_local = (opts.neg_samples + 1) / 2;
      for (std::size_t slot = 0; slot < negatives.size(); ++slot) {
        // corrupted answer must differ from the correct one token-for-token;
        // redraw collisions from the same half of the mix
        CandidateRef neg = negatives[slot];
        for (int attempt = 0; attempt < 16 && seq_of(neg).ids == pos_seq.ids; ++attempt)
          neg = slot < static_cast<std::size_t>(n_local) ? sampler.draw_local(pair.question, rng)
                                                         : sampler.draw_global(pair.question, rng);
        if (seq_of(neg).ids == pos_seq.ids) continue;
        triples.push_back({pair.question, pair.candidate, neg});
      }
    }
    std::shuffle(triples.begin(), triples.end(), rng);

    double epoch_loss = 0;
    long epoch_triples = 0;
    for (std::size_t start = 0; start < triples.size(); start += static_cast<std::size_t>(opts.batch_size)) {
      const std::size_t end = std::min(triples.size(), start + static_cast<std::size_t>(opts.batch_size));
      const auto batch_n = static_cast<Scalar>(end - start);
      grads.setZero(ball_dim, model.word_dim());
      for (std::size_t i = start; i < end; ++i) {
        const auto& t = triples[i];
        TrainingTriple triple{question_seqs[static_cast<std::size_t>(t.question)],
                              candidate_seqs[static_cast<std::size_t>(t.question)][static_cast<std::size_t>(t.positive)],
                              candidate_seqs[static_cast<std::size_t>(t.negative.question)][static_cast<std::size_t>(t.negative.candidate)]};
        const Scalar loss = triple_forward(triple, model, loss_cfg, fwd);
        if (!std::isfinite(static_cast<double>(loss)))
          throw std::runtime_error("training diverged: non-finite loss at epoch " + std::to_string(epoch));
        triple_backward(fwd, model, loss_cfg, Scalar(1) / batch_n, grads);
        epoch_loss += static_cast<double>(loss);
        ++epoch_triples;
        result.max_encoded_norm =
            std::max({result.max_encoded_norm, static_cast<double>(fwd.question.output.norm()),
                      static_cast<double>(fwd.positive.output.norm()),
                      static_cast<double>(fwd.negative.output.norm())});
      }
      apply_gradients(model, grads, state);
    }
    result.triples_seen += epoch_triples;
    if (!model.all_finite())
      throw std::runtime_error("training diverged: non-finite parameters at epoch " + std::to_string(epoch));

    const EvalReport dev = evaluate(dev_corpus, model, vocab, opts.seq, opts.similarity);
    const double metric = metric_value(dev, opts.select);

    EpochRow row;
    row.epoch = epoch;
    row.mean_loss = epoch_triples > 0 ? epoch_loss / static_cast<double>(epoch_triples) : 0;
    row.dev_map = dev.map;
    row.dev_mrr = dev.mrr;
    row.dev_p_at_1 = dev.p_at_1;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.improved = metric > result.best_metric;
    if (row.improved) {
      result.best_metric = metric;
      result.best_epoch = epoch;
      result.best = model;
      if (on_improved) on_improved(model, row);
    }
    result.log.push_back(row);
    if (on_epoch) on_epoch(row);
  }
  result.final = model;
  if (result.best_epoch == 0) result.best = model;
  return result;
}

}  // namespace hyprank
