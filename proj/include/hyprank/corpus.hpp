#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

namespace hyprank {

constexpr std::int32_t pad_id = 0;

enum class Role { question, answer };

// Token ids padded with pad_id to exactly the role's length cap.
struct TokenSequence {
  std::vector<std::int32_t> ids;
  Role role = Role::question;
};

struct Candidate {
  std::vector<std::string> tokens;
  int label = 0;  // 1 = correct answer
};

struct QaQuestion {
  std::string qid;
  std::vector<std::string> tokens;
  std::vector<Candidate> candidates;
};

// Questions grouped with their labeled candidate answers, in file order.
struct QaCorpus {
  std::vector<QaQuestion> questions;

  bool has_negative() const;
  bool has_positive() const;
};

// id 0 is reserved for padding; real words start at 1, in first-seen order.
class Vocabulary {
 public:
  Vocabulary();

  std::int32_t add(const std::string& word);
  // pad_id for words that were never added.
  std::int32_t lookup(const std::string& word) const;
  bool contains(const std::string& word) const;

  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::int32_t> index_;
};

// Lowercases (ASCII) and splits on runs of whitespace.
std::vector<std::string> tokenize(const std::string& text);

// One record per line: qid TAB question TAB answer TAB label(0|1).
// Records are grouped by qid preserving file order; malformed lines throw
// with the offending line number.
QaCorpus load_qa_tsv(const std::string& path);

// Inverse of load_qa_tsv over already-tokenized text (tokens joined by a
// single space); load(save(c)) == c.
void save_qa_tsv(const QaCorpus& corpus, const std::string& path);

// All tokens of every question and candidate, first-seen order.
Vocabulary build_vocabulary(const QaCorpus& corpus);
void extend_vocabulary(Vocabulary& vocab, const QaCorpus& corpus);

// Truncates to the first `cap` tokens, pads with pad_id to exactly `cap`.
TokenSequence make_sequence(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                            Role role, int cap);

struct CandidateRef {
  int question = 0;
  int candidate = 0;

  bool operator==(const CandidateRef&) const = default;
};

// Mix sampling over a fixed corpus: half the draws come from the question's
// own wrong answers (hard negatives), half from wrong answers of other
// questions (easy negatives).  Pools are precomputed so draws are O(1).
class NegativeSampler {
 public:
  explicit NegativeSampler(const QaCorpus& corpus);

  // k in [2,8]: ceil(k/2) local draws + floor(k/2) global draws.  A question
  // without local negatives falls back to corpus-wide draws; a corpus with
  // no negatives at all throws.
  std::vector<CandidateRef> sample(int question_idx, int k, std::mt19937& rng) const;

  // single draws, exposed so callers can redraw one slot without disturbing
  // the local/global composition
  CandidateRef draw_local(int question_idx, std::mt19937& rng) const;
  CandidateRef draw_global(int question_idx, std::mt19937& rng) const;

 private:
  std::vector<std::vector<int>> local_pools_;  // label-0 candidate indices per question
  std::vector<CandidateRef> all_negatives_;    // corpus-wide label-0 pool
};

}  // namespace hyprank
