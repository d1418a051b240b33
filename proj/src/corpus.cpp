#include "hyprank/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hyprank {

bool QaCorpus::has_negative() const {
  for (const auto& q : questions)
    for (const auto& c : q.candidates)
      if (c.label == 0) return true;
  return false;
}

bool QaCorpus::has_positive() const {
  for (const auto& q : questions)
    for (const auto& c : q.candidates)
      if (c.label == 1) return true;
  return false;
}

Vocabulary::Vocabulary() { words_.push_back("<pad>"); }

std::int32_t Vocabulary::add(const std::string& word) {
  auto it = index_.find(word);
  if (it != index_.end()) return it->second;
  const auto id = static_cast<std::int32_t>(words_.size());
  words_.push_back(word);
  index_.emplace(word, id);
  return id;
}

std::int32_t Vocabulary::lookup(const std::string& word) const {
  auto it = index_.find(word);
  return it == index_.end() ? pad_id : it->second;
}

bool Vocabulary::contains(const std::string& word) const { return index_.count(word) != 0; }

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char ch : text) {
    if (std::isspace(ch)) {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
    } else {
      current.push_back(static_cast<char>(std::tolower(ch)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

}  // namespace

QaCorpus load_qa_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);

  QaCorpus corpus;
  std::unordered_map<std::string, std::size_t> by_qid;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 4)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 4 tab-separated fields, got " +
                               std::to_string(fields.size()));
    if (fields[3] != "0" && fields[3] != "1")
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": label must be 0 or 1, got '" + fields[3] +
                               "'");

    auto it = by_qid.find(fields[0]);
    if (it == by_qid.end()) {
      it = by_qid.emplace(fields[0], corpus.questions.size()).first;
      corpus.questions.push_back({fields[0], tokenize(fields[1]), {}});
    }
    corpus.questions[it->second].candidates.push_back({tokenize(fields[2]), fields[3] == "1" ? 1 : 0});
  }
  return corpus;
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

void save_qa_tsv(const QaCorpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);
  for (const auto& q : corpus.questions) {
    const std::string qtext = join_tokens(q.tokens);
    for (const auto& c : q.candidates)
      out << q.qid << '\t' << qtext << '\t' << join_tokens(c.tokens) << '\t' << c.label << '\n';
  }
}

Vocabulary build_vocabulary(const QaCorpus& corpus) {
  Vocabulary vocab;
  extend_vocabulary(vocab, corpus);
  return vocab;
}

void extend_vocabulary(Vocabulary& vocab, const QaCorpus& corpus) {
  for (const auto& q : corpus.questions) {
    for (const auto& t : q.tokens) vocab.add(t);
    for (const auto& c : q.candidates)
      for (const auto& t : c.tokens) vocab.add(t);
  }
}

TokenSequence make_sequence(const std::vector<std::string>& tokens, const Vocabulary& vocab, Role role,
                            int cap) {
  TokenSequence seq;
  seq.role = role;
  seq.ids.assign(static_cast<std::size_t>(cap), pad_id);
  const std::size_t n = std::min(tokens.size(), static_cast<std::size_t>(cap));
  for (std::size_t i = 0; i < n; ++i) seq.ids[i] = vocab.lookup(tokens[i]);
  return seq;
}

NegativeSampler::NegativeSampler(const QaCorpus& corpus) {
  local_pools_.resize(corpus.questions.size());
  for (std::size_t qi = 0; qi < corpus.questions.size(); ++qi) {
    const auto& cands = corpus.questions[qi].candidates;
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
      if (cands[ci].label == 0) {
        local_pools_[qi].push_back(static_cast<int>(ci));
        all_negatives_.push_back({static_cast<int>(qi), static_cast<int>(ci)});
      }
    }
  }
  if (all_negatives_.empty())
    throw std::runtime_error("negative sampling requires at least one label-0 answer in the corpus");
}

CandidateRef NegativeSampler::draw_local(int question_idx, std::mt19937& rng) const {
  const auto& pool = local_pools_[static_cast<std::size_t>(question_idx)];
  if (pool.empty()) {
    // no wrong answers of its own: fall back to the corpus-wide pool
    std::uniform_int_distribution<std::size_t> pick(0, all_negatives_.size() - 1);
    return all_negatives_[pick(rng)];
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return {question_idx, pool[pick(rng)]};
}

CandidateRef NegativeSampler::draw_global(int question_idx, std::mt19937& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, all_negatives_.size() - 1);
  // rejection-sample away from the asking question; if every negative in the
  // corpus belongs to it, accept that
  for (int attempt = 0; attempt < 64; ++attempt) {
    CandidateRef ref = all_negatives_[pick(rng)];
    if (ref.question != question_idx) return ref;
  }
  return all_negatives_[pick(rng)];
}

std::vector<CandidateRef> NegativeSampler::sample(int question_idx, int k, std::mt19937& rng) const {
  if (k < 1) throw std::invalid_argument("negative sample count must be positive");
  std::vector<CandidateRef> out;
  out.reserve(static_cast<std::size_t>(k));
  const int n_local = (k + 1) / 2;
  for (int i = 0; i < n_local; ++i) out.push_back(draw_local(question_idx, rng));
  for (int i = n_local; i < k; ++i) out.push_back(draw_global(question_idx, rng));
  return out;
}

}  // namespace hyprank
