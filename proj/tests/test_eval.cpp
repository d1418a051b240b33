#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <random>

#include "hyprank/eval.hpp"

using namespace hyprank;

namespace {

// Brute-force re-derivation of the metrics: precision at each prefix is
// recomputed from scratch, independent of the running-count implementation.
double ap_oracle(const std::vector<int>& labels) {
  double sum = 0;
  int positives = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    ++positives;
    int hits = 0;
    for (std::size_t j = 0; j <= i; ++j)
      if (labels[j] == 1) ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return positives == 0 ? 0.0 : sum / positives;
}

double rr_oracle(const std::vector<int>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == 1) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

double p1_oracle(const std::vector<int>& labels) { return labels.empty() ? 0.0 : (labels[0] == 1 ? 1.0 : 0.0); }

// fixed-score model: identity projection on 1-dim "words" whose single
// coordinate is the desired score surrogate
struct ToyRanking {
  std::vector<double> scores;
};

}  // namespace

TEST_CASE("metric examples") {
  CHECK(average_precision({1, 0}) == 1.0);
  CHECK(reciprocal_rank({1, 0}) == 1.0);
  CHECK(precision_at_1({1, 0}) == 1.0);

  CHECK(average_precision({0, 1}) == 0.5);
  CHECK(reciprocal_rank({0, 1}) == 0.5);
  CHECK(precision_at_1({0, 1}) == 0.0);

  CHECK(average_precision({1, 0, 1}) == doctest::Approx(0.8333333333333333).epsilon(1e-12));
  CHECK(reciprocal_rank({1, 0, 1}) == 1.0);
  CHECK(precision_at_1({1, 0, 1}) == 1.0);
}

TEST_CASE("metrics agree exactly with the brute-force oracle") {
  std::mt19937 rng(103);
  std::uniform_int_distribution<int> len(1, 10);
  std::uniform_int_distribution<int> bit(0, 1);
  int with_positive = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<int> labels(static_cast<std::size_t>(len(rng)));
    for (auto& l : labels) l = bit(rng);
    if (std::find(labels.begin(), labels.end(), 1) == labels.end()) labels[0] = 1;
    ++with_positive;
    CHECK(average_precision(labels) == ap_oracle(labels));
    CHECK(reciprocal_rank(labels) == rr_oracle(labels));
    CHECK(precision_at_1(labels) == p1_oracle(labels));
  }
  CHECK(with_positive == 1000);
}

TEST_CASE("metric bounds and P@1/RR coupling") {
  std::mt19937 rng(107);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_int_distribution<int> bit(0, 1);
  for (int i = 0; i < 300; ++i) {
    std::vector<int> labels(static_cast<std::size_t>(len(rng)));
    for (auto& l : labels) l = bit(rng);
    labels[static_cast<std::size_t>(std::uniform_int_distribution<int>(
        0, static_cast<int>(labels.size()) - 1)(rng))] = 1;
    const double ap = average_precision(labels);
    const double rr = reciprocal_rank(labels);
    const double p1 = precision_at_1(labels);
    CHECK(ap >= 0.0);
    CHECK(ap <= 1.0);
    CHECK(rr >= 0.0);
    CHECK(rr <= 1.0);
    CHECK((p1 == 1.0) == (rr == 1.0));
  }
}

namespace {

// model whose score for candidate i is forced through a one-word sequence:
// word id i+1 has vector (x_i, 0), identity projection keeps it, and the
// question encodes to the origin, so the hyperbolic score is monotone in |x_i|
struct ScoreRig {
  std::shared_ptr<WordVectorTable<double>> table;
  ModelParams<double> model;
  TokenSequence question;
  std::vector<TokenSequence> candidates;

  explicit ScoreRig(const std::vector<double>& xs) {
    table = std::make_shared<WordVectorTable<double>>();
    table->vectors = Mat<double>::Zero(2, static_cast<Eigen::Index>(xs.size()) + 1);
    for (std::size_t i = 0; i < xs.size(); ++i) table->vectors(0, static_cast<Eigen::Index>(i) + 1) = xs[i];
    model.words = table;
    model.proj.weight = Mat<double>::Identity(2, 2);
    model.proj.bias = Vec<double>::Zero(2);
    model.score.weight = 1.0;
    model.score.bias = 0.0;
    question = {{0}, Role::question};  // encodes to the origin
    for (std::size_t i = 0; i < xs.size(); ++i)
      candidates.push_back({{static_cast<std::int32_t>(i) + 1}, Role::answer});
  }
};

}  // namespace

TEST_CASE("rank_candidates sorts ascending for hyperbolic scores") {
  // distances from the origin are monotone in the coordinate
  ScoreRig rig({0.8, 0.2, 0.5});
  const auto order = rank_candidates(rig.question, rig.candidates, rig.model, Similarity::hyperbolic);
  REQUIRE(order.size() == 3);
  CHECK(order[0] == 1);
  CHECK(order[1] == 2);
  CHECK(order[2] == 0);
}

TEST_CASE("rank_candidates breaks ties by input order") {
  ScoreRig rig({0.4, 0.4, 0.4});
  const auto order = rank_candidates(rig.question, rig.candidates, rig.model, Similarity::hyperbolic);
  CHECK(order == std::vector<int>{0, 1, 2});

  ScoreRig single({0.3});
  const auto one = rank_candidates(single.question, single.candidates, single.model, Similarity::hyperbolic);
  CHECK(one == std::vector<int>{0});
}

TEST_CASE("distinct scores make the ranking independent of input order") {
  ScoreRig rig({0.9, 0.1, 0.6, 0.3});
  const auto order = rank_candidates(rig.question, rig.candidates, rig.model, Similarity::hyperbolic);
  ScoreRig permuted({0.3, 0.6, 0.1, 0.9});
  const auto order2 = rank_candidates(permuted.question, permuted.candidates, permuted.model,
                                      Similarity::hyperbolic);
  // same multiset of scores: the winning score is the same one
  CHECK(order[0] == 1);
  CHECK(order2[0] == 2);
}

TEST_CASE("evaluate excludes questions without positives and reports means") {
  ScoreRig rig({0.2, 0.8});
  QaCorpus corpus;
  corpus.questions.push_back({"q1", {}, {{{}, 1}, {{}, 0}}});
  corpus.questions.push_back({"q2", {}, {{{}, 0}, {{}, 0}}});  // excluded

  // use the rig's model but a corpus-made vocabulary: empty token lists all
  // encode to the origin, every candidate ties, stable order decides
  Vocabulary vocab;
  const EvalReport report = evaluate(corpus, rig.model, vocab, {4, 4}, Similarity::hyperbolic);
  CHECK(report.num_questions == 1);
  CHECK(report.per_question.size() == 1);
  CHECK(report.per_question[0].qid == "q1");
  CHECK(report.map == 1.0);
  CHECK(report.p_at_1 == 1.0);
}

TEST_CASE("report serializes with the fixed JSON keys") {
  EvalReport report;
  report.map = 0.5;
  report.mrr = 0.75;
  report.p_at_1 = 0.25;
  report.num_questions = 4;
  report.per_question.push_back({"q1", {1, 0}, 1.0, 1.0});

  const auto j = nlohmann::json::parse(report_to_json(report));
  CHECK(j.at("map").get<double>() == 0.5);
  CHECK(j.at("mrr").get<double>() == 0.75);
  CHECK(j.at("p_at_1").get<double>() == 0.25);
  CHECK(j.at("num_questions").get<int>() == 4);
  CHECK(j.at("per_question").size() == 1);
  CHECK(j.at("per_question")[0].at("qid") == "q1");
}

TEST_CASE("aggregate_rankings averages per-question values") {
  std::vector<std::pair<std::string, std::vector<int>>> ranked = {
      {"a", {1, 0}},   // ap 1.0, rr 1.0, p1 1
      {"b", {0, 1}},   // ap 0.5, rr 0.5, p1 0
      {"c", {0, 0}},   // excluded
  };
  const EvalReport report = aggregate_rankings(ranked);
  CHECK(report.num_questions == 2);
  CHECK(report.map == doctest::Approx(0.75));
  CHECK(report.mrr == doctest::Approx(0.75));
  CHECK(report.p_at_1 == doctest::Approx(0.5));
}
