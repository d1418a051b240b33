#pragma once

#include <string>
#include <vector>

namespace hyprank {

// Rank-order metrics over 0/1 label vectors.  Callers must exclude
// questions without any positive label before computing these.
double average_precision(const std::vector<int>& ranked_labels);
double reciprocal_rank(const std::vector<int>& ranked_labels);
double precision_at_1(const std::vector<int>& ranked_labels);

struct PerQuestionResult {
  std::string qid;
  std::vector<int> ranked_labels;
  double ap = 0;
  double rr = 0;
};

// MAP / MRR / P@1 with per-question diagnostics.  Questions lacking a
// positive candidate are excluded from every aggregate.
struct EvalReport {
  double map = 0;
  double mrr = 0;
  double p_at_1 = 0;
  int num_questions = 0;
  std::vector<PerQuestionResult> per_question;
};

// Aggregates already-ranked label vectors into a report.
EvalReport aggregate_rankings(const std::vector<std::pair<std::string, std::vector<int>>>& ranked);

std::string report_to_json(const EvalReport& report, bool include_per_question = true);

}  // namespace hyprank
