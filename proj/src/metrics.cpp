#include "hyprank/metrics.hpp"

#include <json.hpp>

namespace hyprank {

double average_precision(const std::vector<int>& ranked_labels) {
  double sum = 0;
  int positives = 0;
  for (std::size_t i = 0; i < ranked_labels.size(); ++i) {
    if (ranked_labels[i] > 0) {
      ++positives;
      sum += static_cast<double>(positives) / static_cast<double>(i + 1);
    }
  }
  return positives == 0 ? 0.0 : sum / positives;
}

double reciprocal_rank(const std::vector<int>& ranked_labels) {
  for (std::size_t i = 0; i < ranked_labels.size(); ++i)
    if (ranked_labels[i] > 0) return 1.0 / static_cast<double>(i + 1);
  return 0.0;
}

double precision_at_1(const std::vector<int>& ranked_labels) {
  return !ranked_labels.empty() && ranked_labels.front() > 0 ? 1.0 : 0.0;
}

EvalReport aggregate_rankings(const std::vector<std::pair<std::string, std::vector<int>>>& ranked) {
  EvalReport report;
  for (const auto& [qid, labels] : ranked) {
    bool any_positive = false;
    for (int l : labels) any_positive |= l > 0;
    if (!any_positive) continue;

    PerQuestionResult r;
    r.qid = qid;
    r.ranked_labels = labels;
    r.ap = average_precision(labels);
    r.rr = reciprocal_rank(labels);
    report.map += r.ap;
    report.mrr += r.rr;
    report.p_at_1 += precision_at_1(labels);
    report.per_question.push_back(std::move(r));
  }
  report.num_questions = static_cast<int>(report.per_question.size());
  if (report.num_questions > 0) {
    report.map /= report.num_questions;
    report.mrr /= report.num_questions;
    report.p_at_1 /= report.num_questions;
  }
  return report;
}

std::string report_to_json(const EvalReport& report, bool include_per_question) {
  nlohmann::json j;
  j["map"] = report.map;
  j["mrr"] = report.mrr;
  j["p_at_1"] = report.p_at_1;
  j["num_questions"] = report.num_questions;
  if (include_per_question) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& q : report.per_question) {
      per.push_back({{"qid", q.qid}, {"labels", q.ranked_labels}, {"ap", q.ap}, {"rr", q.rr}});
    }
    j["per_question"] = per;
  }
  return j.dump(2);
}

}  // namespace hyprank
