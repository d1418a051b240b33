// Command line front end: train | eval | analyze over TSV corpora and
// pretrained word vectors.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>

#include "hyprank/analysis.hpp"
#include "hyprank/checkpoint.hpp"
#include "hyprank/eval.hpp"
#include "hyprank/log.hpp"
#include "hyprank/trainer.hpp"
#include "hyprank/word_vectors.hpp"

namespace {

using json = nlohmann::json;

struct RunConfig {
  std::string train_path, dev_path, test_path, vectors_path, checkpoint_path, out_dir;
  double lr = 0.05;
  int batch_size = 100;
  int epochs = 25;
  int proj_dim = 300;
  double margin = 5;
  double l2 = 1e-5;
  int neg_samples = 4;
  int max_q_len = 25;
  int max_a_len = 50;
  std::string similarity = "hyperbolic";
  std::string select_metric = "map";
  std::uint32_t seed = 0;
  double bin_width = 1.0;
};

json config_to_json(const RunConfig& c) {
  return json{{"train", c.train_path},
              {"dev", c.dev_path},
              {"test", c.test_path},
              {"vectors", c.vectors_path},
              {"checkpoint", c.checkpoint_path},
              {"lr", c.lr},
              {"batch_size", c.batch_size},
              {"epochs", c.epochs},
              {"proj_dim", c.proj_dim},
              {"margin", c.margin},
              {"l2", c.l2},
              {"neg_samples", c.neg_samples},
              {"max_q_len", c.max_q_len},
              {"max_a_len", c.max_a_len},
              {"similarity", c.similarity},
              {"select_metric", c.select_metric},
              {"seed", c.seed}};
}

hyprank::Similarity parse_similarity(const std::string& s) {
  return s == "cosine" ? hyprank::Similarity::cosine : hyprank::Similarity::hyperbolic;
}

hyprank::SelectMetric parse_select(const std::string& s) {
  if (s == "mrr") return hyprank::SelectMetric::mrr;
  if (s == "p@1") return hyprank::SelectMetric::p_at_1;
  return hyprank::SelectMetric::map;
}

void add_hyperparameters(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--lr", cfg.lr, "AdaGrad learning rate");
  cmd->add_option("--batch-size", cfg.batch_size, "triples per batch")->check(CLI::PositiveNumber);
  cmd->add_option("--epochs", cfg.epochs, "training epochs")->check(CLI::PositiveNumber);
  cmd->add_option("--proj-dim", cfg.proj_dim, "projection (ball) dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--margin", cfg.margin, "hinge margin")->check(CLI::PositiveNumber);
  cmd->add_option("--l2", cfg.l2, "weight decay on the projection matrix");
  cmd->add_option("--neg-samples", cfg.neg_samples, "negatives per positive pair")->check(CLI::Range(2, 8));
  cmd->add_option("--max-q-len", cfg.max_q_len, "question length cap")->check(CLI::PositiveNumber);
  cmd->add_option("--max-a-len", cfg.max_a_len, "answer length cap")->check(CLI::PositiveNumber);
  cmd->add_option("--similarity", cfg.similarity, "similarity function")
      ->check(CLI::IsMember({"hyperbolic", "cosine"}));
  cmd->add_option("--select-metric", cfg.select_metric, "dev metric for model selection")
      ->check(CLI::IsMember({"map", "mrr", "p@1"}));
}

int run_train(const RunConfig& cfg) {
  using namespace hyprank;

  const QaCorpus train_corpus = load_qa_tsv(cfg.train_path);
  const QaCorpus dev_corpus = load_qa_tsv(cfg.dev_path);

  Vocabulary vocab = build_vocabulary(train_corpus);
  extend_vocabulary(vocab, dev_corpus);
  if (!cfg.test_path.empty()) extend_vocabulary(vocab, load_qa_tsv(cfg.test_path));
  HYPRANK_INFO("vocabulary: %zu words", vocab.size() - 1);

  auto words = std::make_shared<const WordVectorTable<float>>(load_word_vectors<float>(cfg.vectors_path, vocab));
  HYPRANK_INFO("word vectors: dim %d", words->dim());

  TrainOptions<float> opts;
  opts.lr = static_cast<float>(cfg.lr);
  opts.margin = static_cast<float>(cfg.margin);
  opts.l2 = static_cast<float>(cfg.l2);
  opts.batch_size = cfg.batch_size;
  opts.epochs = cfg.epochs;
  opts.neg_samples = cfg.neg_samples;
  opts.seq = {cfg.max_q_len, cfg.max_a_len};
  opts.similarity = parse_similarity(cfg.similarity);
  opts.select = parse_select(cfg.select_metric);
  opts.seed = cfg.seed;

  const std::string config_json = config_to_json(cfg).dump();
  const ImprovedCallback<float> save_best = [&](const ModelParams<float>& model, const EpochRow& row) {
    save_checkpoint(cfg.checkpoint_path, model, vocab, config_json);
    HYPRANK_DEBUG("epoch %d: checkpoint saved to %s", row.epoch, cfg.checkpoint_path.c_str());
  };

  const EpochCallback print_row = [&](const EpochRow& row) {
    if (log_level() < 1) return;
    std::printf("epoch %d/%d  loss %.6f  dev map %.4f mrr %.4f p@1 %.4f  %.2fs%s\n", row.epoch, cfg.epochs,
                row.mean_loss, row.dev_map, row.dev_mrr, row.dev_p_at_1, row.seconds,
                row.improved ? "  [saved]" : "");
    std::fflush(stdout);
  };

  TrainResult<float> result =
      train(train_corpus, dev_corpus, words, vocab, cfg.proj_dim, opts, save_best, print_row);

  std::printf("best dev %s %.4f at epoch %d\n", cfg.select_metric.c_str(), result.best_metric,
              result.best_epoch);
  return 0;
}

int run_eval(const RunConfig& cfg) {
  using namespace hyprank;

  const Checkpoint ckpt = load_checkpoint(cfg.checkpoint_path);
  const json snapshot = ckpt.config_json.empty() ? json::object() : json::parse(ckpt.config_json);
  const Vocabulary vocab = checkpoint_vocabulary(ckpt);
  auto words = std::make_shared<const WordVectorTable<float>>(load_word_vectors<float>(cfg.vectors_path, vocab));
  const ModelParams<float> model = checkpoint_model(ckpt, words);

  SequenceOptions seq;
  seq.max_question_len = snapshot.value("max_q_len", cfg.max_q_len);
  seq.max_answer_len = snapshot.value("max_a_len", cfg.max_a_len);
  const Similarity sim = parse_similarity(snapshot.value("similarity", cfg.similarity));

  const QaCorpus test_corpus = load_qa_tsv(cfg.test_path);
  const EvalReport report = evaluate(test_corpus, model, vocab, seq, sim);
  std::cout << report_to_json(report) << "\n";
  return 0;
}

int run_analyze(const RunConfig& cfg) {
  using namespace hyprank;

  const Checkpoint ckpt = load_checkpoint(cfg.checkpoint_path);
  const json snapshot = ckpt.config_json.empty() ? json::object() : json::parse(ckpt.config_json);
  const Vocabulary vocab = checkpoint_vocabulary(ckpt);
  auto words = std::make_shared<const WordVectorTable<float>>(load_word_vectors<float>(cfg.vectors_path, vocab));
  const ModelParams<float> model = checkpoint_model(ckpt, words);

  SequenceOptions seq;
  seq.max_question_len = snapshot.value("max_q_len", cfg.max_q_len);
  seq.max_answer_len = snapshot.value("max_a_len", cfg.max_a_len);

  const QaCorpus corpus = load_qa_tsv(cfg.test_path);
  std::filesystem::create_directories(cfg.out_dir);
  const auto out = [&](const char* name) { return (std::filesystem::path(cfg.out_dir) / name).string(); };

  const auto [qhist, ahist] = qa_norm_histogram(corpus, model, vocab, seq, cfg.bin_width);
  write_histograms_tsv(out("qa_norm_histogram.tsv"), {qhist, ahist});
  write_hierarchy_tsv(out("word_hierarchy.tsv"), word_hierarchy_levels(vocab, model, cfg.bin_width));
  export_embeddings(corpus, model, vocab, seq, out("embeddings.tsv"));
  HYPRANK_INFO("wrote qa_norm_histogram.tsv, word_hierarchy.tsv, embeddings.tsv to %s", cfg.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperbolic question-answer ranking"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* train_cmd = app.add_subcommand("train", "train a model and save the best checkpoint");
  train_cmd->add_option("--train", cfg.train_path, "training corpus TSV")->required();
  train_cmd->add_option("--dev", cfg.dev_path, "validation corpus TSV")->required();
  train_cmd->add_option("--test", cfg.test_path, "optional test corpus (extends the vocabulary)");
  train_cmd->add_option("--vectors", cfg.vectors_path, "pretrained word vector file")->required();
  train_cmd->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint output path")->required();
  train_cmd->add_option("--seed", cfg.seed, "rng seed (fixes init, sampling and batch order)")->required();
  add_hyperparameters(train_cmd, cfg);

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint, print metrics JSON");
  eval_cmd->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint to load")->required();
  eval_cmd->add_option("--test", cfg.test_path, "corpus TSV to evaluate")->required();
  eval_cmd->add_option("--vectors", cfg.vectors_path, "pretrained word vector file")->required();

  CLI::App* analyze_cmd = app.add_subcommand("analyze", "norm histograms, word hierarchy, embedding export");
  analyze_cmd->add_option("--checkpoint", cfg.checkpoint_path, "checkpoint to load")->required();
  analyze_cmd->add_option("--test", cfg.test_path, "corpus TSV to analyze")->required();
  analyze_cmd->add_option("--vectors", cfg.vectors_path, "pretrained word vector file")->required();
  analyze_cmd->add_option("--out-dir", cfg.out_dir, "output directory")->required();
  analyze_cmd->add_option("--bin-width", cfg.bin_width, "norm bin width")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return run_train(cfg);
    if (eval_cmd->parsed()) return run_eval(cfg);
    if (analyze_cmd->parsed()) return run_analyze(cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
