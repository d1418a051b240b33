#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct CliFixture {
  fs::path dir;
  std::string bin;

  CliFixture() {
    const char* env = std::getenv("HYPRANK_BIN");
    REQUIRE_MESSAGE(env != nullptr, "HYPRANK_BIN must point at the CLI binary");
    bin = env;
    dir = fs::temp_directory_path() / ("hyprank_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);

    write("train.tsv",
          "q1\twhat color is the sky\tthe sky looks blue\t1\n"
          "q1\twhat color is the sky\trocks are heavy\t0\n"
          "q1\twhat color is the sky\tfire is hot\t0\n"
          "q2\twho wrote hamlet\tshakespeare wrote hamlet\t1\n"
          "q2\twho wrote hamlet\tthe sky looks blue\t0\n"
          "q2\twho wrote hamlet\trocks are heavy\t0\n");
    write("dev.tsv",
          "d1\twhat color is the sky\tthe sky looks blue\t1\n"
          "d1\twhat color is the sky\tfire is hot\t0\n");
    // small random vectors over the toy vocabulary
    std::ostringstream vec;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (const char* w : {"what", "color", "is", "the", "sky", "looks", "blue", "rocks", "are", "heavy",
                          "fire", "hot", "who", "wrote", "hamlet", "shakespeare"}) {
      vec << w;
      for (int i = 0; i < 6; ++i) vec << ' ' << u(rng);
      vec << '\n';
    }
    write("vectors.txt", vec.str());
  }
  ~CliFixture() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(path(name));
    out << content;
  }

  int run(const std::string& args, const std::string& out_name) const {
    const std::string cmd = bin + " " + args + " > " + path(out_name) + " 2> " + path(out_name + ".err");
    return std::system(cmd.c_str());
  }

  std::string slurp(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

}  // namespace

TEST_CASE("train, eval and analyze round trip on a toy corpus") {
  CliFixture fx;

  const std::string train_args = "train --train " + fx.path("train.tsv") + " --dev " + fx.path("dev.tsv") +
                                 " --vectors " + fx.path("vectors.txt") + " --checkpoint " +
                                 fx.path("model.ckpt") +
                                 " --seed 7 --epochs 3 --proj-dim 4 --batch-size 4 --neg-samples 2"
                                 " --max-q-len 6 --max-a-len 8 --margin 2 --lr 0.1";
  REQUIRE(fx.run(train_args, "train.out") == 0);
  CHECK(fs::exists(fx.path("model.ckpt")));

  const std::string log = fx.slurp("train.out");
  CHECK(log.find("epoch 1/3") != std::string::npos);
  CHECK(log.find("epoch 3/3") != std::string::npos);
  CHECK(log.find("[saved]") != std::string::npos);

  // determinism: the same seed reproduces the log exactly
  REQUIRE(fx.run(train_args, "train2.out") == 0);
  CHECK(fx.slurp("train.out") == fx.slurp("train2.out"));

  // eval prints the metrics document on stdout
  const std::string eval_args = "eval --checkpoint " + fx.path("model.ckpt") + " --test " +
                                fx.path("dev.tsv") + " --vectors " + fx.path("vectors.txt");
  REQUIRE(fx.run(eval_args, "eval.out") == 0);
  const json report = json::parse(fx.slurp("eval.out"));
  CHECK(report.contains("map"));
  CHECK(report.contains("mrr"));
  CHECK(report.contains("p_at_1"));
  CHECK(report.at("num_questions").get<int>() == 1);

  // analyze writes the three artifacts
  const std::string analyze_args = "analyze --checkpoint " + fx.path("model.ckpt") + " --test " +
                                   fx.path("train.tsv") + " --vectors " + fx.path("vectors.txt") +
                                   " --out-dir " + fx.path("analysis");
  REQUIRE(fx.run(analyze_args, "analyze.out") == 0);
  CHECK(fs::exists(fx.path("analysis/qa_norm_histogram.tsv")));
  CHECK(fs::exists(fx.path("analysis/word_hierarchy.tsv")));
  CHECK(fs::exists(fx.path("analysis/embeddings.tsv")));

  const std::string analyze_base = "analyze --checkpoint " + fx.path("model.ckpt") + " --test " +
                                   fx.path("train.tsv") + " --vectors " + fx.path("vectors.txt");

  // --bin-width 0.5 produces half-unit bin lower bounds
  REQUIRE(fx.run(analyze_base + " --out-dir " + fx.path("analysis_half") + " --bin-width 0.5", "a2.out") ==
          0);
  const std::string hist = fx.slurp("analysis_half/qa_norm_histogram.tsv");
  CHECK(hist.find("0.5\t") != std::string::npos);

  // out-dir nested under an existing file cannot be created
  fx.write("blocker", "plain file");
  CHECK(fx.run(analyze_base + " --out-dir " + fx.path("blocker/sub"), "a3.out") != 0);
}

TEST_CASE("eval on a question whose positive ranks first yields p@1 = 1") {
  CliFixture fx;
  // single-question test where the positive answer reuses the question words
  fx.write("t1.tsv",
           "t1\tthe sky is blue\tthe sky is blue\t1\n"
           "t1\tthe sky is blue\tshakespeare wrote hamlet\t0\n");
  fx.write("t1_train.tsv",
           "t1\tthe sky is blue\tthe sky is blue\t1\n"
           "t1\tthe sky is blue\tshakespeare wrote hamlet\t0\n"
           "t2\tfire is hot\tfire is hot\t1\n"
           "t2\tfire is hot\trocks are heavy\t0\n");

  const std::string train_args = "train --train " + fx.path("t1_train.tsv") + " --dev " + fx.path("t1.tsv") +
                                 " --vectors " + fx.path("vectors.txt") + " --checkpoint " +
                                 fx.path("t1.ckpt") +
                                 " --seed 3 --epochs 8 --proj-dim 4 --batch-size 4 --neg-samples 2 --margin 2"
                                 " --lr 0.2";
  REQUIRE(fx.run(train_args, "t1.out") == 0);

  const std::string eval_args = "eval --checkpoint " + fx.path("t1.ckpt") + " --test " + fx.path("t1.tsv") +
                                " --vectors " + fx.path("vectors.txt");
  REQUIRE(fx.run(eval_args, "t1_eval.out") == 0);
  const json report = json::parse(fx.slurp("t1_eval.out"));
  CHECK(report.at("p_at_1").get<double>() == 1.0);
}

TEST_CASE("all-negative test questions are excluded from the count") {
  CliFixture fx;
  const std::string train_args = "train --train " + fx.path("train.tsv") + " --dev " + fx.path("dev.tsv") +
                                 " --vectors " + fx.path("vectors.txt") + " --checkpoint " +
                                 fx.path("m.ckpt") + " --seed 7 --epochs 1 --proj-dim 4 --neg-samples 2";
  REQUIRE(fx.run(train_args, "m.out") == 0);

  fx.write("mixed.tsv",
           "x1\twhat color is the sky\tthe sky looks blue\t1\n"
           "x1\twhat color is the sky\tfire is hot\t0\n"
           "x2\twho wrote hamlet\tfire is hot\t0\n"
           "x2\twho wrote hamlet\trocks are heavy\t0\n");
  const std::string eval_args = "eval --checkpoint " + fx.path("m.ckpt") + " --test " + fx.path("mixed.tsv") +
                                " --vectors " + fx.path("vectors.txt");
  REQUIRE(fx.run(eval_args, "mixed.out") == 0);
  const json report = json::parse(fx.slurp("mixed.out"));
  CHECK(report.at("num_questions").get<int>() == 1);
}

TEST_CASE("corrupt checkpoints fail with a diagnostic naming the file") {
  CliFixture fx;
  fx.write("broken.ckpt", "garbage");
  const std::string eval_args = "eval --checkpoint " + fx.path("broken.ckpt") + " --test " +
                                fx.path("dev.tsv") + " --vectors " + fx.path("vectors.txt");
  CHECK(fx.run(eval_args, "broken.out") != 0);
  CHECK(fx.slurp("broken.out.err").find("broken.ckpt") != std::string::npos);
}

TEST_CASE("missing required flags are parse errors") {
  CliFixture fx;
  CHECK(fx.run("train --train " + fx.path("train.tsv"), "missing.out") != 0);
  CHECK(fx.run("bogus-subcommand", "bogus.out") != 0);
}
