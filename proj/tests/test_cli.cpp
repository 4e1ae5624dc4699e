// End-to-end tests that drive the command-line binary as a subprocess and
// check its exit codes, console output, and the files it writes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "relwalk/dataset.hpp"
#include "relwalk/decisions.hpp"

namespace fs = std::filesystem;
using namespace relwalk;

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CommandResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RELWALK_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buffer{};
  while (std::fgets(buffer.data(), static_cast<int>(buffer.size()), pipe) != nullptr) out += buffer.data();
  const int status = pclose(pipe);
  CommandResult result;
  result.output = out;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

// A fresh scratch directory per test run; removed when the fixture dies.
struct ScratchDir {
  fs::path dir;
  ScratchDir() {
    dir = fs::temp_directory_path() / ("relwalk_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~ScratchDir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

const char* kGeneratorSpec = R"({
  "entity_types": [
    {"type": "PER", "surfaces": ["ann", "bo", "cy", "dina", "ed"]},
    {"type": "ORG", "surfaces": ["acme", "zeta", "apex", "nova"]}
  ],
  "fillers": ["the", "meanwhile", "yesterday", "said", "also", "news"],
  "relation_rules": [
    {"type": "works_at", "head": "PER", "tail": "ORG", "trigger": "works at", "probability": 0.9},
    {"type": "employs", "head": "ORG", "tail": "PER", "trigger": "employs", "probability": 0.9}
  ],
  "min_entities": 2,
  "max_entities": 4
})";

// Flags that keep the model small enough for fast subprocess training runs.
const char* kTinyDims =
    " --word_dim 6 --type_dim 3 --position_dim 3 --lstm_dim 8 --pair_dim 8"
    " --walk_length 2 --position_clip 6 --batch_size 4 --learning_rate 0.02";

}  // namespace

TEST_CASE("gen-data writes a parseable corpus and is seed-deterministic") {
  ScratchDir tmp;
  spit(tmp / "spec.json", kGeneratorSpec);

  auto first = run_cli("gen-data --spec " + (tmp / "spec.json") + " --sentences 15 --seed 9 --out " +
                       (tmp / "a.jsonl"));
  CHECK(first.exit_code == 0);
  CHECK(first.output.find("15 sentences") != std::string::npos);

  auto again = run_cli("gen-data --spec " + (tmp / "spec.json") + " --sentences 15 --seed 9 --out " +
                       (tmp / "b.jsonl"));
  CHECK(again.exit_code == 0);
  CHECK(slurp(tmp / "a.jsonl") == slurp(tmp / "b.jsonl"));

  auto other_seed = run_cli("gen-data --spec " + (tmp / "spec.json") +
                            " --sentences 15 --seed 10 --out " + (tmp / "c.jsonl"));
  CHECK(other_seed.exit_code == 0);
  CHECK(slurp(tmp / "a.jsonl") != slurp(tmp / "c.jsonl"));

  const Corpus corpus = parse_corpus_file(tmp / "a.jsonl");
  CHECK(corpus.size() == 15);
  for (const auto& sentence : corpus) {
    CHECK(sentence.entities.size() >= 2);
    CHECK(sentence.entities.size() <= 4);
  }
}

TEST_CASE("train writes a checkpoint, logs epochs, and is run-to-run deterministic") {
  ScratchDir tmp;
  spit(tmp / "spec.json", kGeneratorSpec);
  REQUIRE(run_cli("gen-data --spec " + (tmp / "spec.json") + " --sentences 12 --seed 4 --out " +
                  (tmp / "train.jsonl"))
              .exit_code == 0);
  REQUIRE(run_cli("gen-data --spec " + (tmp / "spec.json") + " --sentences 6 --seed 5 --out " +
                  (tmp / "dev.jsonl"))
              .exit_code == 0);

  const std::string train_args = "train --train " + (tmp / "train.jsonl") + " --dev " +
                                 (tmp / "dev.jsonl") + kTinyDims + " --max_epochs 2 --seed 11";

  auto first = run_cli(train_args + " --out " + (tmp / "m1.ckpt") + " --log " + (tmp / "log1.txt"));
  CHECK(first.exit_code == 0);
  CHECK(first.output.find("checkpoint written to") != std::string::npos);
  CHECK(fs::exists(tmp.dir / "m1.ckpt"));

  const std::string log_text = slurp(tmp / "log1.txt");
  CHECK(log_text.find("epoch 1 train_loss") != std::string::npos);
  CHECK(log_text.find("epoch 2 train_loss") != std::string::npos);
  CHECK(log_text.find("dev_f1") != std::string::npos);

  auto second = run_cli(train_args + " --out " + (tmp / "m2.ckpt") + " --log " + (tmp / "log2.txt"));
  CHECK(second.exit_code == 0);
  CHECK(slurp(tmp / "log1.txt") == slurp(tmp / "log2.txt"));
  CHECK(slurp(tmp / "m1.ckpt") == slurp(tmp / "m2.ckpt"));
}

TEST_CASE("config file plus flag overrides resolve with flag precedence") {
  ScratchDir tmp;
  spit(tmp / "run.cfg", "walk_length = 4\nlstm_dim = 16\n");

  auto printed = run_cli("train --config " + (tmp / "run.cfg") +
                         " --walk_length 2 --print-config");
  CHECK(printed.exit_code == 0);
  CHECK(printed.output.find("walk_length = 2") != std::string::npos);  // flag wins over file
  CHECK(printed.output.find("lstm_dim = 16") != std::string::npos);    // file wins over default
}

TEST_CASE("bad configuration is rejected with a nonzero exit and an error line") {
  ScratchDir tmp;

  SUBCASE("unknown key in config file") {
    spit(tmp / "bad.cfg", "lstm_dim = 16\nno_such_knob = 3\n");
    auto result = run_cli("train --config " + (tmp / "bad.cfg") + " --print-config");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("error:") != std::string::npos);
    CHECK(result.output.find("no_such_knob") != std::string::npos);
  }

  SUBCASE("walk length that is not a power of two") {
    auto result = run_cli("train --walk_length 3 --print-config");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("error:") != std::string::npos);
    CHECK(result.output.find("power of two") != std::string::npos);
  }

  SUBCASE("missing input file") {
    auto result = run_cli("predict --model missing.ckpt --input missing.jsonl --out x.jsonl");
    CHECK(result.exit_code != 0);
  }

  SUBCASE("unknown subcommand") {
    auto result = run_cli("frobnicate");
    CHECK(result.exit_code != 0);
  }
}

TEST_CASE("predict writes parseable decisions and reruns bit-identically") {
  ScratchDir tmp;
  spit(tmp / "spec.json", kGeneratorSpec);
  REQUIRE(run_cli("gen-data --spec " + (tmp / "spec.json") + " --sentences 12 --seed 4 --out " +
                  (tmp / "train.jsonl"))
              .exit_code == 0);
  REQUIRE(run_cli("train --train " + (tmp / "train.jsonl") + " --dev " + (tmp / "train.jsonl") +
                  kTinyDims + " --max_epochs 8 --seed 11 --out " + (tmp / "m.ckpt"))
              .exit_code == 0);

  auto first = run_cli("predict --model " + (tmp / "m.ckpt") + " --input " + (tmp / "train.jsonl") +
                       " --out " + (tmp / "p1.jsonl"));
  CHECK(first.exit_code == 0);
  CHECK(first.output.find("written to") != std::string::npos);

  const DecisionSet decisions = parse_decisions_file(tmp / "p1.jsonl");
  const Corpus corpus = parse_corpus_file(tmp / "train.jsonl");
  for (const auto& d : decisions) CHECK(d.sentence_index < corpus.size());

  auto second = run_cli("predict --model " + (tmp / "m.ckpt") + " --input " + (tmp / "train.jsonl") +
                        " --out " + (tmp / "p2.jsonl"));
  CHECK(second.exit_code == 0);
  CHECK(slurp(tmp / "p1.jsonl") == slurp(tmp / "p2.jsonl"));
}

TEST_CASE("eval reports scores, bucket breakdown, comparison, and a json report") {
  ScratchDir tmp;
  const std::string gold =
      R"({"sentence_index": 0, "head": "e0", "tail": "e1", "type": "works_at"})" "\n"
      R"({"sentence_index": 1, "head": "e0", "tail": "e2", "type": "employs"})" "\n"
      R"({"sentence_index": 2, "head": "e1", "tail": "e0", "type": "works_at"})" "\n";
  const std::string partial =
      R"({"sentence_index": 0, "head": "e0", "tail": "e1", "type": "works_at"})" "\n"
      R"({"sentence_index": 1, "head": "e0", "tail": "e2", "type": "works_at"})" "\n";
  spit(tmp / "gold.jsonl", gold);
  spit(tmp / "partial.jsonl", partial);

  SUBCASE("identical prediction and gold files score perfectly") {
    auto result = run_cli("eval --gold " + (tmp / "gold.jsonl") + " --pred " + (tmp / "gold.jsonl"));
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("P=1.000 R=1.000 F1=1.000") != std::string::npos);
  }

  SUBCASE("partially overlapping predictions score between zero and one") {
    auto result = run_cli("eval --gold " + (tmp / "gold.jsonl") + " --pred " +
                          (tmp / "partial.jsonl"));
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("P=0.500 R=0.333 F1=0.400") != std::string::npos);
  }

  SUBCASE("a corpus file passed as gold contributes its annotated relations") {
    spit(tmp / "spec.json", kGeneratorSpec);
    REQUIRE(run_cli("gen-data --spec " + (tmp / "spec.json") + " --sentences 10 --seed 3 --out " +
                    (tmp / "corpus.jsonl"))
                .exit_code == 0);
    const DecisionSet corpus_gold = gold_decisions(parse_corpus_file(tmp / "corpus.jsonl"));
    write_decisions(corpus_gold, tmp / "corpus_gold.jsonl");
    auto via_corpus = run_cli("eval --gold " + (tmp / "corpus.jsonl") + " --pred " +
                              (tmp / "corpus_gold.jsonl"));
    CHECK(via_corpus.exit_code == 0);
    CHECK(via_corpus.output.find("P=1.000 R=1.000 F1=1.000") != std::string::npos);
  }

  SUBCASE("breakdown table lists per-entity-count rows") {
    spit(tmp / "spec.json", kGeneratorSpec);
    REQUIRE(run_cli("gen-data --spec " + (tmp / "spec.json") + " --sentences 10 --seed 3 --out " +
                    (tmp / "corpus.jsonl"))
                .exit_code == 0);
    const DecisionSet corpus_gold = gold_decisions(parse_corpus_file(tmp / "corpus.jsonl"));
    write_decisions(corpus_gold, tmp / "corpus_gold.jsonl");
    auto result = run_cli("eval --gold " + (tmp / "corpus.jsonl") + " --pred " +
                          (tmp / "corpus_gold.jsonl") + " --corpus " + (tmp / "corpus.jsonl"));
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("entities") != std::string::npos);
    CHECK(result.output.find("sentences") != std::string::npos);
  }

  SUBCASE("comparing a system against itself gives the null p-value") {
    auto result = run_cli("eval --gold " + (tmp / "gold.jsonl") + " --pred " + (tmp / "gold.jsonl") +
                          " --compare " + (tmp / "gold.jsonl") + " --iterations 50 --seed 2");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("AR p=1.0000") != std::string::npos);
  }

  SUBCASE("json report carries the same scores as the console output") {
    auto result = run_cli("eval --gold " + (tmp / "gold.jsonl") + " --pred " +
                          (tmp / "partial.jsonl") + " --json " + (tmp / "report.json"));
    CHECK(result.exit_code == 0);
    const auto report = nlohmann::json::parse(slurp(tmp / "report.json"));
    CHECK(report.at("precision").get<double>() == doctest::Approx(0.5));
    CHECK(report.at("recall").get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(report.at("f1").get<double>() == doctest::Approx(0.4));
    CHECK(report.at("tp").get<int>() == 1);
    CHECK(report.at("fp").get<int>() == 1);
    CHECK(report.at("fn").get<int>() == 2);
  }
}

TEST_CASE("gradcheck subcommand passes at its default threshold") {
  auto result = run_cli("gradcheck --seed 3 --dims tiny");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("gradient check passed") != std::string::npos);
  CHECK(result.output.find("worst relative error") != std::string::npos);
}
