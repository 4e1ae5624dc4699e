#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relwalk/checkpoint.hpp"
#include "relwalk/dataset.hpp"
#include "relwalk/decisions.hpp"
#include "relwalk/embeddings.hpp"
#include "relwalk/evaluation.hpp"
#include "relwalk/gradcheck.hpp"
#include "relwalk/model.hpp"
#include "relwalk/synthetic.hpp"
#include "relwalk/training.hpp"

namespace {

using namespace relwalk;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// The config file plus any per-key flag overrides, resolved in that order.
struct ConfigArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;  // key -> raw flag value
  std::vector<CLI::Option*> override_options;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (key = value lines)")
        ->check(CLI::ExistingFile);
    for (const std::string& key : TrainConfig::keys()) {
      override_options.push_back(
          cmd->add_option("--" + key, overrides[key], "override config key " + key));
    }
  }

  TrainConfig resolve() const {
    std::string text;
    if (!config_path.empty()) text = read_file(config_path);
    for (const CLI::Option* option : override_options) {
      if (option->count() == 0) continue;
      const std::string key = option->get_name().substr(2);  // strip "--"
      text += "\n" + key + " = " + overrides.at(key);
    }
    TrainConfig config = TrainConfig::parse(text);
    config.validate();
    return config;
  }
};

void require(bool ok, const std::string& message) {
  if (!ok) throw std::runtime_error(message);
}

// ---------------------------------------------------------------- train ---

struct TrainArgs {
  ConfigArgs config;
  std::string train_path;
  std::string dev_path;
  std::string out_path;
  std::string pretrained_path;
  std::string log_path;
  bool print_config = false;
};

int run_train(const TrainArgs& args) {
  const TrainConfig config = args.config.resolve();
  if (args.print_config) {
    std::cout << config.serialize();
    return 0;
  }
  require(!args.train_path.empty(), "train: --train is required");
  require(!args.dev_path.empty(), "train: --dev is required");
  require(!args.out_path.empty(), "train: --out is required");

  const Corpus train_corpus = parse_corpus_file(args.train_path);
  const Corpus dev_corpus = parse_corpus_file(args.dev_path);

  const Rng master(config.seed);
  Rng init_rng = master.derive(0);

  Vocabulary vocab;
  std::optional<PretrainedLoad> pretrained;
  if (!args.pretrained_path.empty()) {
    const std::vector<std::string> extra = read_pretrained_words(args.pretrained_path);
    vocab = Vocabulary::build(train_corpus, &extra, config.position_clip);
  } else {
    vocab = Vocabulary::build(train_corpus, nullptr, config.position_clip);
  }
  ModelParams params = ModelParams::init(config, vocab, init_rng);
  if (!args.pretrained_path.empty()) {
    pretrained = load_pretrained(args.pretrained_path, params.vocab, config.word_dim, init_rng);
    params.tables.word = pretrained->table;
    std::cout << "pretrained vectors cover " << pretrained->found_words << "/"
              << pretrained->vocab_words << " vocabulary words (" << std::fixed
              << std::setprecision(1) << 100.0 * pretrained->coverage() << "%)"
              << std::defaultfloat << '\n';
  }

  std::ofstream log_file;
  std::ostream* log_stream = &std::cout;
  if (!args.log_path.empty()) {
    log_file.open(args.log_path);
    require(static_cast<bool>(log_file), "train: cannot open log file " + args.log_path);
    log_stream = &log_file;
  }

  TrainResult result = train(std::move(params), train_corpus, dev_corpus, log_stream);
  save_checkpoint(args.out_path, result.params);
  std::cout << "best epoch " << result.best_epoch << " dev_f1 " << std::fixed
            << std::setprecision(4) << result.best_dev_f1 << std::defaultfloat
            << "; checkpoint written to " << args.out_path << '\n';
  return 0;
}

// ----------------------------------------------------------------- eval ---

struct EvalArgs {
  std::string gold_path;
  std::string pred_path;
  std::string corpus_path;
  std::string compare_path;
  std::string json_path;
  std::size_t iterations = 10000;
  std::uint64_t seed = 1;
};

std::string bucket_label(const EntityCountBucket& b) {
  if (b.lo + 1 == b.hi) return "[" + std::to_string(b.lo) + "]";
  return "[" + std::to_string(b.lo) + "," + std::to_string(b.hi) + ")";
}

// Gold comes either as a decision file or as a corpus whose relations are
// taken as the gold decisions; corpus lines carry a "tokens" key.
DecisionSet load_gold(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string first_line;
  while (std::getline(in, first_line) && first_line.empty()) {
  }
  const auto parsed = nlohmann::json::parse(first_line, nullptr, false);
  if (!parsed.is_discarded() && parsed.contains("tokens"))
    return gold_decisions(parse_corpus_file(path));
  return parse_decisions_file(path);
}

int run_eval(const EvalArgs& args) {
  const DecisionSet gold = load_gold(args.gold_path);
  const DecisionSet pred = parse_decisions_file(args.pred_path);
  const PrfScore score = micro_prf(gold, pred);

  std::cout << std::fixed << std::setprecision(3) << "P=" << score.precision
            << " R=" << score.recall << " F1=" << score.f1 << std::defaultfloat << '\n';

  nlohmann::json report;
  report["precision"] = score.precision;
  report["recall"] = score.recall;
  report["f1"] = score.f1;
  report["tp"] = score.tp;
  report["fp"] = score.fp;
  report["fn"] = score.fn;

  if (!args.corpus_path.empty()) {
    const Corpus corpus = parse_corpus_file(args.corpus_path);
    const auto table = breakdown_by_entity_count(gold, pred, corpus, default_entity_buckets());
    std::cout << "entities  sentences  P      R      F1\n";
    for (const BucketScore& row : table) {
      std::cout << std::left << std::setw(10) << bucket_label(row.bucket) << std::setw(11)
                << row.sentence_count << std::fixed << std::setprecision(3) << std::setw(7)
                << row.score.precision << std::setw(7) << row.score.recall << std::setw(7)
                << row.score.f1 << std::defaultfloat << '\n';
    }
    nlohmann::json buckets = nlohmann::json::array();
    for (const BucketScore& row : table) {
      buckets.push_back({{"bucket", bucket_label(row.bucket)},
                         {"sentences", row.sentence_count},
                         {"precision", row.score.precision},
                         {"recall", row.score.recall},
                         {"f1", row.score.f1}});
    }
    report["breakdown"] = buckets;
  }

  if (!args.compare_path.empty()) {
    const DecisionSet other = parse_decisions_file(args.compare_path);
    const double p = approx_randomization(pred, other, gold, args.iterations, args.seed);
    const double other_f1 = micro_prf(gold, other).f1;
    std::cout << std::fixed << std::setprecision(3) << "compared F1=" << other_f1
              << std::setprecision(4) << " AR p=" << p << std::defaultfloat << " (iterations="
              << args.iterations << ", seed=" << args.seed << ")\n";
    report["compare"] = {{"f1", other_f1},
                         {"p_value", p},
                         {"iterations", args.iterations},
                         {"seed", args.seed}};
  }

  if (!args.json_path.empty()) {
    std::ofstream out(args.json_path);
    require(static_cast<bool>(out), "eval: cannot open " + args.json_path);
    out << report.dump(2) << '\n';
  }
  return 0;
}

// -------------------------------------------------------------- predict ---

struct PredictArgs {
  std::string model_path;
  std::string input_path;
  std::string out_path;
};

int run_predict(const PredictArgs& args) {
  ModelParams params = load_checkpoint(args.model_path);
  const Corpus corpus = parse_corpus_file(args.input_path);
  const DecisionSet decisions = predict_corpus(params, corpus);
  write_decisions(decisions, args.out_path);
  std::cout << decisions.size() << " decisions for " << corpus.size() << " sentences written to "
            << args.out_path << '\n';
  return 0;
}

// -------------------------------------------------------------- gen-data ---

struct GenDataArgs {
  std::string spec_path;
  std::size_t sentences = 0;
  std::uint64_t seed = 1;
  std::string out_path;
};

int run_gen_data(const GenDataArgs& args) {
  const GeneratorSpec spec = parse_generator_spec_file(args.spec_path);
  const Corpus corpus = generate_synthetic(spec, args.sentences, args.seed);
  write_corpus(corpus, args.out_path);
  std::size_t entities = 0, relations = 0;
  for (const Sentence& s : corpus) {
    entities += s.entities.size();
    relations += s.relations.size();
  }
  std::cout << corpus.size() << " sentences, " << entities << " entities, " << relations
            << " relations written to " << args.out_path << '\n';
  return 0;
}

// -------------------------------------------------------------- gradcheck ---

struct GradcheckArgs {
  std::uint64_t seed = 1;
  std::string dims = "tiny";
  double h = 1e-5;
  double threshold = 1e-4;
};

Corpus gradcheck_corpus() {
  Sentence s;
  s.tokens = {"ann", "met", "bo", "near", "the", "old", "bridge", "yesterday"};
  s.entities = {{"ann", 0, 1, "PER"}, {"bo", 2, 3, "PER"}, {"bridge", 5, 7, "FAC"}};
  s.relations = {{"ann", "bo", "PER-SOC"}, {"ann", "bridge", "PHYS"}};
  return {s};
}

TrainConfig gradcheck_config(const std::string& dims) {
  TrainConfig c;
  c.walk_length = 4;
  c.beta = 0.77;
  c.l2 = 1e-4;
  if (dims == "tiny") {
    c.word_dim = 8;
    c.type_dim = 4;
    c.position_dim = 4;
    c.lstm_dim = 8;
    c.pair_dim = 8;
    c.position_clip = 8;
  } else {  // small
    c.word_dim = 12;
    c.type_dim = 6;
    c.position_dim = 6;
    c.lstm_dim = 12;
    c.pair_dim = 12;
    c.position_clip = 10;
  }
  return c;
}

int run_gradcheck(const GradcheckArgs& args) {
  const Corpus corpus = gradcheck_corpus();
  const TrainConfig config = gradcheck_config(args.dims);
  const Vocabulary vocab = Vocabulary::build(corpus, nullptr, config.position_clip);
  Rng rng(args.seed);
  ModelParams params = ModelParams::init(config, vocab, rng);

  auto loss_value = [&]() {
    ag::Graph g;
    return g.value(batch_loss(g, params, corpus, {0}, false, nullptr)).at(0);
  };
  auto loss_backward = [&]() {
    ag::Graph g;
    const ag::NodeId loss = batch_loss(g, params, corpus, {0}, false, nullptr);
    g.backward(loss);
    return g.value(loss).at(0);
  };

  std::size_t checked = 0;
  for (const auto& [name, tensor] : params.named_parameters()) checked += tensor->numel();
  const FdReport report =
      fd_check(params.named_parameters(), loss_backward, loss_value, args.h);

  std::cout << std::scientific << std::setprecision(3) << "worst relative error "
            << report.max_rel_err << " at " << report.worst_param << "[" << report.worst_index
            << "] (analytic " << report.analytic << ", numeric " << report.numeric << "); "
            << std::defaultfloat << checked << " values checked\n";
  if (report.max_rel_err < args.threshold) {
    std::cout << "gradient check passed (threshold " << args.threshold << ")\n";
    return 0;
  }
  std::cout << "gradient check FAILED (threshold " << args.threshold << ")\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relation extraction over entity-pair walks: train, evaluate, predict"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "train a model and write a checkpoint");
  train_args.config.attach(train_cmd);
  train_cmd->add_option("--train", train_args.train_path, "training corpus (JSON lines)")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--dev", train_args.dev_path, "development corpus (JSON lines)")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_args.out_path, "checkpoint output path");
  train_cmd
      ->add_option("--pretrained", train_args.pretrained_path,
                   "pretrained word vectors (word then values, one word per line)")
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--log", train_args.log_path, "write the epoch log here (default stdout)");
  train_cmd->add_flag("--print-config", train_args.print_config,
                      "print the resolved config and exit");

  EvalArgs eval_args;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score decision files");
  eval_cmd
      ->add_option("--gold", eval_args.gold_path,
                   "gold decisions (JSON lines), or a corpus file whose relations are used as gold")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--pred", eval_args.pred_path, "predicted decisions (JSON lines)")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd
      ->add_option("--corpus", eval_args.corpus_path,
                   "sentence corpus; adds the per-entity-count breakdown")
      ->check(CLI::ExistingFile);
  eval_cmd
      ->add_option("--compare", eval_args.compare_path,
                   "second prediction file; adds the randomization significance test")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--iterations", eval_args.iterations, "randomization test iterations")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval_args.seed, "randomization test seed");
  eval_cmd->add_option("--json", eval_args.json_path, "write the report as JSON here");

  PredictArgs predict_args;
  CLI::App* predict_cmd = app.add_subcommand("predict", "write positive decisions for a corpus");
  predict_cmd->add_option("--model", predict_args.model_path, "model checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--input", predict_args.input_path, "corpus to predict on")
      ->required()
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", predict_args.out_path, "decision output path")->required();

  GenDataArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic corpus");
  gen_cmd->add_option("--spec", gen_args.spec_path, "generator spec (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--sentences", gen_args.sentences, "number of sentences")
      ->required()
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen_args.seed, "generator seed");
  gen_cmd->add_option("--out", gen_args.out_path, "corpus output path")->required();

  GradcheckArgs grad_args;
  CLI::App* grad_cmd =
      app.add_subcommand("gradcheck", "finite-difference check of the whole model");
  grad_cmd->add_option("--seed", grad_args.seed, "parameter init seed");
  grad_cmd->add_option("--dims", grad_args.dims, "model size")
      ->check(CLI::IsMember({"tiny", "small"}));
  grad_cmd->add_option("--step", grad_args.h, "finite-difference step")
      ->check(CLI::PositiveNumber);
  grad_cmd->add_option("--threshold", grad_args.threshold, "max relative error to pass")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
    if (train_cmd->parsed()) return run_train(train_args);
    if (eval_cmd->parsed()) return run_eval(eval_args);
    if (predict_cmd->parsed()) return run_predict(predict_args);
    if (gen_cmd->parsed()) return run_gen_data(gen_args);
    if (grad_cmd->parsed()) return run_gradcheck(grad_args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
