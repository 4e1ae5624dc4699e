// Python bindings for the C++ core: data model, vocabulary, training,
// prediction, evaluation, synthetic data and checkpoints.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numeric>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "relwalk/autodiff.hpp"
#include "relwalk/checkpoint.hpp"
#include "relwalk/config.hpp"
#include "relwalk/dataset.hpp"
#include "relwalk/decisions.hpp"
#include "relwalk/evaluation.hpp"
#include "relwalk/gradcheck.hpp"
#include "relwalk/model.hpp"
#include "relwalk/rng.hpp"
#include "relwalk/synthetic.hpp"
#include "relwalk/training.hpp"

namespace py = pybind11;
using namespace relwalk;

namespace {

// Same derivation the command-line trainer uses: stream 0 of the master
// sequence initializes the parameters.
ModelParams make_params(const TrainConfig& config, const Vocabulary& vocab) {
  config.validate();
  const Rng master(config.seed);
  Rng init_rng = master.derive(0);
  return ModelParams::init(config, vocab, init_rng);
}

FdReport run_gradient_check(ModelParams& params, const Corpus& corpus, double h) {
  if (corpus.empty()) throw std::invalid_argument("gradient_check: corpus is empty");
  std::vector<std::size_t> batch(corpus.size());
  std::iota(batch.begin(), batch.end(), std::size_t{0});
  auto loss_value = [&]() {
    ag::Graph g;
    return g.value(batch_loss(g, params, corpus, batch, false, nullptr)).at(0);
  };
  auto loss_backward = [&]() {
    ag::Graph g;
    const ag::NodeId loss = batch_loss(g, params, corpus, batch, false, nullptr);
    g.backward(loss);
    return g.value(loss).at(0);
  };
  return fd_check(params.named_parameters(), loss_backward, loss_value, h);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Relation extraction over entity-pair walks: corpus and decision I/O, "
      "vocabulary building, model training and prediction, micro-averaged "
      "scoring, significance testing, synthetic data generation, checkpoints "
      "and a finite-difference gradient check.";

  py::class_<Rng>(m, "Rng", "Deterministic splittable random number generator.")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("below", &Rng::below, py::arg("n"), "Uniform integer in [0, n).")
      .def("uniform", py::overload_cast<>(&Rng::uniform), "Uniform double in [0, 1).")
      .def("uniform", py::overload_cast<double, double>(&Rng::uniform), py::arg("lo"),
           py::arg("hi"))
      .def("bernoulli", &Rng::bernoulli, py::arg("p"))
      .def("derive", &Rng::derive, py::arg("stream"),
           "Independent generator for a named substream.");

  py::class_<TrainConfig>(m, "TrainConfig", "Model and optimization settings.")
      .def(py::init<>())
      .def_readwrite("word_dim", &TrainConfig::word_dim)
      .def_readwrite("type_dim", &TrainConfig::type_dim)
      .def_readwrite("position_dim", &TrainConfig::position_dim)
      .def_readwrite("lstm_dim", &TrainConfig::lstm_dim)
      .def_readwrite("pair_dim", &TrainConfig::pair_dim)
      .def_readwrite("walk_length", &TrainConfig::walk_length)
      .def_readwrite("beta", &TrainConfig::beta)
      .def_readwrite("attention", &TrainConfig::attention)
      .def_readwrite("position_clip", &TrainConfig::position_clip)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("input_dropout", &TrainConfig::input_dropout)
      .def_readwrite("output_dropout", &TrainConfig::output_dropout)
      .def_readwrite("l2", &TrainConfig::l2)
      .def_readwrite("gradient_clip", &TrainConfig::gradient_clip)
      .def_readwrite("patience", &TrainConfig::patience)
      .def_readwrite("max_epochs", &TrainConfig::max_epochs)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("freeze_pretrained", &TrainConfig::freeze_pretrained)
      .def("validate", &TrainConfig::validate)
      .def("serialize", &TrainConfig::serialize)
      .def_static("parse", &TrainConfig::parse, py::arg("text"))
      .def_static("keys", &TrainConfig::keys)
      .def("__repr__", [](const TrainConfig& c) { return c.serialize(); });

  py::class_<EntityMention>(m, "EntityMention")
      .def(py::init([](std::string id, std::size_t start, std::size_t end, std::string etype) {
             return EntityMention{std::move(id), start, end, std::move(etype)};
           }),
           py::arg("id"), py::arg("start"), py::arg("end"), py::arg("etype"))
      .def_readwrite("id", &EntityMention::id)
      .def_readwrite("start", &EntityMention::start)
      .def_readwrite("end", &EntityMention::end)
      .def_readwrite("etype", &EntityMention::etype)
      .def(py::self == py::self)
      .def("__repr__", [](const EntityMention& e) {
        std::ostringstream out;
        out << "EntityMention(id=" << e.id << ", start=" << e.start << ", end=" << e.end
            << ", etype=" << e.etype << ")";
        return out.str();
      });

  py::class_<GoldRelation>(m, "GoldRelation")
      .def(py::init([](std::string arg1, std::string arg2, std::string rtype) {
             return GoldRelation{std::move(arg1), std::move(arg2), std::move(rtype)};
           }),
           py::arg("arg1"), py::arg("arg2"), py::arg("rtype"))
      .def_readwrite("arg1", &GoldRelation::arg1)
      .def_readwrite("arg2", &GoldRelation::arg2)
      .def_readwrite("rtype", &GoldRelation::rtype)
      .def(py::self == py::self)
      .def("__repr__", [](const GoldRelation& r) {
        return "GoldRelation(arg1=" + r.arg1 + ", arg2=" + r.arg2 + ", rtype=" + r.rtype + ")";
      });

  py::class_<Sentence>(m, "Sentence")
      .def(py::init<>())
      .def(py::init([](std::vector<std::string> tokens, std::vector<EntityMention> entities,
                       std::vector<GoldRelation> relations) {
             return Sentence{std::move(tokens), std::move(entities), std::move(relations)};
           }),
           py::arg("tokens"), py::arg("entities") = std::vector<EntityMention>{},
           py::arg("relations") = std::vector<GoldRelation>{})
      .def_readwrite("tokens", &Sentence::tokens)
      .def_readwrite("entities", &Sentence::entities)
      .def_readwrite("relations", &Sentence::relations)
      .def("entity", &Sentence::entity, py::arg("id"),
           "Mention with the given id; raises on unknown ids.")
      .def(py::self == py::self)
      .def("__repr__", &serialize_sentence);

  py::class_<Decision>(m, "Decision", "One directed positive relation decision.")
      .def(py::init([](std::size_t sentence_index, std::string head, std::string tail,
                       std::string rtype) {
             return Decision{sentence_index, std::move(head), std::move(tail), std::move(rtype)};
           }),
           py::arg("sentence_index"), py::arg("head"), py::arg("tail"), py::arg("rtype"))
      .def_readwrite("sentence_index", &Decision::sentence_index)
      .def_readwrite("head", &Decision::head)
      .def_readwrite("tail", &Decision::tail)
      .def_readwrite("rtype", &Decision::rtype)
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def("__hash__",
           [](const Decision& d) {
             return py::hash(py::make_tuple(d.sentence_index, d.head, d.tail, d.rtype));
           })
      .def("__repr__", &serialize_decision);

  py::class_<Vocabulary>(m, "Vocabulary",
                         "Index spaces for words, entity types, directional labels and "
                         "clipped position offsets.")
      .def_static(
          "build",
          [](const Corpus& corpus, const std::optional<std::vector<std::string>>& pretrained,
             std::size_t position_clip) {
            return Vocabulary::build(corpus, pretrained ? &*pretrained : nullptr, position_clip);
          },
          py::arg("corpus"), py::arg("pretrained_words") = std::nullopt,
          py::arg("position_clip") = 60)
      .def("word_index", &Vocabulary::word_index, py::arg("word"))
      .def("word_count", &Vocabulary::word_count)
      .def("type_index", &Vocabulary::type_index, py::arg("etype"))
      .def("type_count", &Vocabulary::type_count)
      .def("relation_count", &Vocabulary::relation_count)
      .def("label_count", &Vocabulary::label_count)
      .def("words", &Vocabulary::words)
      .def("types", &Vocabulary::types)
      .def("relation_types", &Vocabulary::relation_types)
      .def("position_clip", &Vocabulary::position_clip)
      .def(py::self == py::self);

  py::class_<ModelParams>(m, "ModelParams",
                          "Every trainable tensor of the pipeline plus its config and "
                          "vocabulary.")
      .def_readonly("config", &ModelParams::config)
      .def_readonly("vocab", &ModelParams::vocab)
      .def("context_dim", &ModelParams::context_dim)
      .def("concat_dim", &ModelParams::concat_dim)
      .def("label_count", &ModelParams::label_count)
      .def("parameter_shapes",
           [](ModelParams& p) {
             py::dict out;
             for (const auto& [name, tensor] : p.named_parameters())
               out[py::str(name)] = py::tuple(py::cast(tensor->shape));
             return out;
           })
      .def("parameter_values", [](ModelParams& p, const std::string& name) {
        for (const auto& [n, tensor] : p.named_parameters())
          if (n == name) return tensor->values;
        throw py::key_error(name);
      });

  py::class_<EpochLog>(m, "EpochLog")
      .def_readonly("epoch", &EpochLog::epoch)
      .def_readonly("train_loss", &EpochLog::train_loss)
      .def_readonly("dev_precision", &EpochLog::dev_precision)
      .def_readonly("dev_recall", &EpochLog::dev_recall)
      .def_readonly("dev_f1", &EpochLog::dev_f1)
      .def("__repr__", [](const EpochLog& e) {
        std::ostringstream out;
        out << "epoch " << e.epoch << " train_loss " << e.train_loss << " dev_p "
            << e.dev_precision << " dev_r " << e.dev_recall << " dev_f1 " << e.dev_f1;
        return out.str();
      });

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("params", &TrainResult::params)
      .def_readonly("log", &TrainResult::log)
      .def_readonly("best_epoch", &TrainResult::best_epoch)
      .def_readonly("best_dev_f1", &TrainResult::best_dev_f1);

  py::class_<PrfScore>(m, "PrfScore", "Micro-averaged counts with derived scores.")
      .def_readonly("tp", &PrfScore::tp)
      .def_readonly("fp", &PrfScore::fp)
      .def_readonly("fn", &PrfScore::fn)
      .def_readonly("precision", &PrfScore::precision)
      .def_readonly("recall", &PrfScore::recall)
      .def_readonly("f1", &PrfScore::f1)
      .def("__repr__", [](const PrfScore& s) {
        std::ostringstream out;
        out << "PrfScore(tp=" << s.tp << ", fp=" << s.fp << ", fn=" << s.fn
            << ", precision=" << s.precision << ", recall=" << s.recall << ", f1=" << s.f1 << ")";
        return out.str();
      });

  py::class_<EntityCountBucket>(m, "EntityCountBucket", "Half-open entity-count range [lo, hi).")
      .def(py::init([](std::size_t lo, std::size_t hi) { return EntityCountBucket{lo, hi}; }),
           py::arg("lo"), py::arg("hi"))
      .def_readwrite("lo", &EntityCountBucket::lo)
      .def_readwrite("hi", &EntityCountBucket::hi)
      .def("contains", &EntityCountBucket::contains, py::arg("n"))
      .def(py::self == py::self);

  py::class_<BucketScore>(m, "BucketScore")
      .def_readonly("bucket", &BucketScore::bucket)
      .def_readonly("sentence_count", &BucketScore::sentence_count)
      .def_readonly("score", &BucketScore::score);

  py::class_<GeneratorSpec>(m, "GeneratorSpec",
                            "Template-driven corpus generator settings; relations hold "
                            "between adjacent entities and compose across shared middles.")
      .def_readwrite("min_entities", &GeneratorSpec::min_entities)
      .def_readwrite("max_entities", &GeneratorSpec::max_entities)
      .def("validate", &GeneratorSpec::validate)
      .def("entity_type_count",
           [](const GeneratorSpec& s) { return s.entity_types.size(); })
      .def("relation_rule_count",
           [](const GeneratorSpec& s) { return s.relation_rules.size(); })
      .def("compose_rule_count",
           [](const GeneratorSpec& s) { return s.compose_rules.size(); });

  py::class_<FdReport>(m, "FdReport", "Worst finite-difference disagreement found.")
      .def_readonly("max_rel_err", &FdReport::max_rel_err)
      .def_readonly("worst_param", &FdReport::worst_param)
      .def_readonly("worst_index", &FdReport::worst_index)
      .def_readonly("analytic", &FdReport::analytic)
      .def_readonly("numeric", &FdReport::numeric);

  // Corpus and decision I/O.
  m.def("parse_corpus_file", &parse_corpus_file, py::arg("path"),
        "Sentences from a JSON-lines file with keys tokens, entities, relations.");
  m.def(
      "parse_corpus",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_corpus(in);
      },
      py::arg("text"));
  m.def("write_corpus", &write_corpus, py::arg("corpus"), py::arg("path"));
  m.def("serialize_sentence", &serialize_sentence, py::arg("sentence"));
  m.def("validate_sentence", &validate_sentence, py::arg("sentence"));
  m.def("parse_decisions_file", &parse_decisions_file, py::arg("path"));
  m.def(
      "parse_decisions",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_decisions(in);
      },
      py::arg("text"));
  m.def("write_decisions", &write_decisions, py::arg("decisions"), py::arg("path"));
  m.def("gold_decisions", &gold_decisions, py::arg("corpus"),
        "The corpus gold relations as directed decisions.");

  // Synthetic data.
  m.def("parse_generator_spec_file", &parse_generator_spec_file, py::arg("path"));
  m.def("parse_generator_spec", &parse_generator_spec, py::arg("json_text"));
  m.def("generate_synthetic", &generate_synthetic, py::arg("spec"), py::arg("sentences"),
        py::arg("seed"), "Seed-deterministic corpus from a generator spec.");

  // Model lifecycle.
  m.def("init_params", &make_params, py::arg("config"), py::arg("vocab"),
        "Fresh parameters along the same seeded path the command-line trainer uses.");
  m.def(
      "train",
      [](const ModelParams& params, const Corpus& train_corpus, const Corpus& dev_corpus) {
        ModelParams working = params;
        return train(std::move(working), train_corpus, dev_corpus, nullptr);
      },
      py::arg("params"), py::arg("train_corpus"), py::arg("dev_corpus"),
      py::call_guard<py::gil_scoped_release>(),
      "Full optimization loop; returns snapshot-averaged parameters and the epoch log.");
  m.def(
      "predict",
      [](ModelParams& params, const Corpus& corpus) { return predict_corpus(params, corpus); },
      py::arg("params"), py::arg("corpus"), py::call_guard<py::gil_scoped_release>(),
      "Positive directed decisions over the corpus.");

  // Evaluation.
  m.def("micro_prf", &micro_prf, py::arg("gold"), py::arg("pred"),
        "Exact directed match on (sentence, head, tail, type).");
  m.def("default_entity_buckets", &default_entity_buckets);
  m.def(
      "breakdown_by_entity_count",
      [](const DecisionSet& gold, const DecisionSet& pred, const Corpus& corpus,
         const std::optional<std::vector<EntityCountBucket>>& buckets) {
        return breakdown_by_entity_count(gold, pred, corpus,
                                         buckets ? *buckets : default_entity_buckets());
      },
      py::arg("gold"), py::arg("pred"), py::arg("corpus"), py::arg("buckets") = std::nullopt);
  m.def("approx_randomization", &approx_randomization, py::arg("pred_a"), py::arg("pred_b"),
        py::arg("gold"), py::arg("iterations") = 10000, py::arg("seed") = 1234,
        "Two-sided approximate randomization test on |F1(A) - F1(B)|.");

  // Checkpoints.
  m.def("save_checkpoint", &save_checkpoint, py::arg("path"), py::arg("params"),
        "Versioned binary container; round trips are bit-exact.");
  m.def("load_checkpoint", &load_checkpoint, py::arg("path"));

  // Gradient check.
  m.def("gradient_check", &run_gradient_check, py::arg("params"), py::arg("corpus"),
        py::arg("h") = 1e-5,
        "Central finite differences against the analytic gradients over the "
        "whole-corpus mean loss; returns the worst disagreement.");
}
