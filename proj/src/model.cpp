#include "relwalk/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "relwalk/edge.hpp"
#include "relwalk/walks.hpp"

namespace relwalk {

namespace {

Tensor glorot(std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / double(rows + cols));
  return Tensor::uniform({rows, cols}, -limit, limit, rng);
}

Tensor glorot_vector(std::size_t n, Rng& rng) {
  const double limit = std::sqrt(6.0 / double(n + 1));
  return Tensor::uniform({n}, -limit, limit, rng);
}

void expect(bool ok, const std::string& what) {
  if (!ok) throw std::logic_error("model dimensions: " + what);
}

}  // namespace

ModelParams ModelParams::init(const TrainConfig& config, Vocabulary vocab, Rng& rng) {
  config.validate();
  if (vocab.relation_count() == 0)
    throw std::invalid_argument("model: vocabulary has no relation types");

  ModelParams m;
  m.config = config;
  m.vocab = std::move(vocab);
  m.tables =
      EmbeddingTables::init(m.vocab, config.word_dim, config.type_dim, config.position_dim, rng);
  m.lstm = LstmParams::init(config.word_dim, config.lstm_dim / 2, rng);
  if (config.attention) m.attention_q = glorot_vector(m.context_dim(), rng);
  m.w_s = glorot(config.pair_dim, m.concat_dim(), rng);
  if (config.walk_length > 1) m.w_b = glorot(config.pair_dim, config.pair_dim, rng);
  m.w_r = glorot(m.label_count(), config.pair_dim, rng);
  m.b_r = Tensor::zeros({m.label_count()});

  m.check_dimensions();
  return m;
}

void ModelParams::check_dimensions() const {
  expect(context_dim() == config.lstm_dim + config.type_dim + 2 * config.position_dim,
         "context column height");
  const std::size_t entity = config.lstm_dim + config.type_dim + config.position_dim;
  expect(concat_dim() == (config.attention ? 2 * entity + context_dim() : 2 * entity),
         "projection input width");
  expect(label_count() == 2 * vocab.relation_count() + 1, "directional label count");
  expect(label_count() % 2 == 1 && label_count() >= 3, "label count must be odd and at least 3");

  expect(tables.word.rows() == vocab.word_count() && tables.word.cols() == config.word_dim,
         "word table");
  expect(tables.type.rows() == vocab.type_count() + 1 && tables.type.cols() == config.type_dim,
         "type table");
  expect(tables.position.rows() == vocab.position_rows() &&
             tables.position.cols() == config.position_dim,
         "position table");
  expect(lstm.input_dim == config.word_dim && lstm.hidden_dim * 2 == config.lstm_dim,
         "recurrent sizes");
  if (config.attention) expect(attention_q.numel() == context_dim(), "attention vector");
  expect(w_s.rows() == config.pair_dim && w_s.cols() == concat_dim(), "edge projection");
  expect(config.pair_dim < concat_dim(), "pair representation must compress the concatenation");
  if (config.walk_length > 1)
    expect(w_b.rows() == config.pair_dim && w_b.cols() == config.pair_dim, "combine matrix");
  expect(w_r.rows() == label_count() && w_r.cols() == config.pair_dim, "classifier matrix");
  expect(b_r.numel() == label_count(), "classifier bias");
}

std::vector<std::pair<std::string, Tensor*>> ModelParams::named_parameters() {
  std::vector<std::pair<std::string, Tensor*>> out = {
      {"embeddings.word", &tables.word},
      {"embeddings.type", &tables.type},
      {"embeddings.position", &tables.position},
  };
  const char* dir_names[] = {"forward", "backward"};
  LstmDirection* dirs[] = {&lstm.forward, &lstm.backward};
  for (int d = 0; d < 2; ++d) {
    const std::string base = std::string("lstm.") + dir_names[d] + ".";
    out.insert(out.end(), {{base + "w_input", &dirs[d]->w_input},
                           {base + "w_forget", &dirs[d]->w_forget},
                           {base + "w_output", &dirs[d]->w_output},
                           {base + "w_cell", &dirs[d]->w_cell},
                           {base + "u_input", &dirs[d]->u_input},
                           {base + "u_forget", &dirs[d]->u_forget},
                           {base + "u_output", &dirs[d]->u_output},
                           {base + "u_cell", &dirs[d]->u_cell},
                           {base + "b_input", &dirs[d]->b_input},
                           {base + "b_forget", &dirs[d]->b_forget},
                           {base + "b_output", &dirs[d]->b_output},
                           {base + "b_cell", &dirs[d]->b_cell}});
  }
  if (config.attention) out.push_back({"attention.q", &attention_q});
  out.push_back({"edge.w_s", &w_s});
  if (config.walk_length > 1) out.push_back({"walks.w_b", &w_b});
  out.push_back({"classifier.w_r", &w_r});
  out.push_back({"classifier.b_r", &b_r});
  return out;
}

std::vector<Tensor*> ModelParams::parameters() {
  std::vector<Tensor*> out;
  for (auto& [name, tensor] : named_parameters()) out.push_back(tensor);
  return out;
}

std::vector<Tensor*> ModelParams::trainable_parameters() {
  std::vector<Tensor*> out;
  for (Tensor* t : parameters())
    if (!(config.freeze_pretrained && t == &tables.word)) out.push_back(t);
  return out;
}

std::vector<Tensor*> ModelParams::bias_parameters() {
  auto out = lstm.bias_parameters();
  out.push_back(&b_r);
  return out;
}

std::vector<Tensor*> ModelParams::l2_parameters() {
  const auto biases = bias_parameters();
  std::vector<Tensor*> out;
  for (Tensor* t : trainable_parameters())
    if (std::find(biases.begin(), biases.end(), t) == biases.end()) out.push_back(t);
  return out;
}

SentenceForward build_forward(ag::Graph& g, ModelParams& params, const Sentence& s,
                              std::size_t sentence_index, bool training, Rng* dropout_rng) {
  SentenceForward out;
  if (s.entities.size() < 2) return out;
  if (training && !dropout_rng)
    throw std::invalid_argument("build_forward: training mode needs a dropout source");

  const TrainConfig& cfg = params.config;
  const Vocabulary& vocab = params.vocab;

  const ag::NodeId word_table = g.leaf(params.tables.word);
  const ag::NodeId type_table = g.leaf(params.tables.type);
  const ag::NodeId position_table = g.leaf(params.tables.position);

  // One gather node per table row used in this sentence.
  std::map<std::pair<ag::NodeId, std::size_t>, ag::NodeId> row_cache;
  auto lookup = [&](ag::NodeId table, std::size_t r) {
    auto [it, inserted] = row_cache.try_emplace({table, r}, ag::NodeId(0));
    if (inserted) it->second = g.row(table, r);
    return it->second;
  };
  auto position_row = [&](long long offset) {
    return lookup(position_table, vocab.position_index(offset));
  };

  std::vector<ag::NodeId> words;
  words.reserve(s.tokens.size());
  for (const auto& token : s.tokens) {
    ag::NodeId w = lookup(word_table, vocab.word_index(token));
    if (training && cfg.input_dropout > 0.0)
      w = g.dropout(w, 1.0 - cfg.input_dropout, *dropout_rng);
    words.push_back(w);
  }

  const std::vector<ag::NodeId> encodings = blstm_encode(g, params.lstm, words);

  const std::size_t n = s.entities.size();
  std::vector<ag::NodeId> entity_vectors(n);
  std::vector<ag::NodeId> entity_types(n);
  for (std::size_t i = 0; i < n; ++i) {
    entity_vectors[i] = entity_average(g, s.entities[i], encodings);
    entity_types[i] = lookup(type_table, vocab.type_index(s.entities[i].etype));
  }

  const ag::NodeId w_s = g.leaf(params.w_s);
  const ag::NodeId q = cfg.attention ? g.leaf(params.attention_q) : ag::NodeId(0);

  EdgeTensor edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto& head = s.entities[i];
      const auto& tail = s.entities[j];
      const ag::NodeId v_i = g.concat(
          {entity_vectors[i], entity_types[i],
           position_row(relative_position(head.anchor(), tail.anchor()))});
      const ag::NodeId v_j = g.concat(
          {entity_vectors[j], entity_types[j],
           position_row(relative_position(tail.anchor(), head.anchor()))});

      std::vector<ag::NodeId> parts = {v_i, v_j};
      if (cfg.attention) {
        std::vector<ag::NodeId> columns;
        for (std::size_t z : context_token_indices(s, head, tail)) {
          const ag::NodeId t_z = lookup(type_table, context_token_type(s, z, head, tail, vocab));
          columns.push_back(
              g.concat({encodings[z], t_z,
                        position_row(relative_position(z, head.anchor())),
                        position_row(relative_position(z, tail.anchor()))}));
        }
        parts.push_back(attend(g, columns, q, params.context_dim()).pooled);
      }
      edges.at(i, j) = edge_representation(g, w_s, parts);
    }
  }

  std::optional<ag::NodeId> w_b;
  if (cfg.walk_length > 1) w_b = g.leaf(params.w_b);
  const EdgeTensor walked = aggregate_to_length(g, edges, cfg.walk_length, w_b, cfg.beta);

  const ag::NodeId w_r = g.leaf(params.w_r);
  const ag::NodeId b_r = g.leaf(params.b_r);

  std::map<std::string, std::size_t> entity_index;
  for (std::size_t i = 0; i < n; ++i) entity_index[s.entities[i].id] = i;

  for (const auto& instance : generate_pairs(s, vocab, sentence_index)) {
    ag::NodeId v = walked.at(entity_index.at(instance.head), entity_index.at(instance.tail));
    if (training && cfg.output_dropout > 0.0)
      v = g.dropout(v, 1.0 - cfg.output_dropout, *dropout_rng);
    out.pairs.push_back({instance, pair_logits(g, v, w_r, b_r)});
  }
  return out;
}

std::vector<DirectedDecision> predict_sentence(ModelParams& params, const Sentence& s,
                                               std::size_t sentence_index) {
  ag::Graph g;
  const SentenceForward forward = build_forward(g, params, s, sentence_index, false, nullptr);

  std::map<std::pair<std::string, std::string>, PairPrediction> by_pair;
  for (const auto& pf : forward.pairs)
    by_pair[{pf.instance.head, pf.instance.tail}] =
        classify(g, pf.logits, pf.instance.head, pf.instance.tail);

  std::vector<DirectedDecision> decisions;
  for (std::size_t i = 0; i < s.entities.size(); ++i) {
    for (std::size_t j = i + 1; j < s.entities.size(); ++j) {
      const auto& a = s.entities[i].id;
      const auto& b = s.entities[j].id;
      DirectedDecision d =
          resolve_directions(by_pair.at({a, b}), by_pair.at({b, a}), params.vocab);
      if (d.positive) decisions.push_back(std::move(d));
    }
  }
  return decisions;
}

DecisionSet predict_corpus(ModelParams& params, const Corpus& corpus) {
  DecisionSet decisions;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const DirectedDecision& d : predict_sentence(params, corpus[i], i))
      decisions.push_back({i, d.head, d.tail, d.rtype});
  }
  return decisions;
}

}  // namespace relwalk
