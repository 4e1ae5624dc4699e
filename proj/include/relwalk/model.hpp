#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relwalk/classifier.hpp"
#include "relwalk/config.hpp"
#include "relwalk/dataset.hpp"
#include "relwalk/decisions.hpp"
#include "relwalk/embeddings.hpp"
#include "relwalk/encoder.hpp"
#include "relwalk/rng.hpp"

namespace relwalk {

// Every trainable tensor of the pipeline, in a fixed registry order so
// optimizer state, checkpoints and gradient checks all agree.
struct ModelParams {
  TrainConfig config;
  Vocabulary vocab;
  EmbeddingTables tables;
  LstmParams lstm;
  Tensor attention_q;  // context_dim; only when config.attention
  Tensor w_s;          // pair_dim x concat_dim
  Tensor w_b;          // pair_dim x pair_dim; only when walk_length > 1
  Tensor w_r;          // label_count x pair_dim
  Tensor b_r;          // label_count

  /// Column height of the context matrix.
  std::size_t context_dim() const {
    return config.lstm_dim + config.type_dim + 2 * config.position_dim;
  }
  /// Width of the pre-projection concatenation [v_i ; v_j ; c_ij].
  std::size_t concat_dim() const {
    const std::size_t entity = config.lstm_dim + config.type_dim + config.position_dim;
    return 2 * entity + (config.attention ? context_dim() : 0);
  }
  std::size_t label_count() const { return vocab.label_count(); }

  /// Allocates and initializes every tensor, then cross-checks the layer
  /// dimensions against the architecture arithmetic.
  static ModelParams init(const TrainConfig& config, Vocabulary vocab, Rng& rng);

  /// Re-asserts the dimensional contract; throws std::logic_error on drift.
  void check_dimensions() const;

  std::vector<std::pair<std::string, Tensor*>> named_parameters();
  std::vector<Tensor*> parameters();
  std::vector<Tensor*> trainable_parameters();  // honors freeze_pretrained
  std::vector<Tensor*> bias_parameters();       // excluded from L2
  std::vector<Tensor*> l2_parameters();         // trainable minus biases
};

// Forward pass products for one sentence: aligned with generate_pairs order.
struct PairForward {
  PairInstance instance;
  ag::NodeId logits;
};

struct SentenceForward {
  std::vector<PairForward> pairs;
};

/// Builds the whole pipeline for one sentence on the given graph. Training
/// mode applies inverted dropout to the embedded words and to the final pair
/// representations, drawing masks from `dropout_rng`.
SentenceForward build_forward(ag::Graph& g, ModelParams& params, const Sentence& s,
                              std::size_t sentence_index, bool training, Rng* dropout_rng);

/// Positive reconciled decisions for one sentence, inference mode.
std::vector<DirectedDecision> predict_sentence(ModelParams& params, const Sentence& s,
                                               std::size_t sentence_index);

/// Positive decisions over a whole corpus, indexed by sentence position.
DecisionSet predict_corpus(ModelParams& params, const Corpus& corpus);

}  // namespace relwalk
