#pragma once

#include <vector>

#include "relwalk/autodiff.hpp"
#include "relwalk/dataset.hpp"
#include "relwalk/rng.hpp"
#include "relwalk/tensor.hpp"

namespace relwalk {

// One recurrence direction: four gates, each with an input projection, a
// hidden projection and a bias.
struct LstmDirection {
  Tensor w_input, w_forget, w_output, w_cell;  // hidden x input
  Tensor u_input, u_forget, u_output, u_cell;  // hidden x hidden
  Tensor b_input, b_forget, b_output, b_cell;  // hidden
};

struct LstmParams {
  LstmDirection forward;
  LstmDirection backward;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;  // per direction; outputs concatenate to 2x this

  /// Weights uniform in [-0.08, 0.08]; biases zero except forget gates at 1.
  static LstmParams init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

  std::vector<Tensor*> parameters();
  std::vector<Tensor*> bias_parameters();
};

/// Per-token context representations [h_forward ; h_backward], one per input,
/// from zero initial hidden and cell states. Depends only on the sentence,
/// never on a candidate pair.
std::vector<ag::NodeId> blstm_encode(ag::Graph& g, LstmParams& params,
                                     const std::vector<ag::NodeId>& inputs);

/// Mean of the context representations over the mention's token span.
ag::NodeId entity_average(ag::Graph& g, const EntityMention& entity,
                          const std::vector<ag::NodeId>& encodings);

}  // namespace relwalk
