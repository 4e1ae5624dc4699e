#pragma once

#include <optional>
#include <vector>

#include "relwalk/autodiff.hpp"
#include "relwalk/dataset.hpp"

namespace relwalk {

/// Tokens of the sentence outside both target mentions, in sentence order.
/// Tokens of other entity mentions stay in; they carry their own types.
std::vector<std::size_t> context_token_indices(const Sentence& s, const EntityMention& head,
                                               const EntityMention& tail);

/// Type row for a context token: the first mention covering it that is not a
/// target, else the shared null row.
std::size_t context_token_type(const Sentence& s, std::size_t token, const EntityMention& head,
                               const EntityMention& tail, const Vocabulary& vocab);

struct AttentionResult {
  std::optional<ag::NodeId> weights;  // empty when there are no context words
  ag::NodeId pooled;                  // zero vector in that case
};

/// Scores u = q'·tanh(C), weights softmax(u), pooled C·weights. `columns`
/// stack to the pair context matrix; `width` sizes the zero fallback.
AttentionResult attend(ag::Graph& g, const std::vector<ag::NodeId>& columns, ag::NodeId q,
                       std::size_t width);

/// Linear projection of the concatenated pair parts; no bias, no nonlinearity.
ag::NodeId edge_representation(ag::Graph& g, ag::NodeId projection,
                               const std::vector<ag::NodeId>& parts);

}  // namespace relwalk
