#include "relwalk/edge.hpp"

namespace relwalk {

namespace {

bool covers(const EntityMention& m, std::size_t token) {
  return token >= m.start && token < m.end;
}

}  // namespace

std::vector<std::size_t> context_token_indices(const Sentence& s, const EntityMention& head,
                                               const EntityMention& tail) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < s.tokens.size(); ++t)
    if (!covers(head, t) && !covers(tail, t)) out.push_back(t);
  return out;
}

std::size_t context_token_type(const Sentence& s, std::size_t token, const EntityMention& head,
                               const EntityMention& tail, const Vocabulary& vocab) {
  for (const auto& m : s.entities) {
    if (m.id == head.id || m.id == tail.id) continue;
    if (covers(m, token)) return vocab.type_index(m.etype);
  }
  return vocab.null_type_index();
}

AttentionResult attend(ag::Graph& g, const std::vector<ag::NodeId>& columns, ag::NodeId q,
                       std::size_t width) {
  if (columns.empty())
    return {std::nullopt, g.constant(Tensor::zeros({width}))};
  const ag::NodeId context = g.stack_cols(columns);
  const ag::NodeId scores = g.vecmat(q, g.tanh(context));
  const ag::NodeId weights = g.softmax(scores);
  return {weights, g.matvec(context, weights)};
}

ag::NodeId edge_representation(ag::Graph& g, ag::NodeId projection,
                               const std::vector<ag::NodeId>& parts) {
  return g.matvec(projection, g.concat(parts));
}

}  // namespace relwalk
