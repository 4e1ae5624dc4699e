#include "relwalk/walks.hpp"

#include <stdexcept>

namespace relwalk {

ag::NodeId walk_combine(ag::Graph& g, ag::NodeId v_ik, ag::NodeId v_kj, ag::NodeId w_b) {
  return g.sigmoid(g.mul(v_ik, g.matvec(w_b, v_kj)));
}

EdgeTensor walk_aggregate(ag::Graph& g, const EdgeTensor& edges, ag::NodeId w_b, double beta) {
  if (edges.n < 2) throw std::invalid_argument("walk_aggregate: need at least two entities");

  EdgeTensor out(edges.n);
  out.lambda = edges.lambda * 2;
  for (std::size_t i = 0; i < edges.n; ++i) {
    for (std::size_t j = 0; j < edges.n; ++j) {
      if (i == j) continue;
      const ag::NodeId kept = g.scale(edges.at(i, j), beta);
      std::vector<ag::NodeId> extended;
      for (std::size_t k = 0; k < edges.n; ++k) {
        if (k == i || k == j) continue;
        extended.push_back(walk_combine(g, edges.at(i, k), edges.at(k, j), w_b));
      }
      out.at(i, j) = extended.empty()
                         ? kept
                         : g.add(kept, g.scale(g.add_n(extended), 1.0 - beta));
    }
  }
  return out;
}

EdgeTensor aggregate_to_length(ag::Graph& g, EdgeTensor edges, std::size_t l,
                               std::optional<ag::NodeId> w_b, double beta) {
  if (l == 0 || (l & (l - 1)) != 0)
    throw std::invalid_argument("walk length " + std::to_string(l) + " is not a power of two");
  while (edges.lambda < l) {
    if (!w_b) throw std::invalid_argument("walk lengths above 1 need a combine matrix");
    edges = walk_aggregate(g, edges, *w_b, beta);
  }
  return edges;
}

}  // namespace relwalk
