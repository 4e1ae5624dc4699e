#pragma once

#include <optional>
#include <vector>

#include "relwalk/autodiff.hpp"

namespace relwalk {

// Per-sentence grid of pair representations v(lambda)_ij for i != j. The
// diagonal is never read or written.
struct EdgeTensor {
  std::size_t n = 0;
  std::size_t lambda = 1;
  std::vector<ag::NodeId> cells;  // n*n, row-major

  explicit EdgeTensor(std::size_t entities)
      : n(entities), cells(entities * entities, ag::NodeId(0)) {}

  ag::NodeId& at(std::size_t i, std::size_t j) { return cells[i * n + j]; }
  ag::NodeId at(std::size_t i, std::size_t j) const { return cells[i * n + j]; }
};

/// Two consecutive edges merge into sigma(v_ik (*) (W_b v_kj)), elementwise.
ag::NodeId walk_combine(ag::Graph& g, ag::NodeId v_ik, ag::NodeId v_kj, ag::NodeId w_b);

/// One doubling step: v(2L)_ij = beta v(L)_ij + (1-beta) sum over k != i,j of
/// walk_combine(v(L)_ik, v(L)_kj). All outputs read the input tensor only.
EdgeTensor walk_aggregate(ag::Graph& g, const EdgeTensor& edges, ag::NodeId w_b, double beta);

/// Doubling schedule 1 -> 2 -> ... -> l; l = 1 is the identity and needs no
/// combine matrix. l must be a power of two.
EdgeTensor aggregate_to_length(ag::Graph& g, EdgeTensor edges, std::size_t l,
                               std::optional<ag::NodeId> w_b, double beta);

}  // namespace relwalk
