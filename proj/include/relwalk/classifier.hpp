#pragma once

#include <string>
#include <vector>

#include "relwalk/autodiff.hpp"
#include "relwalk/dataset.hpp"

namespace relwalk {

struct PairPrediction {
  std::string head;
  std::string tail;
  std::vector<double> distribution;  // one probability per directional label
  std::size_t argmax = 0;
  double confidence = 0.0;  // max probability
};

/// Directional class logits W_r v + b_r; feeds the loss during training.
ag::NodeId pair_logits(ag::Graph& g, ag::NodeId v, ag::NodeId w_r, ag::NodeId b_r);

/// Softmax over the logits, materialized for decision making.
PairPrediction classify(ag::Graph& g, ag::NodeId logits, const std::string& head,
                        const std::string& tail);

// Final decision for one unordered pair, after reconciling the two ordered
// predictions.
struct DirectedDecision {
  bool positive = false;
  std::string head;
  std::string tail;
  std::string rtype;
  double confidence = 0.0;
};

/// Four cases: both negative -> none; one positive -> it wins; consistent
/// positives (same relation, same implied direction) -> that relation;
/// contradicting positives -> higher confidence, ties toward p_ij.
DirectedDecision resolve_directions(const PairPrediction& p_ij, const PairPrediction& p_ji,
                                    const Vocabulary& vocab);

}  // namespace relwalk
