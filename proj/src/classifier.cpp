#include "relwalk/classifier.hpp"

#include <stdexcept>

namespace relwalk {

namespace {

struct DirectedReading {
  bool positive = false;
  std::string head;
  std::string tail;
  std::string rtype;
};

DirectedReading unfold(const PairPrediction& p, const Vocabulary& vocab) {
  const auto decoded = vocab.decode_label(p.argmax);
  DirectedReading r;
  if (decoded.none) return r;
  r.positive = true;
  r.rtype = decoded.rtype;
  r.head = decoded.left_to_right ? p.head : p.tail;
  r.tail = decoded.left_to_right ? p.tail : p.head;
  return r;
}

DirectedDecision decide(const DirectedReading& r, double confidence) {
  return {true, r.head, r.tail, r.rtype, confidence};
}

}  // namespace

ag::NodeId pair_logits(ag::Graph& g, ag::NodeId v, ag::NodeId w_r, ag::NodeId b_r) {
  return g.add(g.matvec(w_r, v), b_r);
}

PairPrediction classify(ag::Graph& g, ag::NodeId logits, const std::string& head,
                        const std::string& tail) {
  const ag::NodeId probs = g.softmax(logits);
  PairPrediction p;
  p.head = head;
  p.tail = tail;
  p.distribution = g.value(probs).values;
  for (std::size_t k = 0; k < p.distribution.size(); ++k) {
    if (p.distribution[k] > p.confidence) {
      p.confidence = p.distribution[k];
      p.argmax = k;
    }
  }
  return p;
}

DirectedDecision resolve_directions(const PairPrediction& p_ij, const PairPrediction& p_ji,
                                    const Vocabulary& vocab) {
  if (p_ij.head != p_ji.tail || p_ij.tail != p_ji.head)
    throw std::invalid_argument("resolve_directions: predictions cover different pairs");

  const DirectedReading a = unfold(p_ij, vocab);
  const DirectedReading b = unfold(p_ji, vocab);

  if (!a.positive && !b.positive) return {};
  if (a.positive && !b.positive) return decide(a, p_ij.confidence);
  if (!a.positive && b.positive) return decide(b, p_ji.confidence);

  const bool consistent = a.rtype == b.rtype && a.head == b.head && a.tail == b.tail;
  if (consistent) return decide(a, std::max(p_ij.confidence, p_ji.confidence));
  return p_ji.confidence > p_ij.confidence ? decide(b, p_ji.confidence)
                                           : decide(a, p_ij.confidence);
}

}  // namespace relwalk
