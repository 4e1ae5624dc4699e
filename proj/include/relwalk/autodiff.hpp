#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "relwalk/rng.hpp"
#include "relwalk/tensor.hpp"

namespace relwalk::ag {

using NodeId = std::uint32_t;

enum class Op : std::uint8_t {
  kLeaf,
  kConstant,
  kMatmul,
  kMatvec,
  kVecmat,
  kAdd,
  kAddN,
  kMul,
  kScale,
  kSigmoid,
  kTanh,
  kSoftmax,
  kDropout,
  kConcat,
  kStackCols,
  kRow,
  kSumSquares,
  kCrossEntropy,
};

// One recorded primitive: inputs, the materialized output, and whatever the
// backward rule needs (dropout mask, saved softmax, row index, ...).
struct Node {
  Op op;
  std::vector<NodeId> inputs;
  Tensor value;
  std::vector<double> grad;
  std::vector<std::size_t> idx;  // row index / concat offsets / gold label
  std::vector<double> aux;       // dropout mask / scale factor / saved softmax
  Tensor* param = nullptr;       // kLeaf only
};

// Append-only log of primitives recorded during a forward pass, in
// topological order by construction. Forward values are computed eagerly;
// backward() replays the log in reverse and writes gradients into the
// grad slot of every registered leaf tensor.
class Graph {
 public:
  /// Trainable leaf. Repeated registration of the same tensor returns the
  /// same node, so one parameter is one leaf regardless of how many ops
  /// consume it.
  NodeId leaf(Tensor& param);

  /// Non-trainable input; receives no gradient.
  NodeId constant(Tensor value);

  NodeId matmul(NodeId a, NodeId b);
  /// y = M x for a 2-D M and 1-D x.
  NodeId matvec(NodeId m, NodeId x);
  /// y = x^T M for a 1-D x and 2-D M.
  NodeId vecmat(NodeId x, NodeId m);
  NodeId add(NodeId a, NodeId b);
  NodeId add_n(const std::vector<NodeId>& xs);
  NodeId mul(NodeId a, NodeId b);
  NodeId scale(NodeId x, double c);
  NodeId sigmoid(NodeId x);
  NodeId tanh(NodeId x);
  /// Softmax over a 1-D tensor, max-subtracted.
  NodeId softmax(NodeId x);
  /// Inverted dropout: each element is zeroed with probability 1 - keep_prob
  /// and survivors are scaled by 1/keep_prob. Record this op at train time
  /// only; inference applies no dropout at all.
  NodeId dropout(NodeId x, double keep_prob, Rng& rng);
  /// 1-D concatenation.
  NodeId concat(const std::vector<NodeId>& xs);
  /// n x m matrix from m n-vectors taken as columns.
  NodeId stack_cols(const std::vector<NodeId>& cols);
  /// Row r of a 2-D node as a vector; gradient scatters into that row only.
  NodeId row(NodeId table, std::size_t r);
  /// Scalar sum of squared elements.
  NodeId sum_squares(NodeId x);
  /// Scalar negative log-likelihood of class `gold` under softmax(logits),
  /// computed via max-subtracted log-sum-exp.
  NodeId cross_entropy(NodeId logits, std::size_t gold);

  const Tensor& value(NodeId id) const { return nodes_[id].value; }
  std::size_t size() const { return nodes_.size(); }

  /// Reverse pass from a scalar loss. Fills the grad slot of every leaf
  /// tensor registered on this graph; leaves the loss does not reach get a
  /// zero gradient.
  void backward(NodeId loss);

  /// Number of distinct leaf nodes (one per registered parameter).
  std::size_t leaf_count() const { return leaves_.size(); }

 private:
  NodeId push(Node node);
  const Tensor& in(const Node& n, std::size_t k) const { return nodes_[n.inputs[k]].value; }
  std::vector<double>& grad_of(NodeId id);

  std::vector<Node> nodes_;
  std::map<const Tensor*, NodeId> leaves_;
};

}  // namespace relwalk::ag
