#include "relwalk/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace relwalk::ag {

namespace {

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_string(a) +
                                " vs " + shape_string(b));
  }
}

void require_vector(const char* op, const Tensor& t) {
  if (t.ndim() != 1) {
    throw std::invalid_argument(std::string(op) + ": expected a vector, got " + shape_string(t));
  }
}

void require_matrix(const char* op, const Tensor& t) {
  if (t.ndim() != 2) {
    throw std::invalid_argument(std::string(op) + ": expected a matrix, got " + shape_string(t));
  }
}

}  // namespace

NodeId Graph::push(Node node) {
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

std::vector<double>& Graph::grad_of(NodeId id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(n.value.numel(), 0.0);
  return n.grad;
}

NodeId Graph::leaf(Tensor& param) {
  auto it = leaves_.find(&param);
  if (it != leaves_.end()) return it->second;
  Node n;
  n.op = Op::kLeaf;
  n.value = param;  // copy; parameters stay frozen for the lifetime of the pass
  n.param = &param;
  NodeId id = push(std::move(n));
  leaves_.emplace(&param, id);
  return id;
}

NodeId Graph::constant(Tensor value) {
  Node n;
  n.op = Op::kConstant;
  n.value = std::move(value);
  return push(std::move(n));
}

NodeId Graph::matmul(NodeId a, NodeId b) {
  const Tensor& A = nodes_[a].value;
  const Tensor& B = nodes_[b].value;
  require_matrix("matmul", A);
  require_matrix("matmul", B);
  if (A.cols() != B.rows()) {
    throw std::invalid_argument("matmul: inner extents differ, " + shape_string(A) + " vs " +
                                shape_string(B));
  }
  std::size_t m = A.rows(), k = A.cols(), n = B.cols();
  Tensor C = Tensor::zeros({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      double av = A.at(i, p);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) C.at(i, j) += av * B.at(p, j);
    }
  }
  Node node;
  node.op = Op::kMatmul;
  node.inputs = {a, b};
  node.value = std::move(C);
  return push(std::move(node));
}

NodeId Graph::matvec(NodeId m, NodeId x) {
  const Tensor& M = nodes_[m].value;
  const Tensor& X = nodes_[x].value;
  require_matrix("matvec", M);
  require_vector("matvec", X);
  if (M.cols() != X.numel()) {
    throw std::invalid_argument("matvec: inner extents differ, " + shape_string(M) + " vs " +
                                shape_string(X));
  }
  std::size_t r = M.rows(), c = M.cols();
  Tensor y = Tensor::zeros({r});
  for (std::size_t i = 0; i < r; ++i) {
    double acc = 0.0;
    const double* mrow = &M.values[i * c];
    for (std::size_t j = 0; j < c; ++j) acc += mrow[j] * X.values[j];
    y.values[i] = acc;
  }
  Node node;
  node.op = Op::kMatvec;
  node.inputs = {m, x};
  node.value = std::move(y);
  return push(std::move(node));
}

NodeId Graph::vecmat(NodeId x, NodeId m) {
  const Tensor& X = nodes_[x].value;
  const Tensor& M = nodes_[m].value;
  require_vector("vecmat", X);
  require_matrix("vecmat", M);
  if (X.numel() != M.rows()) {
    throw std::invalid_argument("vecmat: inner extents differ, " + shape_string(X) + " vs " +
                                shape_string(M));
  }
  std::size_t r = M.rows(), c = M.cols();
  Tensor y = Tensor::zeros({c});
  for (std::size_t i = 0; i < r; ++i) {
    double xv = X.values[i];
    if (xv == 0.0) continue;
    const double* mrow = &M.values[i * c];
    for (std::size_t j = 0; j < c; ++j) y.values[j] += xv * mrow[j];
  }
  Node node;
  node.op = Op::kVecmat;
  node.inputs = {x, m};
  node.value = std::move(y);
  return push(std::move(node));
}

NodeId Graph::add(NodeId a, NodeId b) {
  const Tensor& A = nodes_[a].value;
  const Tensor& B = nodes_[b].value;
  require_same_shape("add", A, B);
  Tensor out = A;
  for (std::size_t i = 0; i < out.numel(); ++i) out.values[i] += B.values[i];
  Node node;
  node.op = Op::kAdd;
  node.inputs = {a, b};
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::add_n(const std::vector<NodeId>& xs) {
  if (xs.empty()) throw std::invalid_argument("add_n: empty operand list");
  Tensor out = nodes_[xs[0]].value;
  for (std::size_t k = 1; k < xs.size(); ++k) {
    const Tensor& X = nodes_[xs[k]].value;
    require_same_shape("add_n", out, X);
    for (std::size_t i = 0; i < out.numel(); ++i) out.values[i] += X.values[i];
  }
  Node node;
  node.op = Op::kAddN;
  node.inputs = xs;
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::mul(NodeId a, NodeId b) {
  const Tensor& A = nodes_[a].value;
  const Tensor& B = nodes_[b].value;
  require_same_shape("mul", A, B);
  Tensor out = A;
  for (std::size_t i = 0; i < out.numel(); ++i) out.values[i] *= B.values[i];
  Node node;
  node.op = Op::kMul;
  node.inputs = {a, b};
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::scale(NodeId x, double c) {
  Tensor out = nodes_[x].value;
  for (double& v : out.values) v *= c;
  Node node;
  node.op = Op::kScale;
  node.inputs = {x};
  node.value = std::move(out);
  node.aux = {c};
  return push(std::move(node));
}

NodeId Graph::sigmoid(NodeId x) {
  Tensor out = nodes_[x].value;
  for (double& v : out.values) v = 1.0 / (1.0 + std::exp(-v));
  Node node;
  node.op = Op::kSigmoid;
  node.inputs = {x};
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::tanh(NodeId x) {
  Tensor out = nodes_[x].value;
  for (double& v : out.values) v = std::tanh(v);
  Node node;
  node.op = Op::kTanh;
  node.inputs = {x};
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::softmax(NodeId x) {
  const Tensor& X = nodes_[x].value;
  require_vector("softmax", X);
  Tensor out = X;
  double mx = *std::max_element(out.values.begin(), out.values.end());
  double z = 0.0;
  for (double& v : out.values) {
    v = std::exp(v - mx);
    z += v;
  }
  for (double& v : out.values) v /= z;
  Node node;
  node.op = Op::kSoftmax;
  node.inputs = {x};
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::dropout(NodeId x, double keep_prob, Rng& rng) {
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) {
    throw std::invalid_argument("dropout: drop probability outside [0,1), keep_prob=" +
                                std::to_string(keep_prob));
  }
  const Tensor& X = nodes_[x].value;
  Node node;
  node.op = Op::kDropout;
  node.inputs = {x};
  node.value = X;
  node.aux.resize(X.numel());
  for (std::size_t i = 0; i < X.numel(); ++i) {
    double mask = rng.bernoulli(keep_prob) ? 1.0 / keep_prob : 0.0;
    node.aux[i] = mask;
    node.value.values[i] = X.values[i] * mask;
  }
  return push(std::move(node));
}

NodeId Graph::concat(const std::vector<NodeId>& xs) {
  if (xs.empty()) throw std::invalid_argument("concat: empty operand list");
  std::size_t total = 0;
  for (NodeId id : xs) {
    require_vector("concat", nodes_[id].value);
    total += nodes_[id].value.numel();
  }
  Tensor out = Tensor::zeros({total});
  Node node;
  node.op = Op::kConcat;
  node.inputs = xs;
  std::size_t off = 0;
  for (NodeId id : xs) {
    const Tensor& X = nodes_[id].value;
    node.idx.push_back(off);
    std::copy(X.values.begin(), X.values.end(), out.values.begin() + off);
    off += X.numel();
  }
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::stack_cols(const std::vector<NodeId>& cols) {
  if (cols.empty()) throw std::invalid_argument("stack_cols: empty column list");
  std::size_t n = nodes_[cols[0]].value.numel();
  for (NodeId id : cols) {
    require_vector("stack_cols", nodes_[id].value);
    if (nodes_[id].value.numel() != n) {
      throw std::invalid_argument("stack_cols: column length mismatch, " +
                                  shape_string(nodes_[cols[0]].value) + " vs " +
                                  shape_string(nodes_[id].value));
    }
  }
  std::size_t m = cols.size();
  Tensor out = Tensor::zeros({n, m});
  for (std::size_t j = 0; j < m; ++j) {
    const Tensor& col = nodes_[cols[j]].value;
    for (std::size_t i = 0; i < n; ++i) out.at(i, j) = col.values[i];
  }
  Node node;
  node.op = Op::kStackCols;
  node.inputs = cols;
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::row(NodeId table, std::size_t r) {
  const Tensor& T = nodes_[table].value;
  require_matrix("row", T);
  if (r >= T.rows()) {
    throw std::out_of_range("row: index " + std::to_string(r) + " out of " +
                            std::to_string(T.rows()));
  }
  std::size_t c = T.cols();
  Tensor out = Tensor::zeros({c});
  std::copy(T.values.begin() + r * c, T.values.begin() + (r + 1) * c, out.values.begin());
  Node node;
  node.op = Op::kRow;
  node.inputs = {table};
  node.idx = {r};
  node.value = std::move(out);
  return push(std::move(node));
}

NodeId Graph::sum_squares(NodeId x) {
  const Tensor& X = nodes_[x].value;
  double acc = 0.0;
  for (double v : X.values) acc += v * v;
  Node node;
  node.op = Op::kSumSquares;
  node.inputs = {x};
  node.value = Tensor::scalar(acc);
  return push(std::move(node));
}

NodeId Graph::cross_entropy(NodeId logits, std::size_t gold) {
  const Tensor& Z = nodes_[logits].value;
  require_vector("cross_entropy", Z);
  if (gold >= Z.numel()) {
    throw std::out_of_range("cross_entropy: gold label " + std::to_string(gold) + " out of " +
                            std::to_string(Z.numel()));
  }
  double mx = *std::max_element(Z.values.begin(), Z.values.end());
  double z = 0.0;
  for (double v : Z.values) z += std::exp(v - mx);
  double lse = mx + std::log(z);
  Node node;
  node.op = Op::kCrossEntropy;
  node.inputs = {logits};
  node.idx = {gold};
  node.aux.resize(Z.numel());  // saved softmax for the backward rule
  for (std::size_t i = 0; i < Z.numel(); ++i) node.aux[i] = std::exp(Z.values[i] - lse);
  node.value = Tensor::scalar(lse - Z.values[gold]);
  return push(std::move(node));
}

void Graph::backward(NodeId loss) {
  const Tensor& L = nodes_[loss].value;
  if (!L.is_scalar()) {
    throw std::invalid_argument("backward: loss must be a scalar, got " + shape_string(L));
  }
  grad_of(loss).assign(1, 1.0);
  // All leaves get a gradient, zero when unreachable from the loss.
  for (auto& [param, id] : leaves_) grad_of(id);

  for (std::size_t s = nodes_.size(); s-- > 0;) {
    Node& n = nodes_[s];
    if (n.grad.empty()) continue;  // not on any path to the loss
    const std::vector<double>& g = n.grad;
    switch (n.op) {
      case Op::kLeaf:
      case Op::kConstant:
        break;
      case Op::kMatmul: {
        const Tensor& A = in(n, 0);
        const Tensor& B = in(n, 1);
        std::size_t m = A.rows(), k = A.cols(), c = B.cols();
        std::vector<double>& ga = grad_of(n.inputs[0]);
        std::vector<double>& gb = grad_of(n.inputs[1]);
        for (std::size_t i = 0; i < m; ++i) {
          for (std::size_t j = 0; j < c; ++j) {
            double gij = g[i * c + j];
            if (gij == 0.0) continue;
            for (std::size_t p = 0; p < k; ++p) {
              ga[i * k + p] += gij * B.at(p, j);
              gb[p * c + j] += gij * A.at(i, p);
            }
          }
        }
        break;
      }
      case Op::kMatvec: {
        const Tensor& M = in(n, 0);
        const Tensor& X = in(n, 1);
        std::size_t r = M.rows(), c = M.cols();
        std::vector<double>& gm = grad_of(n.inputs[0]);
        std::vector<double>& gx = grad_of(n.inputs[1]);
        for (std::size_t i = 0; i < r; ++i) {
          double gi = g[i];
          if (gi == 0.0) continue;
          const double* mrow = &M.values[i * c];
          double* gmrow = &gm[i * c];
          for (std::size_t j = 0; j < c; ++j) {
            gmrow[j] += gi * X.values[j];
            gx[j] += gi * mrow[j];
          }
        }
        break;
      }
      case Op::kVecmat: {
        const Tensor& X = in(n, 0);
        const Tensor& M = in(n, 1);
        std::size_t r = M.rows(), c = M.cols();
        std::vector<double>& gx = grad_of(n.inputs[0]);
        std::vector<double>& gm = grad_of(n.inputs[1]);
        for (std::size_t i = 0; i < r; ++i) {
          const double* mrow = &M.values[i * c];
          double* gmrow = &gm[i * c];
          double xv = X.values[i];
          double acc = 0.0;
          for (std::size_t j = 0; j < c; ++j) {
            acc += g[j] * mrow[j];
            gmrow[j] += g[j] * xv;
          }
          gx[i] += acc;
        }
        break;
      }
      case Op::kAdd: {
        std::vector<double>& ga = grad_of(n.inputs[0]);
        std::vector<double>& gb = grad_of(n.inputs[1]);
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga[i] += g[i];
          gb[i] += g[i];
        }
        break;
      }
      case Op::kAddN: {
        for (NodeId input : n.inputs) {
          std::vector<double>& gi = grad_of(input);
          for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
        }
        break;
      }
      case Op::kMul: {
        const Tensor& A = in(n, 0);
        const Tensor& B = in(n, 1);
        std::vector<double>& ga = grad_of(n.inputs[0]);
        std::vector<double>& gb = grad_of(n.inputs[1]);
        for (std::size_t i = 0; i < g.size(); ++i) {
          ga[i] += g[i] * B.values[i];
          gb[i] += g[i] * A.values[i];
        }
        break;
      }
      case Op::kScale: {
        std::vector<double>& gx = grad_of(n.inputs[0]);
        double c = n.aux[0];
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += c * g[i];
        break;
      }
      case Op::kSigmoid: {
        std::vector<double>& gx = grad_of(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
          double s = n.value.values[i];
          gx[i] += g[i] * s * (1.0 - s);
        }
        break;
      }
      case Op::kTanh: {
        std::vector<double>& gx = grad_of(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) {
          double t = n.value.values[i];
          gx[i] += g[i] * (1.0 - t * t);
        }
        break;
      }
      case Op::kSoftmax: {
        std::vector<double>& gx = grad_of(n.inputs[0]);
        const std::vector<double>& y = n.value.values;
        double dot = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * y[i];
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += y[i] * (g[i] - dot);
        break;
      }
      case Op::kDropout: {
        std::vector<double>& gx = grad_of(n.inputs[0]);
        for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * n.aux[i];
        break;
      }
      case Op::kConcat: {
        for (std::size_t k = 0; k < n.inputs.size(); ++k) {
          std::vector<double>& gi = grad_of(n.inputs[k]);
          std::size_t off = n.idx[k];
          for (std::size_t i = 0; i < gi.size(); ++i) gi[i] += g[off + i];
        }
        break;
      }
      case Op::kStackCols: {
        std::size_t m = n.inputs.size();
        std::size_t rows = n.value.rows();
        for (std::size_t j = 0; j < m; ++j) {
          std::vector<double>& gcol = grad_of(n.inputs[j]);
          for (std::size_t i = 0; i < rows; ++i) gcol[i] += g[i * m + j];
        }
        break;
      }
      case Op::kRow: {
        std::vector<double>& gt = grad_of(n.inputs[0]);
        std::size_t c = in(n, 0).cols();
        std::size_t off = n.idx[0] * c;
        for (std::size_t i = 0; i < c; ++i) gt[off + i] += g[i];
        break;
      }
      case Op::kSumSquares: {
        std::vector<double>& gx = grad_of(n.inputs[0]);
        const Tensor& X = in(n, 0);
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += 2.0 * X.values[i] * g[0];
        break;
      }
      case Op::kCrossEntropy: {
        std::vector<double>& gz = grad_of(n.inputs[0]);
        std::size_t gold = n.idx[0];
        for (std::size_t i = 0; i < gz.size(); ++i) {
          double d = n.aux[i] - (i == gold ? 1.0 : 0.0);
          gz[i] += d * g[0];
        }
        break;
      }
    }
  }

  for (auto& [param, id] : leaves_) {
    Tensor* p = nodes_[id].param;
    p->grad = nodes_[id].grad;
  }
}

}  // namespace relwalk::ag
