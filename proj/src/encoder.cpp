#include "relwalk/encoder.hpp"

#include <stdexcept>

namespace relwalk {

namespace {

constexpr double kWeightRange = 0.08;

LstmDirection init_direction(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
  auto weight = [&](std::size_t rows, std::size_t cols) {
    return Tensor::uniform({rows, cols}, -kWeightRange, kWeightRange, rng);
  };
  LstmDirection d;
  d.w_input = weight(hidden_dim, input_dim);
  d.w_forget = weight(hidden_dim, input_dim);
  d.w_output = weight(hidden_dim, input_dim);
  d.w_cell = weight(hidden_dim, input_dim);
  d.u_input = weight(hidden_dim, hidden_dim);
  d.u_forget = weight(hidden_dim, hidden_dim);
  d.u_output = weight(hidden_dim, hidden_dim);
  d.u_cell = weight(hidden_dim, hidden_dim);
  d.b_input = Tensor::zeros({hidden_dim});
  d.b_forget = Tensor::zeros({hidden_dim});
  for (auto& b : d.b_forget.values) b = 1.0;
  d.b_output = Tensor::zeros({hidden_dim});
  d.b_cell = Tensor::zeros({hidden_dim});
  return d;
}

struct LstmState {
  ag::NodeId hidden;
  ag::NodeId cell;
};

LstmState lstm_step(ag::Graph& g, LstmDirection& d, ag::NodeId x, const LstmState& prev) {
  auto gate = [&](Tensor& w, Tensor& u, Tensor& b) {
    return g.add_n({g.matvec(g.leaf(w), x), g.matvec(g.leaf(u), prev.hidden), g.leaf(b)});
  };
  const ag::NodeId input_gate = g.sigmoid(gate(d.w_input, d.u_input, d.b_input));
  const ag::NodeId forget_gate = g.sigmoid(gate(d.w_forget, d.u_forget, d.b_forget));
  const ag::NodeId output_gate = g.sigmoid(gate(d.w_output, d.u_output, d.b_output));
  const ag::NodeId candidate = g.tanh(gate(d.w_cell, d.u_cell, d.b_cell));

  LstmState next;
  next.cell = g.add(g.mul(forget_gate, prev.cell), g.mul(input_gate, candidate));
  next.hidden = g.mul(output_gate, g.tanh(next.cell));
  return next;
}

std::vector<ag::NodeId> run_direction(ag::Graph& g, LstmDirection& d, std::size_t hidden_dim,
                                      const std::vector<ag::NodeId>& inputs, bool reversed) {
  LstmState state;
  state.hidden = g.constant(Tensor::zeros({hidden_dim}));
  state.cell = g.constant(Tensor::zeros({hidden_dim}));

  std::vector<ag::NodeId> outputs(inputs.size());
  for (std::size_t step = 0; step < inputs.size(); ++step) {
    const std::size_t t = reversed ? inputs.size() - 1 - step : step;
    state = lstm_step(g, d, inputs[t], state);
    outputs[t] = state.hidden;
  }
  return outputs;
}

}  // namespace

LstmParams LstmParams::init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
  if (input_dim == 0 || hidden_dim == 0)
    throw std::invalid_argument("lstm dimensions must be positive");
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.forward = init_direction(input_dim, hidden_dim, rng);
  p.backward = init_direction(input_dim, hidden_dim, rng);
  return p;
}

std::vector<Tensor*> LstmParams::parameters() {
  std::vector<Tensor*> out;
  for (LstmDirection* d : {&forward, &backward}) {
    out.insert(out.end(), {&d->w_input, &d->w_forget, &d->w_output, &d->w_cell,
                           &d->u_input, &d->u_forget, &d->u_output, &d->u_cell,
                           &d->b_input, &d->b_forget, &d->b_output, &d->b_cell});
  }
  return out;
}

std::vector<Tensor*> LstmParams::bias_parameters() {
  return {&forward.b_input,  &forward.b_forget,  &forward.b_output,  &forward.b_cell,
          &backward.b_input, &backward.b_forget, &backward.b_output, &backward.b_cell};
}

std::vector<ag::NodeId> blstm_encode(ag::Graph& g, LstmParams& params,
                                     const std::vector<ag::NodeId>& inputs) {
  if (inputs.empty()) throw std::invalid_argument("blstm_encode: empty input sequence");
  const auto fwd = run_direction(g, params.forward, params.hidden_dim, inputs, false);
  const auto bwd = run_direction(g, params.backward, params.hidden_dim, inputs, true);

  std::vector<ag::NodeId> out;
  out.reserve(inputs.size());
  for (std::size_t t = 0; t < inputs.size(); ++t) out.push_back(g.concat({fwd[t], bwd[t]}));
  return out;
}

ag::NodeId entity_average(ag::Graph& g, const EntityMention& entity,
                          const std::vector<ag::NodeId>& encodings) {
  if (entity.start >= entity.end || entity.end > encodings.size())
    throw std::invalid_argument("entity_average: span outside the encoded sentence");
  std::vector<ag::NodeId> span;
  for (std::size_t t = entity.start; t < entity.end; ++t) span.push_back(encodings[t]);
  if (span.size() == 1) return span[0];
  return g.scale(g.add_n(span), 1.0 / double(span.size()));
}

}  // namespace relwalk
