#include "relwalk/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace relwalk {

void adam_step(Tensor& param, AdamState& state) {
  if (!param.grad || param.grad->size() != param.numel()) {
    throw std::invalid_argument("adam_step: parameter has no gradient of matching length");
  }
  if (state.m.size() != param.numel()) {
    throw std::invalid_argument("adam_step: state length does not match parameter");
  }
  const AdamConfig& c = state.config;
  state.t += 1;
  double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
  double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
  const std::vector<double>& g = *param.grad;
  for (std::size_t i = 0; i < param.numel(); ++i) {
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g[i];
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g[i] * g[i];
    double mhat = state.m[i] / bc1;
    double vhat = state.v[i] / bc2;
    double update = c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
    if (!std::isfinite(update)) {
      throw std::runtime_error("adam_step: non-finite update, training diverged");
    }
    param.values[i] -= update;
  }
}

AdamOptimizer::AdamOptimizer(std::vector<Tensor*> params, AdamConfig cfg)
    : params_(std::move(params)) {
  states_.reserve(params_.size());
  for (Tensor* p : params_) states_.emplace_back(p->numel(), cfg);
}

void AdamOptimizer::step() {
  for (std::size_t i = 0; i < params_.size(); ++i) adam_step(*params_[i], states_[i]);
}

double clip_gradients(const std::vector<Tensor*>& params, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("clip_gradients: threshold must be positive");
  double sq = 0.0;
  for (const Tensor* p : params) {
    if (!p->grad) continue;
    for (double g : *p->grad) {
      if (!std::isfinite(g)) {
        throw std::runtime_error("clip_gradients: non-finite gradient, training diverged");
      }
      sq += g * g;
    }
  }
  double norm = std::sqrt(sq);
  if (norm > threshold) {
    double s = threshold / norm;
    for (Tensor* p : params) {
      if (!p->grad) continue;
      for (double& g : *p->grad) g *= s;
    }
  }
  return norm;
}

}  // namespace relwalk
