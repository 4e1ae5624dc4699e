#include "relwalk/training.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "relwalk/decisions.hpp"
#include "relwalk/evaluation.hpp"
#include "relwalk/optimizer.hpp"

namespace relwalk {

ag::NodeId mean_nll(ag::Graph& g,
                    const std::vector<std::pair<ag::NodeId, std::size_t>>& instances) {
  if (instances.empty()) throw std::invalid_argument("mean_nll: no instances");
  std::vector<ag::NodeId> terms;
  terms.reserve(instances.size());
  for (const auto& [logits, gold] : instances) terms.push_back(g.cross_entropy(logits, gold));
  return g.scale(g.add_n(terms), 1.0 / static_cast<double>(instances.size()));
}

ag::NodeId l2_penalty(ag::Graph& g, ModelParams& params, double coefficient) {
  std::vector<ag::NodeId> terms;
  for (Tensor* t : params.l2_parameters()) terms.push_back(g.sum_squares(g.leaf(*t)));
  return g.scale(g.add_n(terms), coefficient);
}

ag::NodeId batch_loss(ag::Graph& g, ModelParams& params, const Corpus& corpus,
                      const std::vector<std::size_t>& batch, bool training, Rng* dropout_rng) {
  if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
  std::vector<std::pair<ag::NodeId, std::size_t>> instances;
  for (std::size_t index : batch) {
    if (index >= corpus.size())
      throw std::out_of_range("batch_loss: sentence index " + std::to_string(index) +
                              " outside a " + std::to_string(corpus.size()) + "-sentence corpus");
    const SentenceForward forward =
        build_forward(g, params, corpus[index], index, training, dropout_rng);
    for (const PairForward& pf : forward.pairs)
      instances.emplace_back(pf.logits, pf.instance.label);
  }
  if (instances.empty()) throw std::invalid_argument("batch_loss: batch has no entity pairs");
  ag::NodeId loss = mean_nll(g, instances);
  if (params.config.l2 > 0.0) loss = g.add(loss, l2_penalty(g, params, params.config.l2));
  return loss;
}

void SnapshotAverage::add(const std::vector<Tensor*>& params) {
  if (sum_.empty()) {
    sum_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) sum_[i].assign(params[i]->numel(), 0.0);
  }
  if (sum_.size() != params.size())
    throw std::invalid_argument("SnapshotAverage: snapshot layout changed");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (sum_[i].size() != params[i]->numel())
      throw std::invalid_argument("SnapshotAverage: snapshot layout changed");
    for (std::size_t k = 0; k < sum_[i].size(); ++k) sum_[i][k] += params[i]->values[k];
  }
  ++count_;
}

std::vector<std::vector<double>> SnapshotAverage::mean() const {
  if (count_ == 0) throw std::logic_error("SnapshotAverage: no snapshots added");
  std::vector<std::vector<double>> out = sum_;
  for (auto& values : out)
    for (double& v : values) v /= static_cast<double>(count_);
  return out;
}

TrainResult train(ModelParams params, const Corpus& train_corpus, const Corpus& dev_corpus,
                  std::ostream* log_stream) {
  params.config.validate();
  if (train_corpus.empty()) throw std::invalid_argument("train: empty training corpus");
  if (dev_corpus.empty()) throw std::invalid_argument("train: empty dev corpus");
  const TrainConfig& cfg = params.config;

  const Rng master(cfg.seed);
  Rng shuffle_rng = master.derive(1);
  Rng dropout_rng = master.derive(2);

  const std::vector<Tensor*> trainable = params.trainable_parameters();
  const std::vector<Tensor*> all_params = params.parameters();
  AdamOptimizer optimizer(trainable, {cfg.learning_rate, 0.9, 0.999, 1e-8});

  const DecisionSet dev_gold = gold_decisions(dev_corpus);

  // Sentences without an entity pair contribute nothing to the loss; a batch
  // of only such sentences is skipped instead of rejected.
  std::vector<std::size_t> pair_counts(train_corpus.size());
  for (std::size_t i = 0; i < train_corpus.size(); ++i)
    pair_counts[i] = generate_pairs(train_corpus[i], params.vocab, i).size();

  std::vector<std::size_t> order(train_corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  SnapshotAverage snapshots;
  std::vector<std::vector<double>> best_average;
  std::vector<EpochLog> log;
  double best_f1 = -1.0;
  std::size_t best_epoch = 0;
  std::size_t epochs_since_improvement = 0;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(start + cfg.batch_size, order.size());
      std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                     order.begin() + static_cast<std::ptrdiff_t>(stop));
      std::size_t instance_count = 0;
      for (std::size_t index : batch) instance_count += pair_counts[index];
      if (instance_count == 0) continue;

      ag::Graph g;
      const ag::NodeId loss = batch_loss(g, params, train_corpus, batch, true, &dropout_rng);
      const double loss_value = g.value(loss).at(0);
      if (!std::isfinite(loss_value))
        throw std::runtime_error("train: loss diverged (non-finite) at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(batches + 1));
      g.backward(loss);
      clip_gradients(trainable, cfg.gradient_clip);
      optimizer.step();
      loss_sum += loss_value;
      ++batches;
    }
    const double train_loss = batches == 0 ? 0.0 : loss_sum / static_cast<double>(batches);

    const PrfScore dev = micro_prf(dev_gold, predict_corpus(params, dev_corpus));
    snapshots.add(all_params);
    log.push_back({epoch, train_loss, dev.precision, dev.recall, dev.f1});
    if (log_stream) {
      *log_stream << "epoch " << epoch << " train_loss " << std::fixed << std::setprecision(6)
                  << train_loss << " dev_p " << std::setprecision(4) << dev.precision << " dev_r "
                  << dev.recall << " dev_f1 " << dev.f1 << std::defaultfloat << '\n';
    }

    if (dev.f1 > best_f1) {
      best_f1 = dev.f1;
      best_epoch = epoch;
      epochs_since_improvement = 0;
      best_average = snapshots.mean();
    } else if (++epochs_since_improvement >= cfg.patience) {
      break;
    }
  }

  for (std::size_t i = 0; i < all_params.size(); ++i) all_params[i]->values = best_average[i];
  return {std::move(params), std::move(log), best_epoch, best_f1};
}

}  // namespace relwalk
