#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "relwalk/autodiff.hpp"
#include "relwalk/dataset.hpp"
#include "relwalk/model.hpp"

namespace relwalk {

/// Mean negative log-likelihood over (logits node, gold label) instances.
ag::NodeId mean_nll(ag::Graph& g, const std::vector<std::pair<ag::NodeId, std::size_t>>& instances);

/// coefficient x sum of squared weight values. Bias vectors (the LSTM gate
/// biases and the classifier bias) carry no penalty; the split is fixed by
/// the parameter registry, so no tensor can be left unclassified.
ag::NodeId l2_penalty(ag::Graph& g, ModelParams& params, double coefficient);

/// Mean NLL of the gold directional labels over every pair instance of the
/// batch sentences, plus the L2 penalty at the configured coefficient.
/// Training mode records dropout from `dropout_rng`. The batch must yield at
/// least one pair instance.
ag::NodeId batch_loss(ag::Graph& g, ModelParams& params, const Corpus& corpus,
                      const std::vector<std::size_t>& batch, bool training, Rng* dropout_rng);

// Running mean of epoch-end parameter snapshots.
class SnapshotAverage {
 public:
  /// Adds one snapshot. Every call must pass the same tensor layout.
  void add(const std::vector<Tensor*>& params);
  /// Mean of the snapshots added so far, aligned with the add() layout.
  std::vector<std::vector<double>> mean() const;
  std::size_t count() const { return count_; }

 private:
  std::vector<std::vector<double>> sum_;
  std::size_t count_ = 0;
};

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double dev_precision = 0.0;
  double dev_recall = 0.0;
  double dev_f1 = 0.0;
};

struct TrainResult {
  ModelParams params;  // mean of the epoch-end snapshots 1..best_epoch
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;  // 1-based
  double best_dev_f1 = 0.0;
};

/// Full optimization loop. Each epoch shuffles the sentences (seeded),
/// walks them in batches of config.batch_size, and per batch runs forward
/// with dropout, backward, global-norm clipping and one Adam step; the
/// epoch's dev micro-F1 then drives early stopping (config.patience epochs
/// without improvement) and selects how many epoch-end snapshots the
/// returned parameters average over. A non-finite loss aborts with a
/// diagnostic. One log line per epoch goes to `log_stream` when given;
/// the reported train loss is the mean of the epoch's batch losses.
TrainResult train(ModelParams params, const Corpus& train_corpus, const Corpus& dev_corpus,
                  std::ostream* log_stream = nullptr);

}  // namespace relwalk
