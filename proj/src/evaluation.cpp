#include "relwalk/evaluation.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "relwalk/rng.hpp"

namespace relwalk {
namespace {

PrfScore from_counts(std::size_t tp, std::size_t pred_total, std::size_t gold_total) {
  PrfScore s;
  s.tp = tp;
  s.fp = pred_total - tp;
  s.fn = gold_total - tp;
  s.precision = pred_total == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred_total);
  s.recall = gold_total == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold_total);
  s.f1 = s.precision + s.recall == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

}  // namespace

PrfScore micro_prf(const DecisionSet& gold, const DecisionSet& pred) {
  const std::set<Decision> g(gold.begin(), gold.end());
  const std::set<Decision> p(pred.begin(), pred.end());
  std::size_t tp = 0;
  for (const Decision& d : p) tp += g.count(d);
  return from_counts(tp, p.size(), g.size());
}

std::vector<EntityCountBucket> default_entity_buckets() {
  return {{2, 3}, {3, 4}, {4, 6}, {6, 12}, {12, 23}};
}

std::vector<BucketScore> breakdown_by_entity_count(const DecisionSet& gold, const DecisionSet& pred,
                                                   const Corpus& corpus,
                                                   const std::vector<EntityCountBucket>& buckets) {
  for (const EntityCountBucket& b : buckets) {
    if (b.lo >= b.hi)
      throw std::invalid_argument("breakdown_by_entity_count: empty bucket [" +
                                  std::to_string(b.lo) + ", " + std::to_string(b.hi) + ")");
  }
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    for (std::size_t j = i + 1; j < buckets.size(); ++j) {
      if (buckets[i].lo < buckets[j].hi && buckets[j].lo < buckets[i].hi)
        throw std::invalid_argument("breakdown_by_entity_count: overlapping buckets [" +
                                    std::to_string(buckets[i].lo) + ", " +
                                    std::to_string(buckets[i].hi) + ") and [" +
                                    std::to_string(buckets[j].lo) + ", " +
                                    std::to_string(buckets[j].hi) + ")");
    }
  }

  // Which bucket, if any, owns each sentence.
  std::vector<std::optional<std::size_t>> owner(corpus.size());
  std::vector<std::size_t> sentence_counts(buckets.size(), 0);
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const std::size_t n = corpus[s].entities.size();
    for (std::size_t k = 0; k < buckets.size(); ++k) {
      if (buckets[k].contains(n)) {
        owner[s] = k;
        ++sentence_counts[k];
        break;
      }
    }
  }

  std::vector<DecisionSet> gold_by(buckets.size());
  std::vector<DecisionSet> pred_by(buckets.size());
  auto route = [&](const DecisionSet& src, std::vector<DecisionSet>& dst) {
    for (const Decision& d : src) {
      if (d.sentence_index >= corpus.size())
        throw std::out_of_range("breakdown_by_entity_count: decision references sentence " +
                                std::to_string(d.sentence_index) + " of a " +
                                std::to_string(corpus.size()) + "-sentence corpus");
      if (owner[d.sentence_index]) dst[*owner[d.sentence_index]].push_back(d);
    }
  };
  route(gold, gold_by);
  route(pred, pred_by);

  std::vector<BucketScore> table;
  for (std::size_t k = 0; k < buckets.size(); ++k) {
    if (sentence_counts[k] == 0) continue;
    table.push_back({buckets[k], sentence_counts[k], micro_prf(gold_by[k], pred_by[k])});
  }
  return table;
}

namespace {

// Per-sentence sufficient statistics: swapping the systems on a sentence
// swaps its (tp, predicted) contributions while the gold count stays put.
struct SwapCell {
  std::size_t a_tp = 0;
  std::size_t a_pred = 0;
  std::size_t b_tp = 0;
  std::size_t b_pred = 0;
  std::size_t gold = 0;
};

std::vector<SwapCell> build_cells(const DecisionSet& pred_a, const DecisionSet& pred_b,
                                  const DecisionSet& gold) {
  const std::set<Decision> g(gold.begin(), gold.end());
  const std::set<Decision> a(pred_a.begin(), pred_a.end());
  const std::set<Decision> b(pred_b.begin(), pred_b.end());
  std::map<std::size_t, SwapCell> by_sentence;
  for (const Decision& d : g) ++by_sentence[d.sentence_index].gold;
  for (const Decision& d : a) {
    SwapCell& c = by_sentence[d.sentence_index];
    ++c.a_pred;
    c.a_tp += g.count(d);
  }
  for (const Decision& d : b) {
    SwapCell& c = by_sentence[d.sentence_index];
    ++c.b_pred;
    c.b_tp += g.count(d);
  }
  std::vector<SwapCell> cells;
  cells.reserve(by_sentence.size());
  for (const auto& entry : by_sentence) cells.push_back(entry.second);
  return cells;
}

double f1_statistic(const std::vector<SwapCell>& cells, const std::vector<bool>& swapped) {
  std::size_t a_tp = 0, a_pred = 0, b_tp = 0, b_pred = 0, gold_total = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const SwapCell& c = cells[i];
    const bool sw = swapped[i];
    a_tp += sw ? c.b_tp : c.a_tp;
    a_pred += sw ? c.b_pred : c.a_pred;
    b_tp += sw ? c.a_tp : c.b_tp;
    b_pred += sw ? c.a_pred : c.b_pred;
    gold_total += c.gold;
  }
  return std::abs(from_counts(a_tp, a_pred, gold_total).f1 -
                  from_counts(b_tp, b_pred, gold_total).f1);
}

}  // namespace

std::vector<double> randomization_samples(const DecisionSet& pred_a, const DecisionSet& pred_b,
                                          const DecisionSet& gold, std::size_t iterations,
                                          std::uint64_t seed) {
  if (iterations == 0)
    throw std::invalid_argument("randomization_samples: iterations must be >= 1");
  const std::vector<SwapCell> cells = build_cells(pred_a, pred_b, gold);
  const Rng master(seed);
  std::vector<double> samples;
  samples.reserve(iterations);
  std::vector<bool> swapped(cells.size());
  for (std::size_t it = 0; it < iterations; ++it) {
    Rng draw = master.derive(it);
    for (std::size_t i = 0; i < cells.size(); ++i) swapped[i] = draw.bernoulli(0.5);
    samples.push_back(f1_statistic(cells, swapped));
  }
  return samples;
}

double approx_randomization(const DecisionSet& pred_a, const DecisionSet& pred_b,
                            const DecisionSet& gold, std::size_t iterations, std::uint64_t seed) {
  if (iterations == 0)
    throw std::invalid_argument("approx_randomization: iterations must be >= 1");
  const std::vector<SwapCell> cells = build_cells(pred_a, pred_b, gold);
  // Observed statistic through the identity assignment, so it shares every
  // arithmetic step with the shuffled samples.
  const double observed = f1_statistic(cells, std::vector<bool>(cells.size(), false));
  std::size_t at_least = 0;
  for (double s : randomization_samples(pred_a, pred_b, gold, iterations, seed)) {
    if (s >= observed) ++at_least;
  }
  return static_cast<double>(at_least + 1) / static_cast<double>(iterations + 1);
}

}  // namespace relwalk
