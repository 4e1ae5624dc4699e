#pragma once

#include <cstdint>
#include <vector>

#include "relwalk/dataset.hpp"
#include "relwalk/decisions.hpp"

namespace relwalk {

// Micro-averaged counts over directed decisions, with derived scores.
struct PrfScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Exact directed match on (sentence, head, tail, type). An empty prediction
/// or gold side scores 0 on the affected ratio by convention.
PrfScore micro_prf(const DecisionSet& gold, const DecisionSet& pred);

// Half-open entity-count range [lo, hi).
struct EntityCountBucket {
  std::size_t lo = 0;
  std::size_t hi = 0;

  bool contains(std::size_t n) const { return lo <= n && n < hi; }
  bool operator==(const EntityCountBucket&) const = default;
};

struct BucketScore {
  EntityCountBucket bucket;
  std::size_t sentence_count = 0;
  PrfScore score;
};

/// [2], [3], [4,6), [6,12), [12,23).
std::vector<EntityCountBucket> default_entity_buckets();

/// Micro scores restricted to the sentences whose entity count falls in each
/// bucket. Buckets that own no sentence are omitted rather than reported as
/// zero. Overlapping or empty buckets are rejected; decisions must reference
/// sentences of `corpus`.
std::vector<BucketScore> breakdown_by_entity_count(const DecisionSet& gold, const DecisionSet& pred,
                                                   const Corpus& corpus,
                                                   const std::vector<EntityCountBucket>& buckets);

/// The statistics counted by the randomization test below, one per
/// iteration: |F1(A') - F1(B')| after swapping the two systems' outputs on
/// each sentence independently with probability 1/2. The swap universe is
/// every sentence index present in gold or either prediction set; iteration
/// i draws from the seed's derived stream i, so the sample is reproducible
/// and order-independent.
std::vector<double> randomization_samples(const DecisionSet& pred_a, const DecisionSet& pred_b,
                                          const DecisionSet& gold, std::size_t iterations,
                                          std::uint64_t seed);

/// Two-sided approximate randomization test on the observed statistic
/// |F1(A) - F1(B)|: p = (#{samples >= observed} + 1) / (iterations + 1),
/// always in (0, 1]. Identical systems observe 0 and get p = 1.
double approx_randomization(const DecisionSet& pred_a, const DecisionSet& pred_b,
                            const DecisionSet& gold, std::size_t iterations, std::uint64_t seed);

}  // namespace relwalk
