#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ng {

// Full candidate ranking produced by a recommender: every candidate exactly
// once, best first (ties broken by ascending id). The first ranked_count
// entries carry real model scores; the remainder is the deterministic
// fallback order for items the model could not score.
struct RankedList {
  std::vector<std::int32_t> order;
  std::vector<double> scores;  // aligned with order
  std::int64_t ranked_count = 0;
};

// 1-based positions of the test items inside the effective ranking. Test
// items the model failed to rank are virtually placed on the last positions
// of the full candidate-length list.
std::vector<std::int64_t> hit_positions(const RankedList& ranking,
                                        std::span<const std::int32_t> test);

struct PrefixMetrics {
  double precision = 0;
  double recall = 0;
  double ndcg = 0;
};

// Precision@k, Recall@k and NDCG@k with binary relevance from sorted hit
// positions; test_size >= 1.
PrefixMetrics prefix_metrics(std::span<const std::int64_t> sorted_hits,
                             std::int64_t test_size, std::int64_t k);

// Average precision over the full (tail-completed) ranking.
double average_precision(std::span<const std::int64_t> sorted_hits,
                         std::int64_t test_size);

// NDCG over the full ranking (k = candidate count).
double ndcg_full(std::span<const std::int64_t> sorted_hits,
                 std::int64_t test_size, std::int64_t candidate_count);

// Exact binomial sign test. Users with equal scores are ignored; throws
// Error(invalid_argument) when every pair ties.
// p = (1/2)^n * sum_{i=n_a..n} C(n,i) with n = n_a + n_b.
struct SignTestResult {
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
  double p_value = 1;
};
SignTestResult sign_test(std::span<const double> scores_a,
                         std::span<const double> scores_b);
double binomial_tail(std::int64_t n, std::int64_t from);

// Kendall tau-b over paired values; length >= 2 and some non-tied pairs in
// each sequence required.
double kendall_tau(std::span<const double> a, std::span<const double> b);

// Personalization index: 1 - |listA ∩ listB| / k for two equal-length top-k
// lists. k = 0 is an error.
double personalization_index(std::span<const std::int32_t> list_a,
                             std::span<const std::int32_t> list_b);

// Self-information in bits: log2(total_users / users_with_item).
double self_information(std::int64_t total_users, std::int64_t users_with_item);

}  // namespace ng
