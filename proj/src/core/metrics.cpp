#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "core/common.hpp"

namespace ng {

std::vector<std::int64_t> hit_positions(const RankedList& ranking,
                                        std::span<const std::int32_t> test) {
  std::unordered_set<std::int32_t> wanted(test.begin(), test.end());
  std::vector<std::int64_t> hits;
  hits.reserve(wanted.size());
  const std::int64_t c = static_cast<std::int64_t>(ranking.order.size());
  for (std::int64_t pos = 0; pos < ranking.ranked_count; ++pos) {
    if (wanted.erase(ranking.order[static_cast<std::size_t>(pos)]) > 0)
      hits.push_back(pos + 1);
  }
  // unranked relevant items take the trailing positions of the full list
  const std::int64_t missing = static_cast<std::int64_t>(wanted.size());
  for (std::int64_t i = 0; i < missing; ++i) hits.push_back(c - missing + 1 + i);
  std::sort(hits.begin(), hits.end());
  return hits;
}

namespace {

double idcg(std::int64_t k) {
  double v = 0;
  for (std::int64_t i = 1; i <= k; ++i) v += 1.0 / std::log2(static_cast<double>(i) + 1.0);
  return v;
}

}  // namespace

PrefixMetrics prefix_metrics(std::span<const std::int64_t> sorted_hits,
                             std::int64_t test_size, std::int64_t k) {
  if (k < 1) fail(Errc::invalid_argument, "k must be >= 1");
  if (test_size < 1) fail(Errc::invalid_argument, "empty test set");
  PrefixMetrics pm;
  std::int64_t in_prefix = 0;
  double dcg = 0;
  for (std::int64_t pos : sorted_hits) {
    if (pos > k) break;
    ++in_prefix;
    dcg += 1.0 / std::log2(static_cast<double>(pos) + 1.0);
  }
  pm.precision = static_cast<double>(in_prefix) / static_cast<double>(k);
  pm.recall = static_cast<double>(in_prefix) / static_cast<double>(test_size);
  pm.ndcg = dcg / idcg(std::min(k, test_size));
  return pm;
}

double average_precision(std::span<const std::int64_t> sorted_hits,
                         std::int64_t test_size) {
  if (test_size < 1) fail(Errc::invalid_argument, "empty test set");
  double sum = 0;
  std::int64_t found = 0;
  for (std::int64_t pos : sorted_hits) {
    ++found;
    sum += static_cast<double>(found) / static_cast<double>(pos);
  }
  return sum / static_cast<double>(test_size);
}

double ndcg_full(std::span<const std::int64_t> sorted_hits,
                 std::int64_t test_size, std::int64_t candidate_count) {
  return prefix_metrics(sorted_hits, test_size,
                        std::max<std::int64_t>(candidate_count, 1))
      .ndcg;
}

double binomial_tail(std::int64_t n, std::int64_t from) {
  if (from < 0) from = 0;
  if (from > n) return 0.0;
  if (n <= 60) {
    // exact in extended precision
    long double coeff = 1.0L;  // C(n, 0)
    long double sum = 0.0L;
    for (std::int64_t i = 0; i <= n; ++i) {
      if (i >= from) sum += coeff;
      coeff = coeff * static_cast<long double>(n - i) /
              static_cast<long double>(i + 1);
    }
    return static_cast<double>(sum * std::pow(0.5L, static_cast<long double>(n)));
  }
  double p = 0;
  const double ln2 = std::log(2.0);
  for (std::int64_t i = from; i <= n; ++i) {
    const double lc = std::lgamma(static_cast<double>(n + 1)) -
                      std::lgamma(static_cast<double>(i + 1)) -
                      std::lgamma(static_cast<double>(n - i + 1));
    p += std::exp(lc - static_cast<double>(n) * ln2);
  }
  return std::min(p, 1.0);
}

SignTestResult sign_test(std::span<const double> scores_a,
                         std::span<const double> scores_b) {
  if (scores_a.size() != scores_b.size())
    fail(Errc::invalid_argument, "sign test needs paired scores");
  SignTestResult r;
  for (std::size_t i = 0; i < scores_a.size(); ++i) {
    if (scores_a[i] > scores_b[i]) ++r.n_a;
    else if (scores_b[i] > scores_a[i]) ++r.n_b;
  }
  const std::int64_t n = r.n_a + r.n_b;
  if (n == 0)
    fail(Errc::invalid_argument, "sign test undefined: all scores tie");
  r.p_value = binomial_tail(n, r.n_a);
  return r;
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  if (n != b.size() || n < 2)
    fail(Errc::invalid_argument, "kendall tau needs two sequences of length >= 2");
  std::int64_t concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = a[i] - a[j];
      const double db = b[i] - b[j];
      if (da == 0 && db == 0) {
        ++ties_a;
        ++ties_b;
      } else if (da == 0) {
        ++ties_a;
      } else if (db == 0) {
        ++ties_b;
      } else if ((da > 0) == (db > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1) / 2;
  const double denom = std::sqrt((n0 - static_cast<double>(ties_a)) *
                                 (n0 - static_cast<double>(ties_b)));
  if (!(denom > 0))
    fail(Errc::numeric, "kendall tau undefined: a sequence is constant");
  return (static_cast<double>(concordant) - static_cast<double>(discordant)) /
         denom;
}

double personalization_index(std::span<const std::int32_t> list_a,
                             std::span<const std::int32_t> list_b) {
  if (list_a.empty() || list_a.size() != list_b.size())
    fail(Errc::invalid_argument,
         "personalization index needs two non-empty lists of equal length");
  std::unordered_set<std::int32_t> sa(list_a.begin(), list_a.end());
  std::int64_t overlap = 0;
  for (std::int32_t x : list_b)
    if (sa.count(x)) ++overlap;
  return 1.0 - static_cast<double>(overlap) / static_cast<double>(list_a.size());
}

double self_information(std::int64_t total_users, std::int64_t users_with_item) {
  if (total_users <= 0 || users_with_item <= 0)
    fail(Errc::invalid_argument,
         "self-information undefined for empty user sets");
  return std::log2(static_cast<double>(total_users) /
                   static_cast<double>(users_with_item));
}

}  // namespace ng
