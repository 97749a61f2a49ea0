#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/metrics.hpp"
#include "core/pagerank.hpp"
#include "core/rng.hpp"
#include "core/usage.hpp"

namespace ng {

// Read-only view of an interaction matrix with some (user, item) cells
// forced to zero. Evaluation hides each user's test items this way; an empty
// mask is the plain matrix.
class MaskedMatrix {
 public:
  explicit MaskedMatrix(const InteractionMatrix& base) : base_(&base) {}

  // items must be sorted ascending.
  void hide(std::int32_t user, std::vector<std::int32_t> items);

  const InteractionMatrix& base() const { return *base_; }
  std::int32_t user_count() const { return base_->user_count(); }
  std::int32_t name_count() const { return base_->name_count(); }

  bool is_hidden(std::int32_t u, std::int32_t i) const;
  bool has(std::int32_t u, std::int32_t i) const {
    return base_->has(u, i) && !is_hidden(u, i);
  }
  std::vector<std::int32_t> user_items(std::int32_t u) const;
  std::int64_t user_item_count(std::int32_t u) const;
  std::int64_t item_user_count(std::int32_t i) const;

  // Visits users of item i that are not masked away, ascending.
  template <typename Fn>
  void for_item_users(std::int32_t i, Fn&& fn) const {
    for (std::int32_t v : base_->item_users(i))
      if (!is_hidden(v, i)) fn(v);
  }

  // Visits the visible items of user u, ascending, without allocating.
  template <typename Fn>
  void for_user_items(std::int32_t u, Fn&& fn) const {
    auto row = base_->user_items(u);
    if (hidden_.empty()) {
      for (std::int32_t i : row) fn(i);
      return;
    }
    auto it = hidden_.find(u);
    if (it == hidden_.end()) {
      for (std::int32_t i : row) fn(i);
      return;
    }
    for (std::int32_t i : row)
      if (!std::binary_search(it->second.begin(), it->second.end(), i)) fn(i);
  }

 private:
  const InteractionMatrix* base_;
  std::unordered_map<std::int32_t, std::vector<std::int32_t>> hidden_;
  std::unordered_map<std::int32_t, std::int32_t> hidden_per_item_;
};

// --- similarity ---------------------------------------------------------

enum class SimilarityKind { loglikelihood, cosine };

// Dunning log-likelihood ratio of a 2x2 contingency table, mapped to
// [0, 1) via 1 - 1/(1 + LLR).
double loglikelihood_ratio(std::int64_t k11, std::int64_t k12, std::int64_t k21,
                           std::int64_t k22);
double llr_similarity(std::int64_t k11, std::int64_t k12, std::int64_t k21,
                      std::int64_t k22);

// User-user / item-item similarity under a mask. Pairs without a common
// affiliation score zero (the collaborative-filtering neighbor convention).
double user_similarity(const MaskedMatrix& r, std::int32_t u, std::int32_t v,
                       SimilarityKind kind);
double item_similarity(const MaskedMatrix& r, std::int32_t i, std::int32_t j,
                       SimilarityKind kind);

// --- scoring models -------------------------------------------------------

// Weighted-sum user-based CF: score(i) = sum of SIM(u,v) over users v
// affiliated with i (optionally restricted to u's top_n most similar users).
// Throws Error(invalid_argument) for a cold user.
RankedList ucf_scores(const MaskedMatrix& r, std::int32_t user,
                      SimilarityKind kind,
                      std::optional<std::int32_t> top_n = std::nullopt);

// Normalized item-based CF: score(i) = sum_{j in M_u} SIM(i,j) /
// sum_{j in M} SIM(i,j); zero-denominator candidates score 0.
RankedList icf_scores(const MaskedMatrix& r, std::int32_t user,
                      SimilarityKind kind);

// PPR+ over a projection graph's stochastic matrix, seeded with the user's
// training names, known names excluded from the ranking.
RankedList namerank_scores(const StochasticMatrix& m, const RankEngine& engine,
                           std::span<const std::int32_t> train,
                           std::int32_t name_count,
                           const PowerIterOptions& options, bool subtract_global);

RankedList most_popular_scores(const MaskedMatrix& r,
                               std::span<const std::int32_t> train);
RankedList random_scores(std::int32_t name_count,
                         std::span<const std::int32_t> train, Rng& rng);

// --- WRMF (implicit-feedback ALS) ----------------------------------------

struct WrmfOptions {
  std::int32_t dimensions = 10;
  double lambda = 0.015;
  double alpha_c = 1.0;  // confidence weight: c_ui = 1 + alpha_c * r_ui
  std::int32_t iterations = 15;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct FactorModel {
  std::int32_t users = 0, items = 0, dimensions = 0;
  std::vector<double> user_factors;  // users x d, row major
  std::vector<double> item_factors;  // items x d, row major
  double score(std::int32_t u, std::int32_t i) const;
};

FactorModel wrmf_train(const MaskedMatrix& r, const WrmfOptions& options);
// Weighted regularized squared loss of the model on the masked matrix.
double wrmf_loss(const MaskedMatrix& r, const FactorModel& model,
                 double alpha_c, double lambda);
RankedList wrmf_scores(const FactorModel& model, std::int32_t user,
                       std::span<const std::int32_t> train);

// --- facade over a full activity log (no masking) -------------------------

enum class Model { ucf, icf, ppr, ppr_plus, wrmf, most_popular, random };

Model parse_model(std::string_view token);
const char* model_name(Model m);

struct RecommenderOptions {
  Model model = Model::ppr_plus;
  Activity activity = Activity::enter;
  SimilarityKind similarity = SimilarityKind::loglikelihood;
  std::optional<std::int32_t> ucf_neighbors;
  double alpha = 0.85;
  double tol = 1e-10;
  std::int64_t max_iter = 1000;
  WrmfOptions wrmf;
  std::uint64_t seed = 0;
  int threads = 1;
};

class Recommender {
 public:
  Recommender(const ActivityLog& log, RecommenderOptions options);
  // Full ranking over unseen names; throws for cold users.
  RankedList score_user(std::int32_t user) const;
  const RecommenderOptions& options() const { return options_; }

 private:
  const ActivityLog& log_;
  RecommenderOptions options_;
  MaskedMatrix matrix_;
  std::unique_ptr<Graph> projection_;
  std::unique_ptr<StochasticMatrix> stochastic_;
  std::unique_ptr<RankEngine> engine_;
  std::unique_ptr<FactorModel> factors_;
};

// Helper shared by all models: sorts candidates (ids not in excluded) by
// descending score with ascending-id tie break.
RankedList build_ranking(std::int32_t name_count,
                         std::span<const std::int32_t> excluded_sorted,
                         std::span<const double> scores,
                         std::int64_t ranked_count = -1);

}  // namespace ng
