#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/metrics.hpp"
#include "core/recommenders.hpp"
#include "core/rng.hpp"
#include "core/table.hpp"
#include "core/usage.hpp"

namespace ng {

enum class Protocol { take_k_in, leave_k_out, take_first_in, leave_last_out };

Protocol parse_protocol(std::string_view token);
const char* protocol_name(Protocol p);

struct SplitPlan {
  Protocol protocol = Protocol::leave_k_out;
  std::int32_t k = 10;
  std::int32_t n_max = 10;
  std::int32_t repetitions = 1;
  std::uint64_t seed = 0;
  std::int32_t min_history = 15;
};

struct Split {
  std::vector<std::int32_t> train;  // sorted by name id
  std::vector<std::int32_t> test;   // sorted by name id
};

// Splits one user's chronological distinct history. Returns nullopt when the
// history is too short for the plan (user skipped). The TakeKIn and
// TakeFirstIn test sets are additionally shrunk by n_max - k names so their
// size does not depend on k.
std::optional<Split> split_history(std::span<const std::int32_t> history,
                                   const SplitPlan& plan, Rng& rng);

struct EvalConfig {
  std::vector<Model> models{Model::most_popular};
  SplitPlan plan;
  Activity activity = Activity::enter;
  std::vector<std::int32_t> metric_ks{5, 10};
  // 0 disables the sweep; otherwise k runs over [k_min, k_max].
  std::int32_t k_min = 0;
  std::int32_t k_max = 0;
  double alpha = 0.85;
  double tol = 1e-10;
  std::int64_t max_iter = 1000;
  SimilarityKind similarity = SimilarityKind::loglikelihood;
  std::optional<std::int32_t> ucf_neighbors;
  WrmfOptions wrmf;
  bool emit_scatter = false;
  bool emit_sign_tests = false;
  bool emit_metric_correlations = false;
  int threads = 1;

  std::vector<std::int32_t> ks() const;

  // line-oriented `key=value` config; '#' comments allowed
  static EvalConfig parse_kv(std::string_view text, const std::string& origin);
  void set(std::string_view key, std::string_view value);
};

struct ExperimentResult {
  Table results{std::vector<std::string>{"model", "protocol", "k", "repetition",
                                         "metric", "value"}};
  Table scatter{std::vector<std::string>{"model", "eta", "personalization",
                                         "precision"}};
  Table sign_tests{std::vector<std::string>{"k", "metric", "model_a", "model_b",
                                            "n_a", "n_b", "p_value"}};
  Table metric_correlations{
      std::vector<std::string>{"metric_a", "metric_b", "tau"}};
  std::int64_t users_evaluated = 0;
  std::int64_t users_skipped = 0;
};

// Offline accuracy evaluation. Models are retrained/rescored against a
// masked matrix that never exposes a user's own test items; WRMF trains once
// per (k, repetition) on the union mask of all evaluated users.
ExperimentResult run_experiment(const ActivityLog& log, const EvalConfig& config);

// Mean popularity rank per history position plus a shuffled baseline.
// Popularity rank of a name: 1-based position in the list of names ordered by
// descending activity count (ties by ascending id).
Table popularity_rank_profile(const ActivityLog& log, Activity activity,
                              std::int32_t shuffles, std::uint64_t seed);

struct GraphStack;
enum class MultigraphMethod;

// Accuracy/diversity trade-off sweep. The stack's first layer must be the
// usage projection of `log` (it is masked per user); further layers are
// static background networks. For every (method, eta) pair the top-k
// precision (k = metric_ks[0], test = all non-training names) and the mean
// pairwise personalization of the top-k lists are reported as one row
// `model,eta,personalization,precision`.
Table diversify_experiment(const GraphStack& stack, const ActivityLog& log,
                           const EvalConfig& config,
                           std::span<const MultigraphMethod> methods,
                           std::span<const double> eta_grid,
                           double interlayer_weight = 1.0);

}  // namespace ng
