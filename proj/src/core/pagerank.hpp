#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/graph.hpp"

namespace ng {

enum class RankKind { pagerank, ppr, ppr_plus };

const char* rank_kind_name(RankKind k);

// Column-stochastic transition matrix of an undirected graph, stored by rows
// (row = target vertex) so the matrix-vector product parallelizes over
// disjoint output slots and is bit-identical for any worker count.
// Entry A[i,j] = w(i,j) / strength(j). Vertices with zero strength form the
// dangling set; their mass is redistributed to the preference vector inside
// the iteration.
class StochasticMatrix {
 public:
  static StochasticMatrix from_graph(const Graph& g);
  // Same, but with additive weight deltas on undirected edges (used to mask a
  // user's held-out interactions out of a projection graph). Keys are
  // EdgeAccumulator::key pairs and must reference edges present in g;
  // resulting weights must stay >= 0.
  static StochasticMatrix from_graph_with_deltas(
      const Graph& g, const std::unordered_map<std::uint64_t, double>& delta);

  // Raw CSR rows (row = target). Columns whose ids appear in `dangling` must
  // have no entries anywhere; every other column is expected to sum to one.
  static StochasticMatrix from_rows(std::int32_t n,
                                    std::vector<std::int64_t> offsets,
                                    std::vector<std::int32_t> sources,
                                    std::vector<double> values,
                                    std::vector<std::int32_t> dangling);

  std::int32_t size() const { return n_; }
  std::span<const std::int32_t> dangling() const { return dangling_; }

  // y = A x
  void multiply(std::span<const double> x, std::span<double> y,
                int threads) const;

  double dangling_mass(std::span<const double> x) const;

 private:
  std::int32_t n_ = 0;
  std::vector<std::int64_t> off_;
  std::vector<std::int32_t> src_;
  std::vector<double> val_;
  std::vector<std::int32_t> dangling_;

  void build_rows(const Graph& g, const std::vector<double>& strength,
                  const std::unordered_map<std::uint64_t, double>* delta);
};

struct PowerIterOptions {
  double alpha = 0.85;
  double tol = 1e-10;
  std::int64_t max_iter = 1000;
  int threads = 1;
  // Optional per-iteration l1 step sizes (testing hook).
  std::vector<double>* step_trace = nullptr;
};

struct RankVector {
  std::vector<double> scores;
  RankKind kind = RankKind::pagerank;
  double alpha = 0;
  std::int64_t iterations = 0;
  double residual = 0;  // l1 fixpoint residual of the returned vector
  std::string note;     // free-form metadata (e.g. fallback flags)
};

// Power iteration for w = alpha*A*w + (1-alpha)*p with dangling mass routed
// to p. Stops once the l1 step falls below tol*(1-alpha), which guarantees a
// fixpoint residual <= tol for the returned vector. Throws Error(numeric)
// when max_iter is exhausted.
RankVector pagerank(const StochasticMatrix& m, std::span<const double> preference,
                    const PowerIterOptions& options);

// Uniform preference over the whole vertex set.
RankVector global_pagerank(const StochasticMatrix& m,
                           const PowerIterOptions& options);

// Preference 1/|I| on the query set, zero elsewhere.
RankVector personalized_pagerank(const StochasticMatrix& m,
                                 std::span<const std::int32_t> query,
                                 const PowerIterOptions& options);

// PPR(I) - PR, both at the same alpha. Entries sum to ~0. The caller may pass
// a previously converged global vector to avoid recomputation.
RankVector ppr_plus(const StochasticMatrix& m,
                    std::span<const std::int32_t> query,
                    const PowerIterOptions& options,
                    const RankVector* cached_global = nullptr);

// Caches the global PageRank per alpha for a fixed matrix; safe for
// concurrent use.
class RankEngine {
 public:
  explicit RankEngine(const StochasticMatrix& m) : m_(m) {}
  const RankVector& global(const PowerIterOptions& options) const;
  const StochasticMatrix& matrix() const { return m_; }

 private:
  const StochasticMatrix& m_;
  mutable std::mutex mutex_;
  mutable std::map<double, RankVector> by_alpha_;
};

}  // namespace ng
