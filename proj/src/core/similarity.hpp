#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/graph.hpp"

namespace ng {

enum class VertexMetric { jaccard, cosine };

VertexMetric parse_vertex_metric(std::string_view token);

// Neighborhood similarity of two vertices (see the formulas in the .cpp).
// Scores lie in [0, 1]; an isolated endpoint scores 0 by convention.
double vertex_similarity(const Graph& g, std::int32_t u, std::int32_t v,
                         VertexMetric metric, bool weighted);

// Sparse binary category vectors per name, aligned with a graph lexicon.
class CategoryAssignments {
 public:
  // TSV rows: name \t category. Names not present in the lexicon are
  // counted and skipped.
  static CategoryAssignments load_file(const std::string& path,
                                       std::shared_ptr<const Lexicon> names);
  static CategoryAssignments parse(std::string_view text,
                                   const std::string& origin,
                                   std::shared_ptr<const Lexicon> names);

  bool has(std::int32_t name) const {
    return !cats_[static_cast<std::size_t>(name)].empty();
  }
  const std::vector<std::int32_t>& categories(std::int32_t name) const {
    return cats_[static_cast<std::size_t>(name)];
  }
  std::int32_t category_count() const { return category_count_; }
  std::int64_t assigned_names() const { return assigned_; }
  std::int64_t skipped_rows() const { return skipped_; }
  std::int64_t nonzeros() const { return nonzeros_; }

  // Cosine of the binary category vectors; throws Error(invalid_argument)
  // when either name has no assignment.
  double cosine(std::int32_t u, std::int32_t v) const;

 private:
  std::vector<std::vector<std::int32_t>> cats_;
  std::int32_t category_count_ = 0;
  std::int64_t assigned_ = 0;
  std::int64_t skipped_ = 0;
  std::int64_t nonzeros_ = 0;
};

struct ProfilePoint {
  std::int64_t distance = 0;
  double mean = 0;
  std::int64_t pair_count = 0;
  double null_mean = 0;
  bool present = false;
};

struct DistanceProfileOptions {
  std::int32_t max_distance = 6;
  std::int32_t null_shuffles = 10;
  std::uint64_t seed = 0;
  int threads = 1;
  // All-pairs BFS up to this vertex count; above it, sources are sampled
  // until ~pair_budget (source, target) pairs were seen.
  std::int32_t exact_vertex_cap = 2000;
  std::int64_t pair_budget = 1000000;
};

// Mean reference (category) similarity per shortest-path distance, observed
// and under random reassignment of the category vectors.
std::vector<ProfilePoint> similarity_vs_distance_profile(
    const Graph& g, const CategoryAssignments& cats,
    const DistanceProfileOptions& options);

struct SimilarityBin {
  double x = 0;  // bin center on the structural-similarity axis
  double mean = 0;
  std::int64_t pair_count = 0;
};

// Bins all assigned-name pairs by structural similarity into `bins`
// equidistant bins over [0, max observed score] and reports the mean
// category-cosine per bin. Empty bins are omitted from the result.
std::vector<SimilarityBin> binned_similarity_correlation(
    const Graph& g, const CategoryAssignments& cats, VertexMetric metric,
    bool weighted, std::int32_t bins, int threads = 1);

}  // namespace ng
