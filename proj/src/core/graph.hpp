#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "core/lexicon.hpp"

namespace ng {

// Accumulates undirected edge weights keyed on (min,max) vertex pairs.
// Self-loops are rejected at insertion. Merging per-worker accumulators is
// order independent because weights only ever add.
class EdgeAccumulator {
 public:
  void add(std::int32_t u, std::int32_t v, double w = 1.0);
  void merge(const EdgeAccumulator& other);
  std::size_t size() const { return edges_.size(); }
  const std::unordered_map<std::uint64_t, double>& edges() const {
    return edges_;
  }

  static std::uint64_t key(std::int32_t u, std::int32_t v);

 private:
  std::unordered_map<std::uint64_t, double> edges_;
};

// Undirected weighted graph over a name lexicon, stored as CSR with sorted
// neighbor lists. Immutable after construction; all weights are positive and
// there are no self-loops.
class Graph {
 public:
  Graph() = default;
  static Graph build(std::shared_ptr<const Lexicon> names,
                     const EdgeAccumulator& edges);

  std::int32_t vertex_count() const {
    return static_cast<std::int32_t>(offsets_.empty() ? 0 : offsets_.size() - 1);
  }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(adj_.size()) / 2; }

  std::span<const std::int32_t> neighbors(std::int32_t v) const {
    return {adj_.data() + offsets_[static_cast<std::size_t>(v)],
            adj_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
  }
  std::span<const double> weights(std::int32_t v) const {
    return {wgt_.data() + offsets_[static_cast<std::size_t>(v)],
            wgt_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
  }
  std::int32_t degree(std::int32_t v) const {
    return static_cast<std::int32_t>(offsets_[static_cast<std::size_t>(v) + 1] -
                                     offsets_[static_cast<std::size_t>(v)]);
  }
  double strength(std::int32_t v) const { return strength_[static_cast<std::size_t>(v)]; }
  // Weight of edge (u,v), or 0 when absent.
  double edge_weight(std::int32_t u, std::int32_t v) const;

  const Lexicon& names() const { return *names_; }
  std::shared_ptr<const Lexicon> names_ptr() const { return names_; }

  double total_weight() const { return total_weight_; }  // sum over undirected edges

  // Edge list TSV: name_a \t name_b \t weight, name_a < name_b
  // lexicographically, rows sorted. Lines starting with '#' are skipped on
  // load. Integral weights are printed without a decimal point.
  static Graph load_tsv(const std::string& path);
  static Graph parse_tsv(std::string_view text, const std::string& origin);
  void save_tsv(const std::string& path,
                const std::vector<std::string>& header_comments = {}) const;
  std::string to_tsv(const std::vector<std::string>& header_comments = {}) const;

 private:
  std::shared_ptr<const Lexicon> names_;
  std::vector<std::int64_t> offsets_;
  std::vector<std::int32_t> adj_;
  std::vector<double> wgt_;
  std::vector<double> strength_;
  double total_weight_ = 0;
};

struct NetworkStats {
  std::int64_t vertex_count = 0;
  std::int64_t edge_count = 0;
  double density = 0;
  std::int64_t wcc_count = 0;
  std::int64_t lwcc_size = 0;
  std::int64_t lwcc_diameter = -1;  // -1 when undefined (empty graph)
  bool diameter_exact = true;
};

// Exact diameter by all-sources BFS over the largest component when its size
// is at most diameter_cap; otherwise a double-sweep lower bound flagged as
// approximate.
NetworkStats graph_stats(const Graph& g, std::int64_t diameter_cap = 20000,
                         int threads = 1);

// Restricts both graphs to their common vertex set (matched by name, ordered
// lexicographically). Throws Error(invalid_argument) when the intersection is
// empty.
std::pair<Graph, Graph> restrict_to_common_vertices(const Graph& a,
                                                    const Graph& b);

// Copy of g with additive weight deltas applied (keys from
// EdgeAccumulator::key); edges whose weight drops to <= 0 are removed. The
// vertex set is unchanged.
Graph patch_graph(const Graph& g,
                  const std::unordered_map<std::uint64_t, double>& delta);

}  // namespace ng
