#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/pagerank.hpp"

namespace ng {

// L graphs over a shared vertex superset (the union of the layer lexica,
// ordered lexicographically). Every layer is stored re-indexed over the
// superset; vertices missing from a layer are isolated there.
struct GraphStack {
  std::shared_ptr<const Lexicon> names;
  std::vector<std::string> layer_names;
  std::vector<Graph> layers;

  std::int32_t layer_count() const { return static_cast<std::int32_t>(layers.size()); }
  std::int32_t vertex_count() const { return names->size(); }

  static GraphStack from_graphs(std::vector<std::string> layer_names,
                                std::vector<Graph> graphs);
  // Manifest: one line per layer, `layer_name<TAB>edge_list_path`; relative
  // paths resolve against the manifest's directory.
  static GraphStack load_manifest(const std::string& manifest_path);
};

// Nonnegative inter-layer damping weights. AveRank takes a 1 x L vector;
// the combined multigraph builders take an L x L doubly stochastic matrix.
struct EtaMatrix {
  std::int32_t rows = 0;
  std::int32_t cols = 0;
  std::vector<double> values;  // row major

  double at(std::int32_t r, std::int32_t c) const {
    return values[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(c)];
  }
  void require_doubly_stochastic(double tol = 1e-12) const;

  // L x L with diagonal `a` and off-diagonals (1-a)/(L-1); L = 1 gives (1).
  static EtaMatrix mix(std::int32_t layers, double diagonal);
  // 1 x L vector: first layer `a`, the rest share 1-a evenly.
  static EtaMatrix vector_mix(std::int32_t layers, double first);
  // CSV text, one row per line of comma-separated values.
  static EtaMatrix parse_csv(std::string_view text, const std::string& origin);
  static EtaMatrix load_csv(const std::string& path);
};

struct MultigraphOptions {
  double interlayer_weight = 1.0;
  PowerIterOptions power;
};

// Weighted average of per-layer PPR+ vectors; eta has one weight per layer
// and must sum to 1. Names without edges in a layer contribute zero from
// that layer; layers disjoint from the query contribute zero and are listed
// in the result note.
RankVector averank(const GraphStack& stack, std::span<const double> eta,
                   std::span<const std::int32_t> query,
                   const MultigraphOptions& options);

// Column-stochastic matrix over L*|V| node copies plus the copy layout.
struct CombinedMatrix {
  StochasticMatrix matrix;
  std::int32_t layer_count = 0;
  std::int32_t base_vertices = 0;

  std::int64_t copy_index(std::int32_t layer, std::int32_t vertex) const {
    return static_cast<std::int64_t>(layer) * base_vertices + vertex;
  }
};

// Conditional multigraph: diagonal blocks carry each layer's weighted edges;
// off-diagonal block (row L1, column L2) mirrors layer L1's edge pattern with
// the flat inter-layer weight. Block columns are scaled so the block for
// row-layer L1 under column-layer L2 sums to eta[L1][L2]; when a vertex has
// no edges in some row layer, its remaining eta mass is renormalized over the
// layers where it does (a vertex isolated everywhere yields dangling
// columns). eta must be doubly stochastic.
CombinedMatrix build_conditional_multigraph(const GraphStack& stack,
                                            const EtaMatrix& eta,
                                            double interlayer_weight = 1.0);

// Parallel variant: off-diagonal blocks connect each vertex to its own copies
// (identity pattern) instead of mirroring edges.
CombinedMatrix build_parallel_multigraph(const GraphStack& stack,
                                         const EtaMatrix& eta,
                                         double interlayer_weight = 1.0);

// PPR+ on a combined matrix: preference mass 1/|I| per query name split
// uniformly over its L copies; per-name scores are the sums over copies.
RankVector layered_ppr_plus(const CombinedMatrix& combined,
                            std::span<const std::int32_t> query,
                            const PowerIterOptions& options,
                            const RankVector* cached_global = nullptr);

enum class MultigraphMethod { averank, multirank, prank };
MultigraphMethod parse_multigraph_method(std::string_view token);
const char* multigraph_method_name(MultigraphMethod m);

// Dispatch helper. AveRank expects a 1 x L eta, the combined methods L x L.
RankVector multigraph_rank(const GraphStack& stack, MultigraphMethod method,
                           const EtaMatrix& eta,
                           std::span<const std::int32_t> query,
                           const MultigraphOptions& options);

}  // namespace ng
