#include "core/multigraph.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "core/common.hpp"
#include "core/strings.hpp"
#include "core/table.hpp"

namespace ng {

GraphStack GraphStack::from_graphs(std::vector<std::string> layer_names,
                                   std::vector<Graph> graphs) {
  if (graphs.empty()) fail(Errc::invalid_argument, "stack needs >= 1 layer");
  if (layer_names.size() != graphs.size())
    fail(Errc::invalid_argument, "layer name/graph count mismatch");
  std::vector<std::string> union_names;
  for (const Graph& g : graphs)
    for (const auto& name : g.names().entries()) union_names.push_back(name);
  std::sort(union_names.begin(), union_names.end());
  union_names.erase(std::unique(union_names.begin(), union_names.end()),
                    union_names.end());
  auto lex = Lexicon::from_names(union_names);

  GraphStack stack;
  stack.names = lex;
  stack.layer_names = std::move(layer_names);
  for (const Graph& g : graphs) {
    EdgeAccumulator acc;
    for (std::int32_t u = 0; u < g.vertex_count(); ++u) {
      const std::int32_t cu = lex->id_of(g.names().name(u));
      auto nbrs = g.neighbors(u);
      auto ws = g.weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        if (nbrs[k] <= u) continue;
        acc.add(cu, lex->id_of(g.names().name(nbrs[k])), ws[k]);
      }
    }
    stack.layers.push_back(Graph::build(lex, acc));
  }
  return stack;
}

GraphStack GraphStack::load_manifest(const std::string& manifest_path) {
  const std::string text = read_file(manifest_path);
  const auto base_dir = std::filesystem::path(manifest_path).parent_path();
  std::vector<std::string> layer_names;
  std::vector<Graph> graphs;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    ++line_no;
    std::string_view line = chomp_cr(std::string_view(text).substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    auto parts = split(line, '\t');
    if (parts.size() != 2)
      fail(Errc::parse, manifest_path + ":" + format_int(static_cast<std::int64_t>(line_no)) +
                            ": expected `layer_name<TAB>edge_list_path`");
    layer_names.emplace_back(parts[0]);
    std::filesystem::path p{std::string(parts[1])};
    if (p.is_relative()) p = base_dir / p;
    graphs.push_back(Graph::load_tsv(p.string()));
  }
  return from_graphs(std::move(layer_names), std::move(graphs));
}

void EtaMatrix::require_doubly_stochastic(double tol) const {
  if (rows != cols)
    fail(Errc::invalid_argument, "eta matrix must be square");
  for (std::int32_t r = 0; r < rows; ++r) {
    double row_sum = 0, col_sum = 0;
    for (std::int32_t c = 0; c < cols; ++c) {
      if (at(r, c) < 0)
        fail(Errc::invalid_argument, "eta entries must be nonnegative");
      row_sum += at(r, c);
      col_sum += at(c, r);
    }
    if (std::abs(row_sum - 1.0) > tol || std::abs(col_sum - 1.0) > tol)
      fail(Errc::invalid_argument,
           "eta matrix must be doubly stochastic (rows and columns sum to 1)");
  }
}

EtaMatrix EtaMatrix::mix(std::int32_t layers, double diagonal) {
  if (layers < 1) fail(Errc::invalid_argument, "need >= 1 layer");
  EtaMatrix eta;
  eta.rows = eta.cols = layers;
  eta.values.assign(static_cast<std::size_t>(layers) * layers, 0.0);
  if (layers == 1) {
    eta.values[0] = 1.0;
    return eta;
  }
  const double off = (1.0 - diagonal) / static_cast<double>(layers - 1);
  for (std::int32_t r = 0; r < layers; ++r)
    for (std::int32_t c = 0; c < layers; ++c)
      eta.values[static_cast<std::size_t>(r) * layers + c] =
          r == c ? diagonal : off;
  return eta;
}

EtaMatrix EtaMatrix::vector_mix(std::int32_t layers, double first) {
  if (layers < 1) fail(Errc::invalid_argument, "need >= 1 layer");
  EtaMatrix eta;
  eta.rows = 1;
  eta.cols = layers;
  eta.values.assign(static_cast<std::size_t>(layers), 0.0);
  if (layers == 1) {
    eta.values[0] = 1.0;
    return eta;
  }
  eta.values[0] = first;
  const double rest = (1.0 - first) / static_cast<double>(layers - 1);
  for (std::int32_t c = 1; c < layers; ++c)
    eta.values[static_cast<std::size_t>(c)] = rest;
  return eta;
}

EtaMatrix EtaMatrix::parse_csv(std::string_view text, const std::string& origin) {
  EtaMatrix eta;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = trim(chomp_cr(text.substr(pos, eol - pos)));
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    auto parts = split(line, ',');
    if (eta.cols == 0) eta.cols = static_cast<std::int32_t>(parts.size());
    if (static_cast<std::int32_t>(parts.size()) != eta.cols)
      fail(Errc::parse, origin + ": ragged eta matrix");
    for (auto p : parts) {
      auto v = parse_double(p);
      if (!v) fail(Errc::parse, origin + ": bad eta value '" + std::string(p) + "'");
      eta.values.push_back(*v);
    }
    ++eta.rows;
  }
  if (eta.rows == 0) fail(Errc::parse, origin + ": empty eta matrix");
  return eta;
}

EtaMatrix EtaMatrix::load_csv(const std::string& path) {
  return parse_csv(read_file(path), path);
}

RankVector averank(const GraphStack& stack, std::span<const double> eta,
                   std::span<const std::int32_t> query,
                   const MultigraphOptions& options) {
  const std::int32_t L = stack.layer_count();
  if (static_cast<std::int32_t>(eta.size()) != L)
    fail(Errc::invalid_argument, "eta vector length must match layer count");
  double sum = 0;
  for (double e : eta) {
    if (e < 0 || e > 1)
      fail(Errc::invalid_argument, "eta weights must lie in [0, 1]");
    sum += e;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    fail(Errc::invalid_argument, "eta weights must sum to 1");
  if (query.empty()) fail(Errc::invalid_argument, "query set must not be empty");

  const std::int32_t n = stack.vertex_count();
  RankVector out;
  out.kind = RankKind::ppr_plus;
  out.alpha = options.power.alpha;
  out.scores.assign(static_cast<std::size_t>(n), 0.0);
  std::string fallback;
  for (std::int32_t l = 0; l < L; ++l) {
    if (eta[static_cast<std::size_t>(l)] == 0) continue;
    const Graph& layer = stack.layers[static_cast<std::size_t>(l)];
    std::vector<std::int32_t> present;
    for (std::int32_t v : query)
      if (layer.degree(v) > 0) present.push_back(v);
    if (present.empty()) {
      // PPR over an empty preference is undefined; the layer's PPR+ would be
      // identically zero, so it contributes nothing and is flagged.
      if (!fallback.empty()) fallback += ",";
      fallback += stack.layer_names[static_cast<std::size_t>(l)];
      continue;
    }
    StochasticMatrix m = StochasticMatrix::from_graph(layer);
    RankVector v = ppr_plus(m, present, options.power);
    out.iterations += v.iterations;
    out.residual += v.residual;
    for (std::int32_t i = 0; i < n; ++i) {
      if (layer.degree(i) == 0) continue;  // absent names contribute zero
      out.scores[static_cast<std::size_t>(i)] +=
          eta[static_cast<std::size_t>(l)] * v.scores[static_cast<std::size_t>(i)];
    }
  }
  if (!fallback.empty()) out.note = "zero_fallback_layers=" + fallback;
  return out;
}

namespace {

struct LayerShape {
  std::vector<double> strength;  // per vertex
  std::vector<std::int32_t> degree;
};

CombinedMatrix build_combined(const GraphStack& stack, const EtaMatrix& eta,
                              double interlayer_weight, bool parallel) {
  const std::int32_t L = stack.layer_count();
  const std::int32_t n = stack.vertex_count();
  if (eta.rows != L || eta.cols != L)
    fail(Errc::invalid_argument, "eta matrix must be L x L");
  eta.require_doubly_stochastic();
  if (interlayer_weight <= 0)
    fail(Errc::invalid_argument, "inter-layer weight must be > 0");

  std::vector<LayerShape> shapes(static_cast<std::size_t>(L));
  for (std::int32_t l = 0; l < L; ++l) {
    const Graph& g = stack.layers[static_cast<std::size_t>(l)];
    auto& sh = shapes[static_cast<std::size_t>(l)];
    sh.strength.resize(static_cast<std::size_t>(n));
    sh.degree.resize(static_cast<std::size_t>(n));
    for (std::int32_t v = 0; v < n; ++v) {
      sh.strength[static_cast<std::size_t>(v)] = g.strength(v);
      sh.degree[static_cast<std::size_t>(v)] = g.degree(v);
    }
  }

  // For column (lc, j): which row layers can absorb mass, and the eta
  // normalizer over them.
  auto block_available = [&](std::int32_t lr, std::int32_t lc, std::int32_t j) {
    if (parallel && lr != lc) return true;  // identity edge always exists
    return shapes[static_cast<std::size_t>(lr)].degree[static_cast<std::size_t>(j)] > 0;
  };
  std::vector<double> denom(static_cast<std::size_t>(L) * n, 0.0);
  for (std::int32_t lc = 0; lc < L; ++lc)
    for (std::int32_t j = 0; j < n; ++j) {
      double d = 0;
      for (std::int32_t lr = 0; lr < L; ++lr)
        if (block_available(lr, lc, j)) d += eta.at(lr, lc);
      denom[static_cast<std::size_t>(lc) * n + j] = d;
    }

  // effective column weight of row-layer lr for column (lc, j)
  auto eta_eff = [&](std::int32_t lr, std::int32_t lc, std::int32_t j) {
    const double d = denom[static_cast<std::size_t>(lc) * n + j];
    return d > 0 ? eta.at(lr, lc) / d : 0.0;
  };

  const std::int64_t total = static_cast<std::int64_t>(L) * n;
  std::vector<std::int64_t> offsets(static_cast<std::size_t>(total) + 1, 0);
  // count row entries
  for (std::int32_t lr = 0; lr < L; ++lr) {
    const Graph& g = stack.layers[static_cast<std::size_t>(lr)];
    for (std::int32_t i = 0; i < n; ++i) {
      std::int64_t count = 0;
      if (parallel) {
        count += g.degree(i);           // diagonal block
        count += L - 1;                 // one identity entry per other layer
      } else {
        count += static_cast<std::int64_t>(g.degree(i)) * L;
      }
      offsets[static_cast<std::size_t>(lr) * n + i + 1] = count;
    }
  }
  for (std::size_t k = 1; k < offsets.size(); ++k) offsets[k] += offsets[k - 1];
  std::vector<std::int32_t> sources(static_cast<std::size_t>(offsets.back()));
  std::vector<double> values(sources.size());

  for (std::int32_t lr = 0; lr < L; ++lr) {
    const Graph& g = stack.layers[static_cast<std::size_t>(lr)];
    for (std::int32_t i = 0; i < n; ++i) {
      std::int64_t at = offsets[static_cast<std::size_t>(lr) * n + i];
      auto nbrs = g.neighbors(i);
      auto ws = g.weights(i);
      if (parallel) {
        for (std::int32_t lc = 0; lc < L; ++lc) {
          if (lc == lr) {
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
              const std::int32_t j = nbrs[k];
              const double s = shapes[static_cast<std::size_t>(lr)].strength[static_cast<std::size_t>(j)];
              sources[static_cast<std::size_t>(at)] =
                  static_cast<std::int32_t>(lc * n + j);
              values[static_cast<std::size_t>(at)] =
                  eta_eff(lr, lc, j) * (ws[k] / s);
              ++at;
            }
          } else {
            // identity entry: copy (lc, i) -> (lr, i); block column sum is
            // the single inter-layer weight, so it normalizes away
            sources[static_cast<std::size_t>(at)] =
                static_cast<std::int32_t>(lc * n + i);
            values[static_cast<std::size_t>(at)] = eta_eff(lr, lc, i);
            ++at;
          }
        }
      } else {
        // conditional: row (lr,i) receives from every copy (lc,j) of its
        // layer-lr neighbors j
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
          const std::int32_t j = nbrs[k];
          const double block_sum =
              interlayer_weight *
              static_cast<double>(shapes[static_cast<std::size_t>(lr)].degree[static_cast<std::size_t>(j)]);
          for (std::int32_t lc = 0; lc < L; ++lc) {
            const double w = lc == lr
                                 ? ws[k] / shapes[static_cast<std::size_t>(lr)].strength[static_cast<std::size_t>(j)]
                                 : interlayer_weight / block_sum;
            sources[static_cast<std::size_t>(at)] =
                static_cast<std::int32_t>(lc * n + j);
            values[static_cast<std::size_t>(at)] = eta_eff(lr, lc, j) * w;
            ++at;
          }
        }
      }
    }
  }

  std::vector<std::int32_t> dangling;
  for (std::int32_t lc = 0; lc < L; ++lc)
    for (std::int32_t j = 0; j < n; ++j)
      if (!(denom[static_cast<std::size_t>(lc) * n + j] > 0))
        dangling.push_back(static_cast<std::int32_t>(lc * n + j));

  CombinedMatrix combined;
  combined.layer_count = L;
  combined.base_vertices = n;
  combined.matrix =
      StochasticMatrix::from_rows(static_cast<std::int32_t>(total),
                                  std::move(offsets), std::move(sources),
                                  std::move(values), std::move(dangling));
  return combined;
}

}  // namespace

CombinedMatrix build_conditional_multigraph(const GraphStack& stack,
                                            const EtaMatrix& eta,
                                            double interlayer_weight) {
  return build_combined(stack, eta, interlayer_weight, false);
}

CombinedMatrix build_parallel_multigraph(const GraphStack& stack,
                                         const EtaMatrix& eta,
                                         double interlayer_weight) {
  return build_combined(stack, eta, interlayer_weight, true);
}

RankVector layered_ppr_plus(const CombinedMatrix& combined,
                            std::span<const std::int32_t> query,
                            const PowerIterOptions& options,
                            const RankVector* cached_global) {
  if (query.empty()) fail(Errc::invalid_argument, "query set must not be empty");
  const std::int32_t n = combined.base_vertices;
  const std::int32_t L = combined.layer_count;
  std::vector<std::int32_t> q(query.begin(), query.end());
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  for (std::int32_t v : q)
    if (v < 0 || v >= n) fail(Errc::invalid_argument, "query vertex out of range");

  std::vector<double> pref(static_cast<std::size_t>(combined.matrix.size()), 0.0);
  const double mass = 1.0 / (static_cast<double>(q.size()) * static_cast<double>(L));
  for (std::int32_t v : q)
    for (std::int32_t l = 0; l < L; ++l)
      pref[static_cast<std::size_t>(combined.copy_index(l, v))] = mass;

  RankVector pp = pagerank(combined.matrix, pref, options);
  RankVector global;
  const RankVector* pr = cached_global;
  if (!pr) {
    global = global_pagerank(combined.matrix, options);
    pr = &global;
  }

  RankVector out;
  out.kind = RankKind::ppr_plus;
  out.alpha = options.alpha;
  out.iterations = pp.iterations + (cached_global ? 0 : pr->iterations);
  out.residual = pp.residual + pr->residual;
  out.scores.assign(static_cast<std::size_t>(n), 0.0);
  for (std::int32_t l = 0; l < L; ++l)
    for (std::int32_t v = 0; v < n; ++v)
      out.scores[static_cast<std::size_t>(v)] +=
          pp.scores[static_cast<std::size_t>(combined.copy_index(l, v))] -
          pr->scores[static_cast<std::size_t>(combined.copy_index(l, v))];
  return out;
}

MultigraphMethod parse_multigraph_method(std::string_view token) {
  if (token == "averank") return MultigraphMethod::averank;
  if (token == "multirank") return MultigraphMethod::multirank;
  if (token == "prank") return MultigraphMethod::prank;
  fail(Errc::invalid_argument,
       "unknown multigraph method: '" + std::string(token) + "'");
}

const char* multigraph_method_name(MultigraphMethod m) {
  switch (m) {
    case MultigraphMethod::averank: return "averank";
    case MultigraphMethod::multirank: return "multirank";
    case MultigraphMethod::prank: return "prank";
  }
  return "?";
}

RankVector multigraph_rank(const GraphStack& stack, MultigraphMethod method,
                           const EtaMatrix& eta,
                           std::span<const std::int32_t> query,
                           const MultigraphOptions& options) {
  if (method == MultigraphMethod::averank) {
    if (eta.rows != 1 || eta.cols != stack.layer_count())
      fail(Errc::invalid_argument, "averank needs a 1 x L eta vector");
    return averank(stack, eta.values, query, options);
  }
  CombinedMatrix combined =
      method == MultigraphMethod::multirank
          ? build_conditional_multigraph(stack, eta, options.interlayer_weight)
          : build_parallel_multigraph(stack, eta, options.interlayer_weight);
  return layered_ppr_plus(combined, query, options.power);
}

}  // namespace ng
