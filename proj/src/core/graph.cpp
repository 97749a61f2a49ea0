#include "core/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "core/common.hpp"
#include "core/parallel.hpp"
#include "core/strings.hpp"
#include "core/table.hpp"

namespace ng {

std::uint64_t EdgeAccumulator::key(std::int32_t u, std::int32_t v) {
  const std::uint32_t lo = static_cast<std::uint32_t>(std::min(u, v));
  const std::uint32_t hi = static_cast<std::uint32_t>(std::max(u, v));
  return (std::uint64_t(lo) << 32) | hi;
}

void EdgeAccumulator::add(std::int32_t u, std::int32_t v, double w) {
  if (u == v) return;  // no self-loops
  edges_[key(u, v)] += w;
}

void EdgeAccumulator::merge(const EdgeAccumulator& other) {
  for (const auto& [k, w] : other.edges_) edges_[k] += w;
}

Graph Graph::build(std::shared_ptr<const Lexicon> names,
                   const EdgeAccumulator& edges) {
  Graph g;
  g.names_ = std::move(names);
  const std::size_t n = static_cast<std::size_t>(g.names_->size());
  std::vector<std::int64_t> deg(n + 1, 0);
  for (const auto& [k, w] : edges.edges()) {
    if (w <= 0) fail(Errc::state, "non-positive edge weight");
    const std::int32_t u = static_cast<std::int32_t>(k >> 32);
    const std::int32_t v = static_cast<std::int32_t>(k & 0xffffffffULL);
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
        static_cast<std::size_t>(v) >= n)
      fail(Errc::state, "edge endpoint outside lexicon");
    ++deg[static_cast<std::size_t>(u) + 1];
    ++deg[static_cast<std::size_t>(v) + 1];
  }
  for (std::size_t i = 1; i <= n; ++i) deg[i] += deg[i - 1];
  g.offsets_ = deg;
  g.adj_.resize(static_cast<std::size_t>(deg[n]));
  g.wgt_.resize(static_cast<std::size_t>(deg[n]));
  std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [k, w] : edges.edges()) {
    const std::int32_t u = static_cast<std::int32_t>(k >> 32);
    const std::int32_t v = static_cast<std::int32_t>(k & 0xffffffffULL);
    g.adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(u)])] = v;
    g.wgt_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(u)]++)] = w;
    g.adj_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)])] = u;
    g.wgt_[static_cast<std::size_t>(cursor[static_cast<std::size_t>(v)]++)] = w;
  }
  // sort each row by neighbor id
  for (std::size_t v = 0; v < n; ++v) {
    const std::int64_t b = g.offsets_[v], e = g.offsets_[v + 1];
    std::vector<std::pair<std::int32_t, double>> row;
    row.reserve(static_cast<std::size_t>(e - b));
    for (std::int64_t i = b; i < e; ++i)
      row.emplace_back(g.adj_[static_cast<std::size_t>(i)],
                       g.wgt_[static_cast<std::size_t>(i)]);
    std::sort(row.begin(), row.end());
    for (std::int64_t i = b; i < e; ++i) {
      g.adj_[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i - b)].first;
      g.wgt_[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i - b)].second;
    }
  }
  g.strength_.assign(n, 0.0);
  double total = 0;
  for (std::size_t v = 0; v < n; ++v) {
    double s = 0;
    for (std::int64_t i = g.offsets_[v]; i < g.offsets_[v + 1]; ++i)
      s += g.wgt_[static_cast<std::size_t>(i)];
    g.strength_[v] = s;
    total += s;
  }
  g.total_weight_ = total / 2;
  return g;
}

double Graph::edge_weight(std::int32_t u, std::int32_t v) const {
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return weights(u)[static_cast<std::size_t>(it - nbrs.begin())];
}

Graph Graph::load_tsv(const std::string& path) {
  return parse_tsv(read_file(path), path);
}

Graph Graph::parse_tsv(std::string_view text, const std::string& origin) {
  struct RawEdge {
    std::string_view a, b;
    double w;
  };
  std::vector<RawEdge> raw;
  std::vector<std::string_view> name_views;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = chomp_cr(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    auto parts = split(line, '\t');
    if (parts.size() != 3)
      fail(Errc::parse, origin + ":" + format_int(static_cast<std::int64_t>(line_no)) +
                            ": expected 3 tab-separated fields");
    auto w = parse_double(parts[2]);
    if (!w || !(*w > 0))
      fail(Errc::parse, origin + ":" + format_int(static_cast<std::int64_t>(line_no)) +
                            ": bad edge weight");
    raw.push_back({parts[0], parts[1], *w});
    name_views.push_back(parts[0]);
    name_views.push_back(parts[1]);
  }
  std::sort(name_views.begin(), name_views.end());
  name_views.erase(std::unique(name_views.begin(), name_views.end()),
                   name_views.end());
  std::vector<std::string> names(name_views.begin(), name_views.end());
  auto lex = Lexicon::from_names(std::move(names));
  EdgeAccumulator acc;
  for (const auto& e : raw) {
    const std::int32_t u = lex->id_of(e.a);
    const std::int32_t v = lex->id_of(e.b);
    if (u == v)
      fail(Errc::parse, origin + ": self-loop on '" + std::string(e.a) + "'");
    acc.add(u, v, e.w);
  }
  return build(std::move(lex), acc);
}

std::string Graph::to_tsv(const std::vector<std::string>& header_comments) const {
  // order vertices lexicographically by name, emit each edge once with
  // name_a < name_b
  const std::int32_t n = vertex_count();
  std::vector<std::int32_t> order(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    return names_->name(a) < names_->name(b);
  });
  std::vector<std::int32_t> rank(static_cast<std::size_t>(n));
  for (std::int32_t i = 0; i < n; ++i)
    rank[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

  std::string out;
  for (const auto& c : header_comments) {
    out += "# ";
    out += c;
    out += '\n';
  }
  auto fmt_weight = [](double w) {
    double ip;
    if (std::modf(w, &ip) == 0.0 && std::abs(w) < 9.0e15)
      return format_int(static_cast<std::int64_t>(w));
    return format_double(w);
  };
  for (std::int32_t i = 0; i < n; ++i) {
    const std::int32_t u = order[static_cast<std::size_t>(i)];
    auto nbrs = neighbors(u);
    auto ws = weights(u);
    std::vector<std::size_t> idx(nbrs.size());
    for (std::size_t k = 0; k < nbrs.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return names_->name(nbrs[a]) < names_->name(nbrs[b]);
    });
    for (std::size_t k : idx) {
      const std::int32_t v = nbrs[k];
      if (rank[static_cast<std::size_t>(v)] <= i) continue;  // emit once
      out += names_->name(u);
      out += '\t';
      out += names_->name(v);
      out += '\t';
      out += fmt_weight(ws[k]);
      out += '\n';
    }
  }
  return out;
}

void Graph::save_tsv(const std::string& path,
                     const std::vector<std::string>& header_comments) const {
  write_file(path, to_tsv(header_comments));
}

namespace {

// BFS eccentricity of source within its component; dist reused across calls.
std::int64_t bfs_eccentricity(const Graph& g, std::int32_t source,
                              std::vector<std::int32_t>& dist,
                              std::vector<std::int32_t>& queue) {
  dist.assign(static_cast<std::size_t>(g.vertex_count()), -1);
  queue.clear();
  queue.push_back(source);
  dist[static_cast<std::size_t>(source)] = 0;
  std::size_t head = 0;
  std::int64_t ecc = 0;
  while (head < queue.size()) {
    const std::int32_t v = queue[head++];
    const std::int32_t dv = dist[static_cast<std::size_t>(v)];
    ecc = std::max<std::int64_t>(ecc, dv);
    for (std::int32_t w : g.neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dv + 1;
        queue.push_back(w);
      }
    }
  }
  return ecc;
}

}  // namespace

NetworkStats graph_stats(const Graph& g, std::int64_t diameter_cap,
                         int threads) {
  NetworkStats s;
  const std::int32_t n = g.vertex_count();
  s.vertex_count = n;
  s.edge_count = g.edge_count();
  s.density = n > 1 ? 2.0 * static_cast<double>(s.edge_count) /
                          (static_cast<double>(n) * (n - 1))
                    : 0.0;
  if (n == 0) return s;

  // weakly connected components by BFS
  std::vector<std::int32_t> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::int32_t> queue;
  std::int32_t comp_count = 0;
  std::vector<std::int64_t> comp_size;
  for (std::int32_t v = 0; v < n; ++v) {
    if (comp[static_cast<std::size_t>(v)] >= 0) continue;
    const std::int32_t c = comp_count++;
    comp_size.push_back(0);
    queue.clear();
    queue.push_back(v);
    comp[static_cast<std::size_t>(v)] = c;
    std::size_t head = 0;
    while (head < queue.size()) {
      const std::int32_t x = queue[head++];
      ++comp_size[static_cast<std::size_t>(c)];
      for (std::int32_t w : g.neighbors(x)) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = c;
          queue.push_back(w);
        }
      }
    }
  }
  s.wcc_count = comp_count;
  std::int32_t largest = 0;
  for (std::int32_t c = 0; c < comp_count; ++c)
    if (comp_size[static_cast<std::size_t>(c)] >
        comp_size[static_cast<std::size_t>(largest)])
      largest = c;
  s.lwcc_size = comp_size[static_cast<std::size_t>(largest)];

  std::vector<std::int32_t> members;
  members.reserve(static_cast<std::size_t>(s.lwcc_size));
  for (std::int32_t v = 0; v < n; ++v)
    if (comp[static_cast<std::size_t>(v)] == largest) members.push_back(v);

  if (s.lwcc_size <= 1) {
    s.lwcc_diameter = 0;
    return s;
  }

  if (s.lwcc_size <= diameter_cap) {
    const std::int64_t m = static_cast<std::int64_t>(members.size());
    std::vector<std::int64_t> block_max(
        static_cast<std::size_t>(block_count(m, 64)), 0);
    parallel_blocks(m, 64, threads, [&](std::int64_t b, std::int64_t lo,
                                        std::int64_t hi) {
      std::vector<std::int32_t> dist, q;
      std::int64_t best = 0;
      for (std::int64_t i = lo; i < hi; ++i)
        best = std::max(best, bfs_eccentricity(g, members[static_cast<std::size_t>(i)], dist, q));
      block_max[static_cast<std::size_t>(b)] = best;
    });
    std::int64_t diameter = 0;
    for (std::int64_t v : block_max) diameter = std::max(diameter, v);
    s.lwcc_diameter = diameter;
    s.diameter_exact = true;
  } else {
    // double sweep lower bound
    std::vector<std::int32_t> dist, q;
    bfs_eccentricity(g, members.front(), dist, q);
    std::int32_t far = members.front();
    for (std::int32_t v : members)
      if (dist[static_cast<std::size_t>(v)] > dist[static_cast<std::size_t>(far)]) far = v;
    s.lwcc_diameter = bfs_eccentricity(g, far, dist, q);
    s.diameter_exact = false;
  }
  return s;
}

Graph patch_graph(const Graph& g,
                  const std::unordered_map<std::uint64_t, double>& delta) {
  EdgeAccumulator acc;
  const std::int32_t n = g.vertex_count();
  for (std::int32_t u = 0; u < n; ++u) {
    auto nbrs = g.neighbors(u);
    auto ws = g.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] <= u) continue;
      double w = ws[k];
      auto it = delta.find(EdgeAccumulator::key(u, nbrs[k]));
      if (it != delta.end()) w += it->second;
      if (w > 0) acc.add(u, nbrs[k], w);
    }
  }
  return Graph::build(g.names_ptr(), acc);
}

std::pair<Graph, Graph> restrict_to_common_vertices(const Graph& a,
                                                    const Graph& b) {
  std::vector<std::string> common;
  for (const auto& name : a.names().entries()) {
    if (b.names().id_of(name) >= 0) common.push_back(name);
  }
  if (common.empty())
    fail(Errc::invalid_argument,
         "graphs share no vertices; correlation is undefined");
  std::sort(common.begin(), common.end());
  auto lex = Lexicon::from_names(common);

  auto restrict_one = [&](const Graph& g) {
    EdgeAccumulator acc;
    const std::int32_t n = g.vertex_count();
    for (std::int32_t u = 0; u < n; ++u) {
      const std::int32_t cu = lex->id_of(g.names().name(u));
      if (cu < 0) continue;
      auto nbrs = g.neighbors(u);
      auto ws = g.weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) {
        if (nbrs[k] <= u) continue;
        const std::int32_t cv = lex->id_of(g.names().name(nbrs[k]));
        if (cv < 0) continue;
        acc.add(cu, cv, ws[k]);
      }
    }
    return Graph::build(lex, acc);
  };
  return {restrict_one(a), restrict_one(b)};
}

}  // namespace ng
