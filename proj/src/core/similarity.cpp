#include "core/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "core/common.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"
#include "core/strings.hpp"
#include "core/table.hpp"

namespace ng {

VertexMetric parse_vertex_metric(std::string_view token) {
  if (token == "jaccard") return VertexMetric::jaccard;
  if (token == "cosine") return VertexMetric::cosine;
  fail(Errc::invalid_argument,
       "unknown vertex metric: '" + std::string(token) + "'");
}

// Unweighted:
//   JAC(u,v) = |G(u) n G(v)| / |G(u) u G(v)|
//   COS(u,v) = |G(u) n G(v)| / sqrt(|G(u)| |G(v)|)
// Weighted:
//   JAC~(u,v) = sum_{z in n} (w(u,z)+w(v,z)) / (strength(u)+strength(v))
//   COS~(u,v) = sum_{z in n} w(u,z) w(v,z) / (||w(u,.)|| ||w(v,.)||)
double vertex_similarity(const Graph& g, std::int32_t u, std::int32_t v,
                         VertexMetric metric, bool weighted) {
  const auto nu = g.neighbors(u);
  const auto nv = g.neighbors(v);
  if (nu.empty() || nv.empty()) return 0.0;
  const auto wu = g.weights(u);
  const auto wv = g.weights(v);

  double inter_count = 0, inter_sum = 0, inter_dot = 0;
  std::size_t i = 0, j = 0;
  while (i < nu.size() && j < nv.size()) {
    if (nu[i] < nv[j]) ++i;
    else if (nu[i] > nv[j]) ++j;
    else {
      inter_count += 1;
      inter_sum += wu[i] + wv[j];
      inter_dot += wu[i] * wv[j];
      ++i;
      ++j;
    }
  }
  switch (metric) {
    case VertexMetric::jaccard: {
      if (!weighted) {
        const double uni = static_cast<double>(nu.size() + nv.size()) - inter_count;
        return inter_count / uni;
      }
      const double denom = g.strength(u) + g.strength(v);
      return denom > 0 ? inter_sum / denom : 0.0;
    }
    case VertexMetric::cosine: {
      if (!weighted) {
        return inter_count /
               std::sqrt(static_cast<double>(nu.size()) *
                         static_cast<double>(nv.size()));
      }
      double squ = 0, sqv = 0;
      for (double w : wu) squ += w * w;
      for (double w : wv) sqv += w * w;
      const double denom = std::sqrt(squ) * std::sqrt(sqv);
      return denom > 0 ? inter_dot / denom : 0.0;
    }
  }
  return 0.0;
}

CategoryAssignments CategoryAssignments::load_file(
    const std::string& path, std::shared_ptr<const Lexicon> names) {
  return parse(read_file(path), path, std::move(names));
}

CategoryAssignments CategoryAssignments::parse(
    std::string_view text, const std::string& origin,
    std::shared_ptr<const Lexicon> names) {
  CategoryAssignments ca;
  ca.cats_.resize(static_cast<std::size_t>(names->size()));
  Lexicon categories;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = chomp_cr(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    auto parts = split(line, '\t');
    if (parts.size() != 2)
      fail(Errc::parse, origin + ":" + format_int(static_cast<std::int64_t>(line_no)) +
                            ": expected 2 tab-separated fields");
    const std::int32_t name = names->id_of(parts[0]);
    if (name < 0) {
      ++ca.skipped_;
      continue;
    }
    const std::int32_t cat = categories.add(parts[1]);
    ca.cats_[static_cast<std::size_t>(name)].push_back(cat);
  }
  ca.category_count_ = categories.size();
  for (auto& v : ca.cats_) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (!v.empty()) ++ca.assigned_;
    ca.nonzeros_ += static_cast<std::int64_t>(v.size());
  }
  return ca;
}

double CategoryAssignments::cosine(std::int32_t u, std::int32_t v) const {
  const auto& a = cats_[static_cast<std::size_t>(u)];
  const auto& b = cats_[static_cast<std::size_t>(v)];
  if (a.empty() || b.empty())
    fail(Errc::invalid_argument, "name has no category assignment");
  std::int64_t inter = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else { ++inter; ++i; ++j; }
  }
  return static_cast<double>(inter) /
         std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

namespace {

// cosine of two category vectors given directly (used for shuffled null
// assignments without rebuilding a CategoryAssignments)
double cosine_of(const std::vector<std::int32_t>& a,
                 const std::vector<std::int32_t>& b) {
  std::int64_t inter = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else { ++inter; ++i; ++j; }
  }
  return static_cast<double>(inter) /
         std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

struct DistanceAccumulator {
  std::vector<double> sum;
  std::vector<std::int64_t> count;
  explicit DistanceAccumulator(std::int32_t max_d)
      : sum(static_cast<std::size_t>(max_d) + 1, 0.0),
        count(static_cast<std::size_t>(max_d) + 1, 0) {}
  void merge(const DistanceAccumulator& o) {
    for (std::size_t d = 0; d < sum.size(); ++d) {
      sum[d] += o.sum[d];
      count[d] += o.count[d];
    }
  }
};

}  // namespace

std::vector<ProfilePoint> similarity_vs_distance_profile(
    const Graph& g, const CategoryAssignments& cats,
    const DistanceProfileOptions& options) {
  const std::int32_t n = g.vertex_count();
  const std::int32_t max_d = options.max_distance;
  if (max_d < 1) fail(Errc::invalid_argument, "max distance must be >= 1");

  std::vector<std::int32_t> assigned;
  for (std::int32_t v = 0; v < n; ++v)
    if (cats.has(v)) assigned.push_back(v);

  const bool exact = n <= options.exact_vertex_cap;
  std::vector<std::int32_t> sources;
  if (exact) {
    sources = assigned;
  } else {
    // sample sources; each BFS contributes ~|assigned| targets
    const std::int64_t want =
        std::max<std::int64_t>(1, options.pair_budget /
                                      std::max<std::int64_t>(1, static_cast<std::int64_t>(assigned.size())));
    Rng rng = Rng::derive(options.seed, 0x50f1);
    std::vector<std::int32_t> pool = assigned;
    rng.shuffle(pool);
    sources.assign(pool.begin(),
                   pool.begin() + std::min<std::size_t>(pool.size(),
                                                        static_cast<std::size_t>(want)));
    std::sort(sources.begin(), sources.end());
  }

  // (source, target, distance) triples; target restricted to assigned names.
  // Pairs are visited once per direction from exact mode; means are
  // direction-symmetric so this does not bias them.
  struct Pair {
    std::int32_t a, b;
    std::int32_t d;
  };
  const std::int64_t ns = static_cast<std::int64_t>(sources.size());
  const std::int64_t blocks = block_count(ns, 16);
  std::vector<std::vector<Pair>> partial(static_cast<std::size_t>(blocks));
  parallel_blocks(ns, 16, options.threads, [&](std::int64_t blk, std::int64_t lo,
                                               std::int64_t hi) {
    std::vector<std::int32_t> dist(static_cast<std::size_t>(n));
    std::vector<std::int32_t> queue;
    auto& out = partial[static_cast<std::size_t>(blk)];
    for (std::int64_t si = lo; si < hi; ++si) {
      const std::int32_t s = sources[static_cast<std::size_t>(si)];
      std::fill(dist.begin(), dist.end(), -1);
      queue.clear();
      queue.push_back(s);
      dist[static_cast<std::size_t>(s)] = 0;
      std::size_t head = 0;
      while (head < queue.size()) {
        const std::int32_t v = queue[head++];
        const std::int32_t dv = dist[static_cast<std::size_t>(v)];
        if (dv >= max_d) continue;
        for (std::int32_t w : g.neighbors(v)) {
          if (dist[static_cast<std::size_t>(w)] < 0) {
            dist[static_cast<std::size_t>(w)] = dv + 1;
            queue.push_back(w);
          }
        }
      }
      for (std::int32_t t : assigned) {
        const std::int32_t d = dist[static_cast<std::size_t>(t)];
        if (d < 1 || d > max_d) continue;
        if (exact && t <= s) continue;  // count unordered pairs once
        out.push_back({s, t, d});
      }
    }
  });

  std::vector<Pair> pairs;
  for (auto& p : partial) {
    pairs.insert(pairs.end(), p.begin(), p.end());
    p.clear();
  }

  DistanceAccumulator observed(max_d);
  for (const Pair& p : pairs) {
    observed.sum[static_cast<std::size_t>(p.d)] += cats.cosine(p.a, p.b);
    ++observed.count[static_cast<std::size_t>(p.d)];
  }

  // null model: permute the assignment vectors among assigned names
  DistanceAccumulator null_acc(max_d);
  std::int64_t shuffles = std::max(0, options.null_shuffles);
  for (std::int64_t r = 0; r < shuffles; ++r) {
    Rng rng = Rng::derive(options.seed, 0xa55e, static_cast<std::uint64_t>(r));
    std::vector<std::int32_t> perm(assigned.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
      perm[i] = static_cast<std::int32_t>(i);
    rng.shuffle(perm);
    // map name -> index in `assigned`
    std::vector<std::int32_t> slot(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < assigned.size(); ++i)
      slot[static_cast<std::size_t>(assigned[i])] = static_cast<std::int32_t>(i);
    for (const Pair& p : pairs) {
      const auto& ca = cats.categories(
          assigned[static_cast<std::size_t>(perm[static_cast<std::size_t>(
              slot[static_cast<std::size_t>(p.a)])])]);
      const auto& cb = cats.categories(
          assigned[static_cast<std::size_t>(perm[static_cast<std::size_t>(
              slot[static_cast<std::size_t>(p.b)])])]);
      null_acc.sum[static_cast<std::size_t>(p.d)] += cosine_of(ca, cb);
      ++null_acc.count[static_cast<std::size_t>(p.d)];
    }
  }

  std::vector<ProfilePoint> profile;
  for (std::int32_t d = 1; d <= max_d; ++d) {
    ProfilePoint pt;
    pt.distance = d;
    pt.pair_count = observed.count[static_cast<std::size_t>(d)];
    pt.present = pt.pair_count > 0;
    if (pt.present) {
      pt.mean = observed.sum[static_cast<std::size_t>(d)] /
                static_cast<double>(pt.pair_count);
      if (null_acc.count[static_cast<std::size_t>(d)] > 0)
        pt.null_mean = null_acc.sum[static_cast<std::size_t>(d)] /
                       static_cast<double>(null_acc.count[static_cast<std::size_t>(d)]);
    }
    profile.push_back(pt);
  }
  return profile;
}

std::vector<SimilarityBin> binned_similarity_correlation(
    const Graph& g, const CategoryAssignments& cats, VertexMetric metric,
    bool weighted, std::int32_t bins, int threads) {
  if (bins < 1) fail(Errc::invalid_argument, "bins must be >= 1");
  const std::int32_t n = g.vertex_count();
  std::vector<std::int32_t> assigned;
  for (std::int32_t v = 0; v < n; ++v)
    if (cats.has(v)) assigned.push_back(v);
  const std::int64_t na = static_cast<std::int64_t>(assigned.size());

  // pass 1: max observed structural score
  const std::int64_t blocks = block_count(na, 16);
  std::vector<double> block_max(static_cast<std::size_t>(blocks), 0.0);
  parallel_blocks(na, 16, threads, [&](std::int64_t blk, std::int64_t lo,
                                       std::int64_t hi) {
    double best = 0;
    for (std::int64_t i = lo; i < hi; ++i)
      for (std::int64_t j = i + 1; j < na; ++j)
        best = std::max(best, vertex_similarity(
                                  g, assigned[static_cast<std::size_t>(i)],
                                  assigned[static_cast<std::size_t>(j)], metric,
                                  weighted));
    block_max[static_cast<std::size_t>(blk)] = best;
  });
  double max_score = 0;
  for (double v : block_max) max_score = std::max(max_score, v);

  std::vector<std::vector<double>> sums(
      static_cast<std::size_t>(blocks),
      std::vector<double>(static_cast<std::size_t>(bins), 0.0));
  std::vector<std::vector<std::int64_t>> counts(
      static_cast<std::size_t>(blocks),
      std::vector<std::int64_t>(static_cast<std::size_t>(bins), 0));
  parallel_blocks(na, 16, threads, [&](std::int64_t blk, std::int64_t lo,
                                       std::int64_t hi) {
    auto& sum = sums[static_cast<std::size_t>(blk)];
    auto& count = counts[static_cast<std::size_t>(blk)];
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::int32_t u = assigned[static_cast<std::size_t>(i)];
      for (std::int64_t j = i + 1; j < na; ++j) {
        const std::int32_t v = assigned[static_cast<std::size_t>(j)];
        const double s = vertex_similarity(g, u, v, metric, weighted);
        std::int32_t bin = 0;
        if (max_score > 0) {
          bin = static_cast<std::int32_t>(s / max_score *
                                          static_cast<double>(bins));
          if (bin >= bins) bin = bins - 1;
        }
        sum[static_cast<std::size_t>(bin)] += cats.cosine(u, v);
        ++count[static_cast<std::size_t>(bin)];
      }
    }
  });

  std::vector<SimilarityBin> out;
  const double width = max_score > 0 ? max_score / static_cast<double>(bins) : 0;
  for (std::int32_t b = 0; b < bins; ++b) {
    double sum = 0;
    std::int64_t count = 0;
    for (std::int64_t blk = 0; blk < blocks; ++blk) {
      sum += sums[static_cast<std::size_t>(blk)][static_cast<std::size_t>(b)];
      count += counts[static_cast<std::size_t>(blk)][static_cast<std::size_t>(b)];
    }
    if (count == 0) continue;
    SimilarityBin bin;
    bin.x = (static_cast<double>(b) + 0.5) * width;
    bin.mean = sum / static_cast<double>(count);
    bin.pair_count = count;
    out.push_back(bin);
  }
  return out;
}

}  // namespace ng
