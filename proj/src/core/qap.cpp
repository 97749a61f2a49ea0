#include "core/qap.hpp"

#include <cmath>
#include <unordered_map>

#include "core/common.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace ng {

namespace {

struct Moments {
  double sum = 0;       // sum over all n^2 entries
  double self_dot = 0;  // sum of squared entries
};

Moments moments(const Graph& g, bool binarize) {
  Moments m;
  const std::int32_t n = g.vertex_count();
  for (std::int32_t u = 0; u < n; ++u) {
    for (double w : g.weights(u)) {
      const double x = binarize ? 1.0 : w;
      m.sum += x;
      m.self_dot += x * x;
    }
  }
  return m;  // symmetric storage already counts both (i,j) and (j,i)
}

// sum_ij A1[i,j]*A2[i,j] over the sparse intersection
double cross_dot(const Graph& a, const Graph& b, bool binarize) {
  double dot = 0;
  const std::int32_t n = a.vertex_count();
  for (std::int32_t u = 0; u < n; ++u) {
    auto na = a.neighbors(u);
    auto wa = a.weights(u);
    auto nb = b.neighbors(u);
    auto wb = b.weights(u);
    std::size_t i = 0, j = 0;
    while (i < na.size() && j < nb.size()) {
      if (na[i] < nb[j]) ++i;
      else if (na[i] > nb[j]) ++j;
      else {
        const double x = binarize ? 1.0 : wa[i];
        const double y = binarize ? 1.0 : wb[j];
        dot += x * y;
        ++i;
        ++j;
      }
    }
  }
  return dot;
}

double cov_from(double dot, const Moments& ma, const Moments& mb, double n) {
  const double n2 = n * n;
  const double mu1 = ma.sum / n2;
  const double mu2 = mb.sum / n2;
  return (dot - n2 * mu1 * mu2) / (n2 - 1.0);
}

void check_same_universe(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count())
    fail(Errc::invalid_argument,
         "graphs must be restricted to a common vertex set first");
}

}  // namespace

double graph_covariance(const Graph& a, const Graph& b, bool binarize) {
  check_same_universe(a, b);
  const double n = static_cast<double>(a.vertex_count());
  if (n < 2) fail(Errc::invalid_argument, "need at least 2 common vertices");
  if (&a == &b) {
    const Moments m = moments(a, binarize);
    return cov_from(m.self_dot, m, m, n);
  }
  return cov_from(cross_dot(a, b, binarize), moments(a, binarize),
                  moments(b, binarize), n);
}

double graph_variance(const Graph& g, bool binarize) {
  return graph_covariance(g, g, binarize);
}

double graph_correlation(const Graph& a, const Graph& b, bool binarize) {
  check_same_universe(a, b);
  const double va = graph_variance(a, binarize);
  const double vb = graph_variance(b, binarize);
  if (!(va > 0) || !(vb > 0))
    fail(Errc::numeric,
         "graph correlation undefined: zero adjacency variance");
  const double cov = graph_covariance(a, b, binarize);
  return cov / std::sqrt(va * vb);
}

QapResult qap_test(const Graph& a, const Graph& b, std::int64_t permutations,
                   std::uint64_t seed, bool binarize, int threads) {
  check_same_universe(a, b);
  if (permutations < 1)
    fail(Errc::invalid_argument, "need at least one permutation");
  const std::int32_t n = a.vertex_count();
  const double dn = static_cast<double>(n);

  const Moments ma = moments(a, binarize);
  const Moments mb = moments(b, binarize);
  const double va = cov_from(ma.self_dot, ma, ma, dn);
  const double vb = cov_from(mb.self_dot, mb, mb, dn);
  if (!(va > 0) || !(vb > 0))
    fail(Errc::numeric,
         "graph correlation undefined: zero adjacency variance");
  const double denom = std::sqrt(va * vb);

  QapResult result;
  result.rho_observed = cov_from(cross_dot(a, b, binarize), ma, mb, dn) / denom;
  result.permutations = permutations;
  result.null_samples.assign(static_cast<std::size_t>(permutations), 0.0);

  // A's entries as a hash map for O(1) lookups under permuted coordinates.
  std::unordered_map<std::uint64_t, double> a_edges;
  a_edges.reserve(static_cast<std::size_t>(a.edge_count()) * 2);
  for (std::int32_t u = 0; u < n; ++u) {
    auto nbrs = a.neighbors(u);
    auto ws = a.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] < u) continue;
      a_edges.emplace(EdgeAccumulator::key(u, nbrs[k]),
                      binarize ? 1.0 : ws[k]);
    }
  }

  // B's undirected edge list
  std::vector<std::pair<std::int32_t, std::int32_t>> b_edges;
  std::vector<double> b_w;
  for (std::int32_t u = 0; u < n; ++u) {
    auto nbrs = b.neighbors(u);
    auto ws = b.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nbrs[k] < u) continue;
      b_edges.emplace_back(u, nbrs[k]);
      b_w.push_back(binarize ? 1.0 : ws[k]);
    }
  }

  parallel_blocks(permutations, 16, threads, [&](std::int64_t, std::int64_t lo,
                                                 std::int64_t hi) {
    std::vector<std::int32_t> perm(static_cast<std::size_t>(n));
    for (std::int64_t t = lo; t < hi; ++t) {
      Rng rng = Rng::derive(seed, 0x71b9, static_cast<std::uint64_t>(t));
      for (std::int32_t i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
      for (std::size_t i = static_cast<std::size_t>(n); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(perm[i - 1], perm[j]);
      }
      double dot = 0;
      for (std::size_t e = 0; e < b_edges.size(); ++e) {
        const std::int32_t pu = perm[static_cast<std::size_t>(b_edges[e].first)];
        const std::int32_t pv = perm[static_cast<std::size_t>(b_edges[e].second)];
        auto it = a_edges.find(EdgeAccumulator::key(pu, pv));
        if (it != a_edges.end()) dot += 2.0 * it->second * b_w[e];
      }
      result.null_samples[static_cast<std::size_t>(t)] =
          cov_from(dot, ma, mb, dn) / denom;
    }
  });

  std::int64_t hits = 0;
  for (double rho : result.null_samples)
    if (rho >= result.rho_observed) ++hits;
  result.p_value =
      static_cast<double>(hits) / static_cast<double>(permutations);
  return result;
}

}  // namespace ng
