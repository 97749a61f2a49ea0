#include "core/pagerank.hpp"

#include <algorithm>
#include <cmath>

#include "core/common.hpp"
#include "core/parallel.hpp"
#include "core/strings.hpp"

namespace ng {

const char* rank_kind_name(RankKind k) {
  switch (k) {
    case RankKind::pagerank: return "PR";
    case RankKind::ppr: return "PPR";
    case RankKind::ppr_plus: return "PPR+";
  }
  return "?";
}

void StochasticMatrix::build_rows(
    const Graph& g, const std::vector<double>& strength,
    const std::unordered_map<std::uint64_t, double>* delta) {
  const std::int32_t n = g.vertex_count();
  n_ = n;
  off_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::int32_t i = 0; i < n; ++i)
    off_[static_cast<std::size_t>(i) + 1] =
        off_[static_cast<std::size_t>(i)] + g.degree(i);
  src_.resize(static_cast<std::size_t>(off_[static_cast<std::size_t>(n)]));
  val_.resize(src_.size());
  for (std::int32_t i = 0; i < n; ++i) {
    auto nbrs = g.neighbors(i);
    auto ws = g.weights(i);
    std::int64_t at = off_[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < nbrs.size(); ++k, ++at) {
      const std::int32_t j = nbrs[k];
      double w = ws[k];
      if (delta) {
        auto it = delta->find(EdgeAccumulator::key(i, j));
        if (it != delta->end()) w += it->second;
      }
      const double s = strength[static_cast<std::size_t>(j)];
      src_[static_cast<std::size_t>(at)] = j;
      val_[static_cast<std::size_t>(at)] = (w > 0 && s > 0) ? w / s : 0.0;
    }
  }
  dangling_.clear();
  for (std::int32_t v = 0; v < n; ++v)
    if (!(strength[static_cast<std::size_t>(v)] > 0)) dangling_.push_back(v);
}

StochasticMatrix StochasticMatrix::from_graph(const Graph& g) {
  StochasticMatrix m;
  std::vector<double> strength(static_cast<std::size_t>(g.vertex_count()));
  for (std::int32_t v = 0; v < g.vertex_count(); ++v)
    strength[static_cast<std::size_t>(v)] = g.strength(v);
  m.build_rows(g, strength, nullptr);
  return m;
}

StochasticMatrix StochasticMatrix::from_graph_with_deltas(
    const Graph& g, const std::unordered_map<std::uint64_t, double>& delta) {
  StochasticMatrix m;
  std::vector<double> strength(static_cast<std::size_t>(g.vertex_count()));
  for (std::int32_t v = 0; v < g.vertex_count(); ++v)
    strength[static_cast<std::size_t>(v)] = g.strength(v);
  for (const auto& [key, dw] : delta) {
    const std::int32_t u = static_cast<std::int32_t>(key >> 32);
    const std::int32_t v = static_cast<std::int32_t>(key & 0xffffffffULL);
    strength[static_cast<std::size_t>(u)] += dw;
    strength[static_cast<std::size_t>(v)] += dw;
  }
  for (auto& s : strength) {
    if (s < 0) {
      if (s < -1e-9) fail(Errc::state, "edge delta drove strength negative");
      s = 0;
    }
  }
  m.build_rows(g, strength, &delta);
  return m;
}

StochasticMatrix StochasticMatrix::from_rows(std::int32_t n,
                                             std::vector<std::int64_t> offsets,
                                             std::vector<std::int32_t> sources,
                                             std::vector<double> values,
                                             std::vector<std::int32_t> dangling) {
  StochasticMatrix m;
  m.n_ = n;
  m.off_ = std::move(offsets);
  m.src_ = std::move(sources);
  m.val_ = std::move(values);
  m.dangling_ = std::move(dangling);
  if (m.off_.size() != static_cast<std::size_t>(n) + 1 ||
      m.src_.size() != m.val_.size())
    fail(Errc::invalid_argument, "malformed CSR arrays");
  return m;
}

void StochasticMatrix::multiply(std::span<const double> x, std::span<double> y,
                                int threads) const {
  parallel_blocks(n_, 4096, threads,
                  [&](std::int64_t, std::int64_t lo, std::int64_t hi) {
                    for (std::int64_t i = lo; i < hi; ++i) {
                      double acc = 0;
                      for (std::int64_t k = off_[static_cast<std::size_t>(i)];
                           k < off_[static_cast<std::size_t>(i) + 1]; ++k)
                        acc += val_[static_cast<std::size_t>(k)] *
                               x[static_cast<std::size_t>(
                                   src_[static_cast<std::size_t>(k)])];
                      y[static_cast<std::size_t>(i)] = acc;
                    }
                  });
}

double StochasticMatrix::dangling_mass(std::span<const double> x) const {
  double m = 0;
  for (std::int32_t v : dangling_) m += x[static_cast<std::size_t>(v)];
  return m;
}

RankVector pagerank(const StochasticMatrix& m, std::span<const double> preference,
                    const PowerIterOptions& options) {
  const std::int32_t n = m.size();
  if (static_cast<std::int32_t>(preference.size()) != n)
    fail(Errc::invalid_argument, "preference vector size mismatch");
  if (!(options.alpha >= 0 && options.alpha < 1))
    fail(Errc::invalid_argument, "alpha must lie in [0, 1)");
  double psum = 0;
  for (double p : preference) {
    if (p < 0) fail(Errc::invalid_argument, "preference entries must be >= 0");
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-9)
    fail(Errc::invalid_argument, "preference vector must sum to 1");

  RankVector r;
  r.kind = RankKind::pagerank;
  r.alpha = options.alpha;
  r.scores.assign(preference.begin(), preference.end());
  if (options.alpha == 0) {
    r.iterations = 0;
    r.residual = 0;
    return r;
  }

  std::vector<double> next(static_cast<std::size_t>(n));
  const double stop = options.tol * (1.0 - options.alpha);
  for (std::int64_t iter = 1; iter <= options.max_iter; ++iter) {
    m.multiply(r.scores, next, options.threads);
    const double teleport =
        options.alpha * m.dangling_mass(r.scores) + (1.0 - options.alpha);
    double step = 0;
    for (std::int32_t i = 0; i < n; ++i) {
      const double v = options.alpha * next[static_cast<std::size_t>(i)] +
                       teleport * preference[static_cast<std::size_t>(i)];
      step += std::abs(v - r.scores[static_cast<std::size_t>(i)]);
      next[static_cast<std::size_t>(i)] = v;
    }
    r.scores.swap(next);
    r.iterations = iter;
    if (options.step_trace) options.step_trace->push_back(step);
    if (step <= stop) {
      // exact fixpoint residual of the returned vector
      m.multiply(r.scores, next, options.threads);
      const double tp =
          options.alpha * m.dangling_mass(r.scores) + (1.0 - options.alpha);
      double residual = 0;
      for (std::int32_t i = 0; i < n; ++i)
        residual += std::abs(options.alpha * next[static_cast<std::size_t>(i)] +
                             tp * preference[static_cast<std::size_t>(i)] -
                             r.scores[static_cast<std::size_t>(i)]);
      r.residual = residual;
      return r;
    }
  }
  fail(Errc::numeric,
       "power iteration did not converge within " +
           format_int(options.max_iter) + " iterations");
}

RankVector global_pagerank(const StochasticMatrix& m,
                           const PowerIterOptions& options) {
  std::vector<double> p(static_cast<std::size_t>(m.size()),
                        1.0 / static_cast<double>(m.size()));
  RankVector r = pagerank(m, p, options);
  r.kind = RankKind::pagerank;
  return r;
}

RankVector personalized_pagerank(const StochasticMatrix& m,
                                 std::span<const std::int32_t> query,
                                 const PowerIterOptions& options) {
  if (query.empty())
    fail(Errc::invalid_argument, "query set must not be empty");
  std::vector<std::int32_t> q(query.begin(), query.end());
  std::sort(q.begin(), q.end());
  q.erase(std::unique(q.begin(), q.end()), q.end());
  std::vector<double> p(static_cast<std::size_t>(m.size()), 0.0);
  const double mass = 1.0 / static_cast<double>(q.size());
  for (std::int32_t i : q) {
    if (i < 0 || i >= m.size())
      fail(Errc::invalid_argument, "query vertex out of range");
    p[static_cast<std::size_t>(i)] = mass;
  }
  RankVector r = pagerank(m, p, options);
  r.kind = RankKind::ppr;
  return r;
}

RankVector ppr_plus(const StochasticMatrix& m,
                    std::span<const std::int32_t> query,
                    const PowerIterOptions& options,
                    const RankVector* cached_global) {
  RankVector pref = personalized_pagerank(m, query, options);
  RankVector global;
  const RankVector* pr = cached_global;
  if (!pr) {
    global = global_pagerank(m, options);
    pr = &global;
  }
  RankVector r;
  r.kind = RankKind::ppr_plus;
  r.alpha = options.alpha;
  r.iterations = pref.iterations + (cached_global ? 0 : pr->iterations);
  r.residual = pref.residual + pr->residual;
  r.scores.resize(pref.scores.size());
  for (std::size_t i = 0; i < pref.scores.size(); ++i)
    r.scores[i] = pref.scores[i] - pr->scores[i];
  return r;
}

const RankVector& RankEngine::global(const PowerIterOptions& options) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = by_alpha_.find(options.alpha);
  if (it != by_alpha_.end()) return it->second;
  auto [pos, _] = by_alpha_.emplace(options.alpha, global_pagerank(m_, options));
  return pos->second;
}

}  // namespace ng
