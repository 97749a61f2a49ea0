#include "core/recommenders.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>

#include "core/common.hpp"
#include "core/parallel.hpp"

namespace ng {

void MaskedMatrix::hide(std::int32_t user, std::vector<std::int32_t> items) {
  if (items.empty()) return;
  for (std::int32_t i : items) ++hidden_per_item_[i];
  auto& slot = hidden_[user];
  if (slot.empty()) {
    slot = std::move(items);
  } else {
    slot.insert(slot.end(), items.begin(), items.end());
    std::sort(slot.begin(), slot.end());
  }
}

bool MaskedMatrix::is_hidden(std::int32_t u, std::int32_t i) const {
  if (hidden_.empty()) return false;
  auto it = hidden_.find(u);
  if (it == hidden_.end()) return false;
  return std::binary_search(it->second.begin(), it->second.end(), i);
}

std::vector<std::int32_t> MaskedMatrix::user_items(std::int32_t u) const {
  auto row = base_->user_items(u);
  auto it = hidden_.find(u);
  if (it == hidden_.end()) return {row.begin(), row.end()};
  std::vector<std::int32_t> out;
  out.reserve(row.size());
  std::set_difference(row.begin(), row.end(), it->second.begin(),
                      it->second.end(), std::back_inserter(out));
  return out;
}

std::int64_t MaskedMatrix::user_item_count(std::int32_t u) const {
  auto row = base_->user_items(u);
  if (hidden_.empty()) return static_cast<std::int64_t>(row.size());
  auto it = hidden_.find(u);
  if (it == hidden_.end()) return static_cast<std::int64_t>(row.size());
  std::int64_t hidden = 0;
  for (std::int32_t i : it->second)
    if (std::binary_search(row.begin(), row.end(), i)) ++hidden;
  return static_cast<std::int64_t>(row.size()) - hidden;
}

std::int64_t MaskedMatrix::item_user_count(std::int32_t i) const {
  std::int64_t c = static_cast<std::int64_t>(base_->item_users(i).size());
  if (!hidden_per_item_.empty()) {
    auto it = hidden_per_item_.find(i);
    if (it != hidden_per_item_.end()) c -= it->second;
  }
  return c;
}

// --- similarity ---------------------------------------------------------

namespace {

double xlogx(double k) { return k > 0 ? k * std::log(k) : 0.0; }

// Shannon entropy (unnormalized) of a vector of counts.
double entropy2(double a, double b) {
  return xlogx(a + b) - xlogx(a) - xlogx(b);
}
double entropy4(double a, double b, double c, double d) {
  return xlogx(a + b + c + d) - xlogx(a) - xlogx(b) - xlogx(c) - xlogx(d);
}

}  // namespace

double loglikelihood_ratio(std::int64_t k11, std::int64_t k12, std::int64_t k21,
                           std::int64_t k22) {
  const double a = static_cast<double>(k11), b = static_cast<double>(k12);
  const double c = static_cast<double>(k21), d = static_cast<double>(k22);
  const double row_entropy = entropy2(a + b, c + d);
  const double col_entropy = entropy2(a + c, b + d);
  const double mat_entropy = entropy4(a, b, c, d);
  const double llr = 2.0 * (row_entropy + col_entropy - mat_entropy);
  return llr > 0 ? llr : 0.0;  // clamp fp noise at independence
}

double llr_similarity(std::int64_t k11, std::int64_t k12, std::int64_t k21,
                      std::int64_t k22) {
  return 1.0 - 1.0 / (1.0 + loglikelihood_ratio(k11, k12, k21, k22));
}

namespace {

std::int64_t masked_intersection(const MaskedMatrix& r, std::int32_t u,
                                 std::int32_t v) {
  const auto a = r.base().user_items(u);
  const auto b = r.base().user_items(v);
  std::int64_t k = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else {
      if (!r.is_hidden(u, a[i]) && !r.is_hidden(v, a[i])) ++k;
      ++i;
      ++j;
    }
  }
  return k;
}

std::int64_t masked_item_intersection(const MaskedMatrix& r, std::int32_t i,
                                      std::int32_t j) {
  std::int64_t k = 0;
  auto a = r.base().item_users(i);
  auto b = r.base().item_users(j);
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] < b[y]) ++x;
    else if (a[x] > b[y]) ++y;
    else {
      if (!r.is_hidden(a[x], i) && !r.is_hidden(a[x], j)) ++k;
      ++x; ++y;
    }
  }
  return k;
}

}  // namespace

double user_similarity(const MaskedMatrix& r, std::int32_t u, std::int32_t v,
                       SimilarityKind kind) {
  const std::int64_t k11 = masked_intersection(r, u, v);
  if (k11 == 0) return 0.0;
  const std::int64_t mu = r.user_item_count(u);
  const std::int64_t mv = r.user_item_count(v);
  if (kind == SimilarityKind::cosine)
    return static_cast<double>(k11) /
           std::sqrt(static_cast<double>(mu) * static_cast<double>(mv));
  const std::int64_t total = r.name_count();
  return llr_similarity(k11, mu - k11, mv - k11, total - mu - mv + k11);
}

double item_similarity(const MaskedMatrix& r, std::int32_t i, std::int32_t j,
                       SimilarityKind kind) {
  const std::int64_t k11 = masked_item_intersection(r, i, j);
  if (k11 == 0) return 0.0;
  const std::int64_t ni = r.item_user_count(i);
  const std::int64_t nj = r.item_user_count(j);
  if (kind == SimilarityKind::cosine)
    return static_cast<double>(k11) /
           std::sqrt(static_cast<double>(ni) * static_cast<double>(nj));
  const std::int64_t total = r.user_count();
  return llr_similarity(k11, ni - k11, nj - k11, total - ni - nj + k11);
}

// --- ranking helper -------------------------------------------------------

RankedList build_ranking(std::int32_t name_count,
                         std::span<const std::int32_t> excluded_sorted,
                         std::span<const double> scores,
                         std::int64_t ranked_count) {
  RankedList out;
  out.order.reserve(static_cast<std::size_t>(name_count) - excluded_sorted.size());
  for (std::int32_t i = 0; i < name_count; ++i) {
    if (std::binary_search(excluded_sorted.begin(), excluded_sorted.end(), i))
      continue;
    out.order.push_back(i);
  }
  std::stable_sort(out.order.begin(), out.order.end(),
                   [&](std::int32_t a, std::int32_t b) {
                     const double sa = scores[static_cast<std::size_t>(a)];
                     const double sb = scores[static_cast<std::size_t>(b)];
                     if (sa != sb) return sa > sb;
                     return a < b;
                   });
  out.scores.resize(out.order.size());
  for (std::size_t k = 0; k < out.order.size(); ++k)
    out.scores[k] = scores[static_cast<std::size_t>(out.order[k])];
  out.ranked_count = ranked_count >= 0
                         ? ranked_count
                         : static_cast<std::int64_t>(out.order.size());
  return out;
}

namespace {

std::vector<std::int32_t> require_profile(const MaskedMatrix& r,
                                          std::int32_t user) {
  auto train = r.user_items(user);
  if (train.empty())
    fail(Errc::invalid_argument, "empty profile: user has no training names");
  return train;
}

}  // namespace

// --- UCF -------------------------------------------------------------------

RankedList ucf_scores(const MaskedMatrix& r, std::int32_t user,
                      SimilarityKind kind,
                      std::optional<std::int32_t> top_n) {
  const auto train = require_profile(r, user);
  // users sharing at least one visible name with `user`
  std::vector<std::int32_t> neighbors;
  {
    std::vector<char> seen(static_cast<std::size_t>(r.user_count()), 0);
    for (std::int32_t j : train) {
      r.for_item_users(j, [&](std::int32_t v) {
        if (v != user) seen[static_cast<std::size_t>(v)] = 1;
      });
    }
    for (std::int32_t v = 0; v < r.user_count(); ++v)
      if (seen[static_cast<std::size_t>(v)]) neighbors.push_back(v);
  }
  std::vector<std::pair<std::int32_t, double>> sims;
  sims.reserve(neighbors.size());
  for (std::int32_t v : neighbors) {
    const double s = user_similarity(r, user, v, kind);
    if (s > 0) sims.emplace_back(v, s);
  }
  if (top_n && *top_n >= 0 &&
      static_cast<std::size_t>(*top_n) < sims.size()) {
    std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    sims.resize(static_cast<std::size_t>(*top_n));
    std::sort(sims.begin(), sims.end());  // back to user-id order
  }
  std::vector<double> scores(static_cast<std::size_t>(r.name_count()), 0.0);
  for (const auto& [v, s] : sims) {
    r.for_user_items(
        v, [&](std::int32_t i) { scores[static_cast<std::size_t>(i)] += s; });
  }
  std::int64_t ranked = 0;
  for (std::int32_t i = 0; i < r.name_count(); ++i)
    if (scores[static_cast<std::size_t>(i)] > 0 &&
        !std::binary_search(train.begin(), train.end(), i))
      ++ranked;
  return build_ranking(r.name_count(), train, scores, ranked);
}

// --- ICF -------------------------------------------------------------------

RankedList icf_scores(const MaskedMatrix& r, std::int32_t user,
                      SimilarityKind kind) {
  const auto train = require_profile(r, user);
  const std::int32_t m = r.name_count();
  std::vector<double> numerator(static_cast<std::size_t>(m), 0.0);
  std::vector<std::int32_t> touched;
  std::vector<std::int32_t> co(static_cast<std::size_t>(m), 0);
  for (std::int32_t j : train) {
    // candidates overlapping j share at least one visible user
    std::fill(co.begin(), co.end(), 0);
    r.for_item_users(j, [&](std::int32_t v) {
      r.for_user_items(v, [&](std::int32_t i) { ++co[static_cast<std::size_t>(i)]; });
    });
    for (std::int32_t i = 0; i < m; ++i) {
      if (co[static_cast<std::size_t>(i)] == 0 || i == j) continue;
      const double s = item_similarity(r, i, j, kind);
      if (s <= 0) continue;
      if (numerator[static_cast<std::size_t>(i)] == 0) touched.push_back(i);
      numerator[static_cast<std::size_t>(i)] += s;
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  std::vector<double> scores(static_cast<std::size_t>(m), 0.0);
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  std::vector<std::int32_t> overlap;
  for (std::int32_t i : touched) {
    if (std::binary_search(train.begin(), train.end(), i)) continue;
    // denominator: similarities of i against every overlapping item (incl. i)
    overlap.clear();
    r.for_item_users(i, [&](std::int32_t v) {
      r.for_user_items(v, [&](std::int32_t jj) {
        if (!seen[static_cast<std::size_t>(jj)]) {
          seen[static_cast<std::size_t>(jj)] = 1;
          overlap.push_back(jj);
        }
      });
    });
    std::sort(overlap.begin(), overlap.end());
    double denom = 0;
    for (std::int32_t jj : overlap) {
      seen[static_cast<std::size_t>(jj)] = 0;
      denom += item_similarity(r, i, jj, kind);
    }
    if (denom > 0)
      scores[static_cast<std::size_t>(i)] =
          numerator[static_cast<std::size_t>(i)] / denom;
  }
  std::int64_t ranked = 0;
  for (std::int32_t i = 0; i < m; ++i)
    if (scores[static_cast<std::size_t>(i)] > 0) ++ranked;
  return build_ranking(m, train, scores, ranked);
}

// --- NameRank ----------------------------------------------------------------

RankedList namerank_scores(const StochasticMatrix& m, const RankEngine& engine,
                           std::span<const std::int32_t> train,
                           std::int32_t name_count,
                           const PowerIterOptions& options,
                           bool subtract_global) {
  if (train.empty())
    fail(Errc::invalid_argument, "empty profile: user has no training names");
  std::vector<std::int32_t> sorted_train(train.begin(), train.end());
  std::sort(sorted_train.begin(), sorted_train.end());
  RankVector w;
  if (subtract_global) {
    const RankVector& pr = engine.global(options);
    w = ppr_plus(m, sorted_train, options, &pr);
  } else {
    w = personalized_pagerank(m, sorted_train, options);
  }
  return build_ranking(name_count, sorted_train, w.scores);
}

// --- baselines ---------------------------------------------------------------

RankedList most_popular_scores(const MaskedMatrix& r,
                               std::span<const std::int32_t> train) {
  const std::int32_t m = r.name_count();
  std::vector<double> scores(static_cast<std::size_t>(m), 0.0);
  std::int64_t ranked = 0;
  for (std::int32_t i = 0; i < m; ++i) {
    scores[static_cast<std::size_t>(i)] =
        static_cast<double>(r.item_user_count(i));
    if (scores[static_cast<std::size_t>(i)] > 0 &&
        !std::binary_search(train.begin(), train.end(), i))
      ++ranked;
  }
  return build_ranking(m, train, scores, ranked);
}

RankedList random_scores(std::int32_t name_count,
                         std::span<const std::int32_t> train, Rng& rng) {
  std::vector<double> scores(static_cast<std::size_t>(name_count), 0.0);
  for (auto& s : scores) s = rng.next_double();
  return build_ranking(name_count, train, scores);
}

// --- WRMF ---------------------------------------------------------------------

double FactorModel::score(std::int32_t u, std::int32_t i) const {
  const double* x = user_factors.data() +
                    static_cast<std::size_t>(u) * static_cast<std::size_t>(dimensions);
  const double* y = item_factors.data() +
                    static_cast<std::size_t>(i) * static_cast<std::size_t>(dimensions);
  double s = 0;
  for (std::int32_t k = 0; k < dimensions; ++k) s += x[k] * y[k];
  return s;
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// one half-sweep: solve factors of `solve_for` given `fixed`
void als_half_sweep(std::vector<double>& solve_for, std::int32_t n_rows,
                    const std::vector<double>& fixed, std::int32_t n_fixed,
                    std::int32_t d, double lambda, double alpha_c,
                    const std::function<void(std::int32_t, std::vector<std::int32_t>&)>& row_items,
                    int threads) {
  Mat gram = Mat::Zero(d, d);
  for (std::int32_t i = 0; i < n_fixed; ++i) {
    Eigen::Map<const Vec> y(fixed.data() + static_cast<std::size_t>(i) * d, d);
    gram.noalias() += y * y.transpose();
  }
  gram.diagonal().array() += lambda;

  parallel_blocks(n_rows, 64, threads, [&](std::int64_t, std::int64_t lo,
                                           std::int64_t hi) {
    std::vector<std::int32_t> items;
    Mat a(d, d);
    Vec b(d);
    for (std::int64_t u = lo; u < hi; ++u) {
      items.clear();
      row_items(static_cast<std::int32_t>(u), items);
      a = gram;
      b.setZero();
      for (std::int32_t i : items) {
        Eigen::Map<const Vec> y(fixed.data() + static_cast<std::size_t>(i) * d, d);
        a.noalias() += alpha_c * (y * y.transpose());
        b.noalias() += (1.0 + alpha_c) * y;
      }
      const Vec x = a.ldlt().solve(b);
      Eigen::Map<Vec>(solve_for.data() + static_cast<std::size_t>(u) * d, d) = x;
    }
  });
}

}  // namespace

FactorModel wrmf_train(const MaskedMatrix& r, const WrmfOptions& options) {
  if (options.lambda <= 0)
    fail(Errc::invalid_argument, "wrmf lambda must be > 0");
  if (options.dimensions < 1 ||
      options.dimensions > std::min(r.user_count(), r.name_count()))
    fail(Errc::invalid_argument, "wrmf dimension out of range");
  if (options.iterations < 1)
    fail(Errc::invalid_argument, "wrmf needs at least one sweep");

  FactorModel model;
  model.users = r.user_count();
  model.items = r.name_count();
  model.dimensions = options.dimensions;
  const std::int32_t d = options.dimensions;
  model.user_factors.assign(static_cast<std::size_t>(model.users) * d, 0.0);
  model.item_factors.resize(static_cast<std::size_t>(model.items) * d);
  Rng rng = Rng::derive(options.seed, 0x3fb7);
  for (auto& v : model.item_factors) v = rng.next_double(-0.01, 0.01);

  auto user_row = [&](std::int32_t u, std::vector<std::int32_t>& out) {
    auto items = r.user_items(u);
    out.assign(items.begin(), items.end());
  };
  auto item_row = [&](std::int32_t i, std::vector<std::int32_t>& out) {
    out.clear();
    r.for_item_users(i, [&](std::int32_t v) { out.push_back(v); });
  };

  for (std::int32_t sweep = 0; sweep < options.iterations; ++sweep) {
    als_half_sweep(model.user_factors, model.users, model.item_factors,
                   model.items, d, options.lambda, options.alpha_c, user_row,
                   options.threads);
    als_half_sweep(model.item_factors, model.items, model.user_factors,
                   model.users, d, options.lambda, options.alpha_c, item_row,
                   options.threads);
  }
  return model;
}

double wrmf_loss(const MaskedMatrix& r, const FactorModel& model,
                 double alpha_c, double lambda) {
  const std::int32_t d = model.dimensions;
  Eigen::Map<const Mat> x(model.user_factors.data(), d, model.users);
  Eigen::Map<const Mat> y(model.item_factors.data(), d, model.items);
  const Mat xtx = x * x.transpose();  // d x d
  const Mat yty = y * y.transpose();
  // sum over all cells of s^2 = tr(XtX * YtY)
  double loss = (xtx.array() * yty.array()).sum();
  for (std::int32_t u = 0; u < model.users; ++u) {
    for (std::int32_t i : r.user_items(u)) {
      const double s = model.score(u, i);
      loss += -s * s + (1.0 + alpha_c) * (1.0 - s) * (1.0 - s);
    }
  }
  loss += lambda * (x.squaredNorm() + y.squaredNorm());
  return loss;
}

RankedList wrmf_scores(const FactorModel& model, std::int32_t user,
                       std::span<const std::int32_t> train) {
  std::vector<double> scores(static_cast<std::size_t>(model.items));
  for (std::int32_t i = 0; i < model.items; ++i)
    scores[static_cast<std::size_t>(i)] = model.score(user, i);
  std::vector<std::int32_t> sorted_train(train.begin(), train.end());
  std::sort(sorted_train.begin(), sorted_train.end());
  return build_ranking(model.items, sorted_train, scores);
}

// --- facade ---------------------------------------------------------------

Model parse_model(std::string_view token) {
  if (token == "ucf") return Model::ucf;
  if (token == "icf") return Model::icf;
  if (token == "ppr") return Model::ppr;
  if (token == "ppr+" || token == "namerank") return Model::ppr_plus;
  if (token == "wrmf") return Model::wrmf;
  if (token == "mp" || token == "most-popular") return Model::most_popular;
  if (token == "random") return Model::random;
  fail(Errc::invalid_argument, "unknown model: '" + std::string(token) + "'");
}

const char* model_name(Model m) {
  switch (m) {
    case Model::ucf: return "ucf";
    case Model::icf: return "icf";
    case Model::ppr: return "ppr";
    case Model::ppr_plus: return "ppr+";
    case Model::wrmf: return "wrmf";
    case Model::most_popular: return "mp";
    case Model::random: return "random";
  }
  return "?";
}

Recommender::Recommender(const ActivityLog& log, RecommenderOptions options)
    : log_(log), options_(options), matrix_(log.matrix(options.activity)) {
  if (options_.model == Model::ppr || options_.model == Model::ppr_plus) {
    projection_ = std::make_unique<Graph>(
        build_projection(log, options_.activity, options_.threads));
    stochastic_ = std::make_unique<StochasticMatrix>(
        StochasticMatrix::from_graph(*projection_));
    engine_ = std::make_unique<RankEngine>(*stochastic_);
  } else if (options_.model == Model::wrmf) {
    WrmfOptions w = options_.wrmf;
    w.seed = options_.seed;
    w.threads = options_.threads;
    factors_ = std::make_unique<FactorModel>(wrmf_train(matrix_, w));
  }
}

RankedList Recommender::score_user(std::int32_t user) const {
  const auto train = matrix_.user_items(user);
  PowerIterOptions pi{options_.alpha, options_.tol, options_.max_iter,
                      options_.threads, nullptr};
  switch (options_.model) {
    case Model::ucf:
      return ucf_scores(matrix_, user, options_.similarity,
                        options_.ucf_neighbors);
    case Model::icf:
      return icf_scores(matrix_, user, options_.similarity);
    case Model::ppr:
      return namerank_scores(*stochastic_, *engine_, train,
                             matrix_.name_count(), pi, false);
    case Model::ppr_plus:
      return namerank_scores(*stochastic_, *engine_, train,
                             matrix_.name_count(), pi, true);
    case Model::wrmf:
      return wrmf_scores(*factors_, user, train);
    case Model::most_popular: {
      std::vector<std::int32_t> sorted_train(train.begin(), train.end());
      return most_popular_scores(matrix_, sorted_train);
    }
    case Model::random: {
      Rng rng = Rng::derive(options_.seed, 0x9d2c,
                            static_cast<std::uint64_t>(user));
      std::vector<std::int32_t> sorted_train(train.begin(), train.end());
      return random_scores(matrix_.name_count(), sorted_train, rng);
    }
  }
  fail(Errc::state, "unreachable");
}

}  // namespace ng
