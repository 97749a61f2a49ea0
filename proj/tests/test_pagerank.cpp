#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "core/common.hpp"
#include "core/pagerank.hpp"
#include "oracles.hpp"

using namespace ng;

namespace {

double l1_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace

TEST_CASE("a symmetric two-vertex edge splits rank evenly") {
  Graph g = oracle::make_graph(2, {{0, 1, 1}});
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  for (double alpha : {0.0, 0.5, 0.85, 0.99}) {
    PowerIterOptions opt;
    opt.alpha = alpha;
    RankVector r = global_pagerank(m, opt);
    CHECK(r.scores[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(r.scores[1] == doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("alpha = 0 returns the preference vector exactly") {
  Graph g = oracle::random_graph(4, 10, 0.3);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  std::vector<double> p(10, 0.0);
  p[3] = 0.25;
  p[7] = 0.75;
  PowerIterOptions opt;
  opt.alpha = 0.0;
  RankVector r = pagerank(m, p, opt);
  CHECK(r.scores == p);
  CHECK(r.iterations == 0);
}

TEST_CASE("three-vertex path reproduces the closed-form fixpoint") {
  Graph g = oracle::make_graph(3, {{0, 1, 1}, {1, 2, 1}});
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  PowerIterOptions opt;  // alpha = 0.85
  RankVector r = global_pagerank(m, opt);
  CHECK(r.scores[0] == doctest::Approx(0.25676).epsilon(1e-4));
  CHECK(r.scores[1] == doctest::Approx(0.48649).epsilon(1e-4));
  CHECK(r.scores[2] == doctest::Approx(0.25676).epsilon(1e-4));
}

TEST_CASE("ppr on a two-vertex edge solves the 2x2 system") {
  Graph g = oracle::make_graph(2, {{0, 1, 1}});
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  std::vector<std::int32_t> query{0};
  PowerIterOptions opt;
  RankVector r = personalized_pagerank(m, query, opt);
  CHECK(r.scores[0] == doctest::Approx(0.15 / 0.2775).epsilon(1e-9));
  CHECK(r.scores[1] == doctest::Approx(0.85 * 0.15 / 0.2775).epsilon(1e-9));
}

TEST_CASE("ppr with alpha 0 is the query indicator") {
  Graph g = oracle::random_graph(9, 8, 0.4);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  std::vector<std::int32_t> query{2};
  PowerIterOptions opt;
  opt.alpha = 0;
  RankVector r = personalized_pagerank(m, query, opt);
  CHECK(r.scores[2] == 1.0);
}

TEST_CASE("ppr over the full vertex set equals global pagerank") {
  Graph g = oracle::random_graph(10, 12, 0.3);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  std::vector<std::int32_t> all(12);
  std::iota(all.begin(), all.end(), 0);
  PowerIterOptions opt;
  RankVector ppr_all = personalized_pagerank(m, all, opt);
  RankVector pr = global_pagerank(m, opt);
  CHECK(l1_diff(ppr_all.scores, pr.scores) == 0.0);  // identical runs
}

TEST_CASE("empty query set is rejected") {
  Graph g = oracle::make_graph(2, {{0, 1, 1}});
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  PowerIterOptions opt;
  CHECK_THROWS_AS(personalized_pagerank(m, {}, opt), Error);
}

TEST_CASE("invalid preference vectors are rejected") {
  Graph g = oracle::make_graph(2, {{0, 1, 1}});
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  PowerIterOptions opt;
  std::vector<double> negative{1.5, -0.5};
  CHECK_THROWS_AS(pagerank(m, negative, opt), Error);
  std::vector<double> not_normalized{0.3, 0.3};
  CHECK_THROWS_AS(pagerank(m, not_normalized, opt), Error);
  opt.alpha = 1.0;
  std::vector<double> uniform{0.5, 0.5};
  CHECK_THROWS_AS(pagerank(m, uniform, opt), Error);
}

TEST_CASE("non-convergence carries the residual in the error") {
  Graph g = oracle::random_graph(2, 50, 0.2);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  PowerIterOptions opt;
  opt.max_iter = 1;
  CHECK_THROWS_AS(global_pagerank(m, opt), Error);
}

TEST_CASE("power iteration matches the dense linear-solve oracle") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 5 + static_cast<int>(seed * 7 % 60);
    Graph g = oracle::random_graph(seed, n, 0.15);
    StochasticMatrix m = StochasticMatrix::from_graph(g);
    PowerIterOptions opt;
    RankVector got = global_pagerank(m, opt);
    Eigen::VectorXd pref = Eigen::VectorXd::Constant(n, 1.0 / n);
    Eigen::VectorXd expected = oracle::pagerank_solve(g, pref, opt.alpha);
    double diff = 0;
    for (int i = 0; i < n; ++i)
      diff += std::abs(got.scores[static_cast<std::size_t>(i)] - expected(i));
    CHECK(diff <= 1e-8);
    CHECK(got.residual <= opt.tol);
  }
}

TEST_CASE("every PR/PPR output is a probability vector") {
  for (std::uint64_t seed = 40; seed < 45; ++seed) {
    Graph g = oracle::random_graph(seed, 30, 0.1);
    StochasticMatrix m = StochasticMatrix::from_graph(g);
    PowerIterOptions opt;
    RankVector pr = global_pagerank(m, opt);
    std::vector<std::int32_t> query{1, 5, 9};
    RankVector pp = personalized_pagerank(m, query, opt);
    for (const RankVector* r : {&pr, &pp}) {
      double sum = 0;
      for (double v : r->scores) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("ppr_plus entries sum to zero and vanish for the full query") {
  for (std::uint64_t seed = 60; seed < 65; ++seed) {
    Graph g = oracle::random_graph(seed, 25, 0.15);
    StochasticMatrix m = StochasticMatrix::from_graph(g);
    PowerIterOptions opt;
    std::vector<std::int32_t> all(25);
    std::iota(all.begin(), all.end(), 0);
    RankVector full = ppr_plus(m, all, opt);
    for (double v : full.scores) CHECK(std::abs(v) <= 2 * opt.tol);

    std::vector<std::int32_t> some{0, 3};
    RankVector r = ppr_plus(m, some, opt);
    double sum = 0;
    for (double v : r.scores) sum += v;
    CHECK(std::abs(sum) <= 1e-9);
  }
}

TEST_CASE("ppr_plus peaks at the seed of a vertex-transitive cycle") {
  std::vector<oracle::Edge> ring;
  for (int i = 0; i < 5; ++i) ring.push_back({i, (i + 1) % 5, 1.0});
  Graph g = oracle::make_graph(5, ring);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  PowerIterOptions opt;
  std::vector<std::int32_t> query{2};
  RankVector r = ppr_plus(m, query, opt);
  for (int i = 0; i < 5; ++i)
    if (i != 2) CHECK(r.scores[2] > r.scores[static_cast<std::size_t>(i)]);

  // brute-force check against the dense fixpoint difference
  Eigen::VectorXd uniform = Eigen::VectorXd::Constant(5, 0.2);
  Eigen::VectorXd indicator = Eigen::VectorXd::Zero(5);
  indicator(2) = 1.0;
  Eigen::VectorXd expected = oracle::pagerank_solve(g, indicator, 0.85) -
                             oracle::pagerank_solve(g, uniform, 0.85);
  for (int i = 0; i < 5; ++i)
    CHECK(r.scores[static_cast<std::size_t>(i)] ==
          doctest::Approx(expected(i)).epsilon(1e-8));
}

TEST_CASE("ppr is linear: query PPR equals the mean of single-seed PPRs") {
  for (std::uint64_t seed = 70; seed < 75; ++seed) {
    Graph g = oracle::random_graph(seed, 20, 0.2);
    StochasticMatrix m = StochasticMatrix::from_graph(g);
    PowerIterOptions opt;
    std::vector<std::int32_t> query{1, 4, 7, 13};
    RankVector joint = personalized_pagerank(m, query, opt);
    std::vector<double> mean(20, 0.0);
    for (std::int32_t q : query) {
      std::vector<std::int32_t> single{q};
      RankVector r = personalized_pagerank(m, single, opt);
      for (std::size_t i = 0; i < mean.size(); ++i)
        mean[i] += r.scores[i] / static_cast<double>(query.size());
    }
    CHECK(l1_diff(joint.scores, mean) <= 2 * opt.tol);
  }
}

TEST_CASE("the averaging law holds for ppr_plus as well") {
  Graph g = oracle::random_graph(81, 15, 0.3);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  RankEngine engine(m);
  PowerIterOptions opt;
  std::vector<std::int32_t> query{0, 2, 9};
  RankVector joint = ppr_plus(m, query, opt, &engine.global(opt));
  std::vector<double> mean(15, 0.0);
  for (std::int32_t q : query) {
    std::vector<std::int32_t> single{q};
    RankVector r = ppr_plus(m, single, opt, &engine.global(opt));
    for (std::size_t i = 0; i < mean.size(); ++i)
      mean[i] += r.scores[i] / static_cast<double>(query.size());
  }
  CHECK(l1_diff(joint.scores, mean) <= 2 * opt.tol);
}

TEST_CASE("per-iteration l1 steps are non-increasing") {
  Graph g = oracle::random_graph(91, 40, 0.1);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  std::vector<double> steps;
  PowerIterOptions opt;
  opt.step_trace = &steps;
  global_pagerank(m, opt);
  REQUIRE(steps.size() > 3);
  for (std::size_t i = 1; i < steps.size(); ++i)
    CHECK(steps[i] <= steps[i - 1] * (1.0 + 1e-9) + 1e-30);
}

TEST_CASE("dangling vertices keep the chain stochastic") {
  // vertex 3 is isolated: its mass must flow back through the preference
  Graph g = oracle::make_graph(4, {{0, 1, 2}, {1, 2, 1}});
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  CHECK(m.dangling().size() == 1);
  PowerIterOptions opt;
  RankVector pr = global_pagerank(m, opt);
  double sum = 0;
  for (double v : pr.scores) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pr.scores[3] > 0);  // teleport keeps it reachable

  std::vector<std::int32_t> q{3};
  RankVector pp = personalized_pagerank(m, q, opt);
  sum = 0;
  for (double v : pp.scores) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("results are bit-identical across worker counts") {
  Graph g = oracle::random_graph(101, 500, 0.02);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  PowerIterOptions opt1, opt4;
  opt1.threads = 1;
  opt4.threads = 4;
  RankVector r1 = global_pagerank(m, opt1);
  RankVector r4 = global_pagerank(m, opt4);
  CHECK(r1.scores == r4.scores);
}

TEST_CASE("the rank engine caches one global vector per alpha") {
  Graph g = oracle::random_graph(111, 20, 0.2);
  StochasticMatrix m = StochasticMatrix::from_graph(g);
  RankEngine engine(m);
  PowerIterOptions opt;
  const RankVector& a = engine.global(opt);
  const RankVector& b = engine.global(opt);
  CHECK(&a == &b);
  opt.alpha = 0.5;
  const RankVector& c = engine.global(opt);
  CHECK(&a != &c);
}

TEST_CASE("masking deltas reproduce a freshly built matrix") {
  Graph g = oracle::make_graph(4, {{0, 1, 3}, {1, 2, 2}, {2, 3, 1}});
  std::unordered_map<std::uint64_t, double> delta;
  delta[EdgeAccumulator::key(1, 2)] = -2.0;  // removes the edge entirely
  delta[EdgeAccumulator::key(0, 1)] = -1.0;
  StochasticMatrix patched = StochasticMatrix::from_graph_with_deltas(g, delta);
  Graph fresh = oracle::make_graph(4, {{0, 1, 2}, {2, 3, 1}});
  StochasticMatrix expected = StochasticMatrix::from_graph(fresh);
  PowerIterOptions opt;
  RankVector rp = global_pagerank(patched, opt);
  RankVector re = global_pagerank(expected, opt);
  for (std::size_t i = 0; i < rp.scores.size(); ++i)
    CHECK(rp.scores[i] == doctest::Approx(re.scores[i]).epsilon(1e-12));
}
