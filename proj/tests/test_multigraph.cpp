#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>

#include "core/common.hpp"
#include "core/metrics.hpp"
#include "core/multigraph.hpp"
#include "core/table.hpp"
#include "oracles.hpp"

using namespace ng;
using Eigen::MatrixXd;

namespace {

GraphStack stack_of(std::vector<Graph> layers) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < layers.size(); ++i)
    names.push_back("layer" + std::to_string(i));
  return GraphStack::from_graphs(std::move(names), std::move(layers));
}

// column sums of a combined matrix via multiplication with basis vectors is
// wasteful; instead multiply the all-ones vector by the transpose trick:
// sum_j A[i,j] per column needs the raw arrays, so we recompute sums through
// y = A^T 1 by probing columns with unit mass.
std::vector<double> column_sums(const CombinedMatrix& combined) {
  const std::int64_t total = combined.matrix.size();
  std::vector<double> x(static_cast<std::size_t>(total), 0.0);
  std::vector<double> y(static_cast<std::size_t>(total), 0.0);
  std::vector<double> sums(static_cast<std::size_t>(total), 0.0);
  // A * e_j yields column j; summing it gives the column sum. Do it in one
  // pass: A * 1_S for batches would mix columns, so probe one at a time
  // (matrices in these tests are small).
  for (std::int64_t j = 0; j < total; ++j) {
    x.assign(static_cast<std::size_t>(total), 0.0);
    x[static_cast<std::size_t>(j)] = 1.0;
    combined.matrix.multiply(x, y, 1);
    double s = 0;
    for (double v : y) s += v;
    sums[static_cast<std::size_t>(j)] = s;
  }
  return sums;
}

bool is_dangling(const CombinedMatrix& combined, std::int64_t column) {
  for (std::int32_t d : combined.matrix.dangling())
    if (d == column) return true;
  return false;
}

std::vector<std::int32_t> argsort_desc(const std::vector<double>& scores) {
  std::vector<std::int32_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    if (scores[static_cast<std::size_t>(a)] != scores[static_cast<std::size_t>(b)])
      return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
    return a < b;
  });
  return order;
}

}  // namespace

TEST_CASE("eta helpers build doubly stochastic matrices") {
  EtaMatrix eta = EtaMatrix::mix(3, 0.6);
  eta.require_doubly_stochastic();
  CHECK(eta.at(0, 0) == doctest::Approx(0.6));
  CHECK(eta.at(0, 1) == doctest::Approx(0.2));
  EtaMatrix bad = EtaMatrix::mix(2, 0.6);
  bad.values[0] = 0.7;
  CHECK_THROWS_AS(bad.require_doubly_stochastic(), Error);
  EtaMatrix vec = EtaMatrix::vector_mix(4, 0.7);
  CHECK(vec.rows == 1);
  double sum = 0;
  for (double v : vec.values) sum += v;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("eta csv parsing") {
  EtaMatrix eta = EtaMatrix::parse_csv("0.5,0.5\n0.5,0.5\n", "inline");
  CHECK(eta.rows == 2);
  CHECK(eta.cols == 2);
  CHECK_THROWS_AS(EtaMatrix::parse_csv("0.5,0.5\n0.5\n", "inline"), Error);
  CHECK_THROWS_AS(EtaMatrix::parse_csv("", "inline"), Error);
}

TEST_CASE("averank with a single layer is plain ppr_plus") {
  Graph g = oracle::random_graph(17, 9, 0.35);
  GraphStack stack = stack_of({g});
  MultigraphOptions opt;
  std::vector<double> eta{1.0};
  std::vector<std::int32_t> query{stack.names->id_of("v2")};
  RankVector got = averank(stack, eta, query, opt);

  StochasticMatrix m = StochasticMatrix::from_graph(stack.layers[0]);
  RankVector expected = ppr_plus(m, query, opt.power);
  for (std::size_t i = 0; i < got.scores.size(); ++i)
    CHECK(got.scores[i] == doctest::Approx(expected.scores[i]).epsilon(1e-12));
}

TEST_CASE("averank ignores layers with zero weight") {
  Graph g1 = oracle::random_graph(18, 8, 0.4);
  Graph g2 = oracle::random_graph(19, 8, 0.4);
  GraphStack stack = stack_of({g1, g2});
  MultigraphOptions opt;
  std::vector<std::int32_t> query{0, 1};
  std::vector<double> only_first{1.0, 0.0};
  RankVector got = averank(stack, only_first, query, opt);

  GraphStack alone = stack_of({g1});
  // map ids between the two stacks via names
  std::vector<double> eta1{1.0};
  std::vector<std::int32_t> q1;
  for (std::int32_t q : query)
    q1.push_back(alone.names->id_of(stack.names->name(q)));
  RankVector expected = averank(alone, eta1, q1, opt);
  for (std::int32_t i = 0; i < stack.names->size(); ++i) {
    const std::int32_t j = alone.names->id_of(stack.names->name(i));
    if (j < 0) continue;
    CHECK(got.scores[static_cast<std::size_t>(i)] ==
          doctest::Approx(expected.scores[static_cast<std::size_t>(j)])
              .epsilon(1e-12));
  }
}

TEST_CASE("averank of two identical layers equals the single layer") {
  Graph g = oracle::random_graph(23, 10, 0.3);
  GraphStack twice = stack_of({g, g});
  GraphStack once = stack_of({g});
  MultigraphOptions opt;
  std::vector<std::int32_t> query{1, 3};
  RankVector two = averank(twice, std::vector<double>{0.5, 0.5}, query, opt);
  RankVector one = averank(once, std::vector<double>{1.0}, query, opt);
  for (std::size_t i = 0; i < two.scores.size(); ++i)
    CHECK(two.scores[i] == doctest::Approx(one.scores[i]).epsilon(1e-12));
}

TEST_CASE("averank flags layers disjoint from the query") {
  Graph g1 = oracle::make_graph(3, {{0, 1, 1}});
  Graph g2 = oracle::make_graph(3, {{1, 2, 1}});
  GraphStack stack = stack_of({g1, g2});
  MultigraphOptions opt;
  // query v2 exists only in layer1's edge set
  std::vector<std::int32_t> query{stack.names->id_of("v2")};
  RankVector r = averank(stack, std::vector<double>{0.5, 0.5}, query, opt);
  CHECK(r.note.find("layer0") != std::string::npos);
}

TEST_CASE("averank is linear in eta") {
  Graph g1 = oracle::random_graph(41, 9, 0.4);
  Graph g2 = oracle::random_graph(42, 9, 0.4);
  GraphStack stack = stack_of({g1, g2});
  MultigraphOptions opt;
  std::vector<std::int32_t> query{0, 2};
  std::vector<double> eta_a{1.0, 0.0}, eta_b{0.0, 1.0}, eta_mix{0.3, 0.7};
  RankVector ra = averank(stack, eta_a, query, opt);
  RankVector rb = averank(stack, eta_b, query, opt);
  RankVector rm = averank(stack, eta_mix, query, opt);
  for (std::size_t i = 0; i < rm.scores.size(); ++i)
    CHECK(rm.scores[i] ==
          doctest::Approx(0.3 * ra.scores[i] + 0.7 * rb.scores[i])
              .epsilon(1e-9));
}

TEST_CASE("combined matrices are column stochastic") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::vector<Graph> layers;
    const int L = seed % 2 == 0 ? 2 : 3;
    for (int l = 0; l < L; ++l)
      layers.push_back(oracle::random_graph(100 + seed * 3 + l, 7, 0.35));
    GraphStack stack = stack_of(std::move(layers));
    EtaMatrix eta = EtaMatrix::mix(L, 0.7);
    for (bool parallel : {false, true}) {
      CombinedMatrix combined =
          parallel ? build_parallel_multigraph(stack, eta)
                   : build_conditional_multigraph(stack, eta);
      auto sums = column_sums(combined);
      for (std::int64_t j = 0; j < combined.matrix.size(); ++j) {
        if (is_dangling(combined, j)) {
          CHECK(sums[static_cast<std::size_t>(j)] == 0.0);
        } else {
          CHECK(std::abs(sums[static_cast<std::size_t>(j)] - 1.0) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("multirank and prank reduce to single-graph ppr_plus at L = 1") {
  Graph g = oracle::random_graph(55, 11, 0.3);
  GraphStack stack = stack_of({g});
  EtaMatrix eta = EtaMatrix::mix(1, 1.0);
  MultigraphOptions opt;
  std::vector<std::int32_t> query{2, 5};

  StochasticMatrix plain = StochasticMatrix::from_graph(stack.layers[0]);
  RankVector expected = ppr_plus(plain, query, opt.power);

  for (auto method : {MultigraphMethod::multirank, MultigraphMethod::prank}) {
    RankVector got = multigraph_rank(stack, method, eta, query, opt);
    CHECK(argsort_desc(got.scores) == argsort_desc(expected.scores));
    for (std::size_t i = 0; i < got.scores.size(); ++i)
      CHECK(got.scores[i] == doctest::Approx(expected.scores[i]).epsilon(1e-12));
  }
}

TEST_CASE("two-layer fixture matches the dense block oracle") {
  // layer 0: path v0-v1-v2 with weights; layer 1: triangle
  Graph l0 = oracle::make_graph(3, {{0, 1, 2}, {1, 2, 1}});
  Graph l1 = oracle::make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  GraphStack stack = stack_of({l0, l1});
  EtaMatrix eta = EtaMatrix::mix(2, 0.8);

  for (bool parallel : {false, true}) {
    CombinedMatrix combined = parallel
                                  ? build_parallel_multigraph(stack, eta)
                                  : build_conditional_multigraph(stack, eta);
    // dense oracle, built independently from the documented rule
    const int n = 3, L = 2;
    MatrixXd adj[2] = {oracle::dense_adjacency(stack.layers[0]),
                       oracle::dense_adjacency(stack.layers[1])};
    MatrixXd dense = MatrixXd::Zero(n * L, n * L);
    for (int lr = 0; lr < L; ++lr)
      for (int lc = 0; lc < L; ++lc)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double w = 0;
            if (parallel && lr != lc) {
              w = i == j ? 1.0 : 0.0;
            } else {
              w = adj[lr](i, j) > 0 ? (lr == lc ? adj[lr](i, j) : 1.0) : 0.0;
            }
            dense(lr * n + i, lc * n + j) = w;
          }
    // block-column normalization to eta with availability renormalization
    for (int lc = 0; lc < L; ++lc)
      for (int j = 0; j < n; ++j) {
        double avail = 0;
        for (int lr = 0; lr < L; ++lr)
          if (dense.block(lr * n, lc * n + j, n, 1).sum() > 0)
            avail += eta.at(lr, lc);
        for (int lr = 0; lr < L; ++lr) {
          const double block_sum = dense.block(lr * n, lc * n + j, n, 1).sum();
          if (block_sum > 0 && avail > 0)
            dense.block(lr * n, lc * n + j, n, 1) *=
                (eta.at(lr, lc) / avail) / block_sum;
        }
      }

    // entrywise comparison via probing
    const std::int64_t total = combined.matrix.size();
    std::vector<double> x(static_cast<std::size_t>(total), 0.0);
    std::vector<double> y(static_cast<std::size_t>(total), 0.0);
    for (std::int64_t j = 0; j < total; ++j) {
      x.assign(static_cast<std::size_t>(total), 0.0);
      x[static_cast<std::size_t>(j)] = 1.0;
      combined.matrix.multiply(x, y, 1);
      for (std::int64_t i = 0; i < total; ++i)
        CHECK(y[static_cast<std::size_t>(i)] ==
              doctest::Approx(dense(i, j)).epsilon(1e-12));
    }

    // layered PPR+ against dense power iteration on the block matrix
    std::vector<std::int32_t> query{0};
    PowerIterOptions popt;
    RankVector got = layered_ppr_plus(combined, query, popt);
    auto dense_power = [&](const Eigen::VectorXd& pref) {
      Eigen::VectorXd w = pref;
      for (int it = 0; it < 2000; ++it) {
        Eigen::VectorXd next = 0.85 * dense * w;
        double dangling = 0;
        for (std::int32_t d : combined.matrix.dangling())
          dangling += w(static_cast<int>(d));
        next += (0.85 * dangling + 0.15) * pref;
        if ((next - w).cwiseAbs().sum() < 1e-13) {
          w = next;
          break;
        }
        w = next;
      }
      return w;
    };
    Eigen::VectorXd pref = Eigen::VectorXd::Zero(n * L);
    pref(0) = 0.5;
    pref(n) = 0.5;  // both copies of v0
    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n * L, 1.0 / (n * L));
    Eigen::VectorXd diff = dense_power(pref) - dense_power(uniform);
    for (int v = 0; v < n; ++v) {
      const double expected = diff(v) + diff(n + v);
      CHECK(got.scores[static_cast<std::size_t>(v)] ==
            doctest::Approx(expected).epsilon(1e-8));
    }
  }
}

TEST_CASE("layered ppr_plus conserves zero sum over name copies") {
  std::vector<Graph> layers{oracle::random_graph(61, 6, 0.5),
                            oracle::random_graph(62, 6, 0.5)};
  GraphStack stack = stack_of(std::move(layers));
  EtaMatrix eta = EtaMatrix::mix(2, 0.6);
  CombinedMatrix combined = build_conditional_multigraph(stack, eta);
  PowerIterOptions opt;
  std::vector<std::int32_t> query{1};
  RankVector r = layered_ppr_plus(combined, query, opt);
  double sum = 0;
  for (double v : r.scores) sum += v;
  CHECK(std::abs(sum) <= 2 * opt.tol);
}

TEST_CASE("multigraph builders validate eta") {
  GraphStack stack = stack_of({oracle::random_graph(71, 5, 0.5),
                               oracle::random_graph(72, 5, 0.5)});
  EtaMatrix eta = EtaMatrix::mix(2, 0.5);
  eta.values[0] = 0.9;  // breaks double stochasticity
  CHECK_THROWS_AS(build_conditional_multigraph(stack, eta), Error);
  EtaMatrix wrong_size = EtaMatrix::mix(3, 0.5);
  CHECK_THROWS_AS(build_parallel_multigraph(stack, wrong_size), Error);
}

TEST_CASE("names absent from every layer give dangling copies") {
  // vertex v3 isolated in both layers
  Graph l0 = oracle::make_graph(4, {{0, 1, 1}});
  Graph l1 = oracle::make_graph(4, {{1, 2, 1}});
  GraphStack stack = stack_of({l0, l1});
  EtaMatrix eta = EtaMatrix::mix(2, 0.5);
  CombinedMatrix conditional = build_conditional_multigraph(stack, eta);
  const std::int32_t v3 = stack.names->id_of("v3");
  CHECK(is_dangling(conditional, conditional.copy_index(0, v3)));
  CHECK(is_dangling(conditional, conditional.copy_index(1, v3)));
  // the parallel variant keeps copies connected through identity edges
  CombinedMatrix parallel = build_parallel_multigraph(stack, eta);
  CHECK_FALSE(is_dangling(parallel, parallel.copy_index(0, v3)));
}

TEST_CASE("personalization index on the spec fixtures") {
  std::vector<std::int32_t> a{1, 2, 3, 4};
  std::vector<std::int32_t> b{1, 2, 5, 6};
  std::vector<std::int32_t> c{7, 8, 9, 10};
  CHECK(personalization_index(a, a) == doctest::Approx(0.0));
  CHECK(personalization_index(a, c) == doctest::Approx(1.0));
  CHECK(personalization_index(a, b) == doctest::Approx(0.5));
  CHECK(personalization_index(a, b) ==
        doctest::Approx(personalization_index(b, a)));
  CHECK_THROWS_AS(personalization_index({}, {}), Error);
}

TEST_CASE("self information follows the log formula") {
  CHECK(self_information(8, 1) == doctest::Approx(3.0));
  CHECK(self_information(1024, 1) == doctest::Approx(10.0));
  CHECK(self_information(8, 2) == doctest::Approx(2.0));
  CHECK(self_information(7, 7) == doctest::Approx(0.0));
  CHECK_THROWS_AS(self_information(8, 0), Error);
}

TEST_CASE("stack manifests load layers relative to the manifest") {
  const std::string dir = "/tmp/ng_stack_test";
  std::filesystem::create_directories(dir);
  oracle::make_graph(3, {{0, 1, 2}}).save_tsv(dir + "/a.tsv");
  oracle::make_graph(3, {{1, 2, 1}}).save_tsv(dir + "/b.tsv");
  write_file(dir + "/stack.tsv", "alpha\ta.tsv\nbeta\tb.tsv\n");
  GraphStack stack = GraphStack::load_manifest(dir + "/stack.tsv");
  CHECK(stack.layer_count() == 2);
  CHECK(stack.layer_names[0] == "alpha");
  CHECK(stack.vertex_count() == 3);  // union of v0..v2
}
