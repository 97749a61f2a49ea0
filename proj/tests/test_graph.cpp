#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/common.hpp"
#include "core/graph.hpp"
#include "core/usage.hpp"
#include "oracles.hpp"

using namespace ng;

TEST_CASE("projection graph counts co-affiliated users") {
  const char* log_text =
      "2012-03-01T10:00:00Z\tu1\tENTER\tEmma\n"
      "2012-03-01T10:01:00Z\tu1\tENTER\tAnna\n"
      "2012-03-02T09:00:00Z\tu2\tENTER\tAnna\n"
      "2012-03-02T09:05:00Z\tu2\tENTER\tEmma\n";
  ActivityLog log = ActivityLog::parse(log_text, "test");
  Graph g = build_projection(log, Activity::enter);
  CHECK(g.edge_count() == 1);
  CHECK(g.edge_weight(g.names().id_of("Emma"), g.names().id_of("Anna")) == 2.0);
}

TEST_CASE("single user with a single name yields no edges") {
  ActivityLog log =
      ActivityLog::parse("2012-03-01T10:00:00Z\tu1\tENTER\tEmma\n", "test");
  Graph g = build_projection(log, Activity::enter);
  CHECK(g.edge_count() == 0);
  CHECK(g.vertex_count() == 1);
}

TEST_CASE("one user entering three names forms a unit triangle") {
  const char* log_text =
      "2012-03-01T10:00:00Z\tu1\tENTER\ta\n"
      "2012-03-01T10:01:00Z\tu1\tENTER\tb\n"
      "2012-03-01T10:02:00Z\tu1\tENTER\tc\n";
  ActivityLog log = ActivityLog::parse(log_text, "test");
  Graph g = build_projection(log, Activity::enter);
  CHECK(g.edge_count() == 3);
  for (std::int32_t u = 0; u < 3; ++u)
    for (std::int32_t v : g.neighbors(u)) CHECK(g.edge_weight(u, v) == 1.0);
}

TEST_CASE("projection weights match brute force on random small logs") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const int users = 3 + static_cast<int>(rng.next_below(18));
    const int names = 4 + static_cast<int>(rng.next_below(8));
    std::string text;
    std::vector<std::vector<bool>> r(users, std::vector<bool>(names, false));
    for (int u = 0; u < users; ++u)
      for (int i = 0; i < names; ++i)
        if (rng.next_double() < 0.3) {
          r[u][i] = true;
          text += "2012-03-01T00:00:00Z\tu" + std::to_string(u) + "\tENTER\tn" +
                  std::to_string(i) + "\n";
        }
    ActivityLog log = ActivityLog::parse(text, "test");
    Graph g = build_projection(log, Activity::enter);
    for (int i = 0; i < names; ++i) {
      const std::int32_t gi = log.names().id_of("n" + std::to_string(i));
      for (int j = i + 1; j < names; ++j) {
        const std::int32_t gj = log.names().id_of("n" + std::to_string(j));
        int expected = 0;
        for (int u = 0; u < users; ++u)
          if (r[u][i] && r[u][j]) ++expected;
        if (gi < 0 || gj < 0) {
          CHECK(expected == 0);
          continue;
        }
        CHECK(g.edge_weight(gi, gj) == doctest::Approx(expected));
      }
    }
  }
}

TEST_CASE("activity log orders records per user and deduplicates history") {
  const char* text =
      "2012-03-02T00:00:00Z\tu\tENTER\tb\n"
      "2012-03-01T00:00:00Z\tu\tENTER\ta\n"
      "2012-03-03T00:00:00Z\tu\tENTER\ta\n"
      "2012-03-04T00:00:00Z\tu\tCLICK\tc\n"
      "2012-03-05T00:00:00Z\tu\tENTER\tc\n";
  ActivityLog log = ActivityLog::parse(text, "test");
  auto h = log.history(0, Activity::enter);
  REQUIRE(h.size() == 3);
  CHECK(log.names().name(h[0]) == "a");
  CHECK(log.names().name(h[1]) == "b");
  CHECK(log.names().name(h[2]) == "c");
  CHECK(log.history(0, Activity::click).size() == 1);
  CHECK(log.matrix(Activity::enter).user_items(0).size() == 3);
}

TEST_CASE("activity log rejects malformed rows") {
  CHECK_THROWS_AS(ActivityLog::parse("nonsense\n", "test"), Error);
  CHECK_THROWS_AS(
      ActivityLog::parse("2012-03-01T00:00:00Z\tu\tWRONG\ta\n", "test"), Error);
  CHECK_THROWS_AS(ActivityLog::parse("yesterday\tu\tENTER\ta\n", "test"),
                  Error);
}

TEST_CASE("graph stats on a triangle") {
  Graph g = oracle::make_graph(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}});
  NetworkStats s = graph_stats(g);
  CHECK(s.vertex_count == 3);
  CHECK(s.edge_count == 3);
  CHECK(s.density == doctest::Approx(1.0));
  CHECK(s.wcc_count == 1);
  CHECK(s.lwcc_size == 3);
  CHECK(s.lwcc_diameter == 1);
  CHECK(s.diameter_exact);
}

TEST_CASE("graph stats on two disjoint edges") {
  Graph g = oracle::make_graph(4, {{0, 1, 1}, {2, 3, 1}});
  NetworkStats s = graph_stats(g);
  CHECK(s.density == doctest::Approx(1.0 / 3.0));
  CHECK(s.wcc_count == 2);
  CHECK(s.lwcc_size == 2);
  CHECK(s.lwcc_diameter == 1);
}

TEST_CASE("graph stats on the empty graph") {
  Graph g = oracle::make_graph(0, {});
  NetworkStats s = graph_stats(g);
  CHECK(s.vertex_count == 0);
  CHECK(s.wcc_count == 0);
  CHECK(s.lwcc_diameter == -1);  // undefined
}

TEST_CASE("wcc sizes partition the vertex set and density matches formula") {
  for (std::uint64_t seed = 1; seed < 6; ++seed) {
    Graph g = oracle::random_graph(seed, 40, 0.05);
    NetworkStats s = graph_stats(g);
    const double n = static_cast<double>(s.vertex_count);
    CHECK(s.density ==
          doctest::Approx(2.0 * s.edge_count / (n * (n - 1))).epsilon(1e-12));
    CHECK(s.lwcc_size <= s.vertex_count);
    CHECK(s.wcc_count >= 1);
  }
}

TEST_CASE("path graph diameter and double-sweep fallback") {
  std::vector<oracle::Edge> chain;
  for (int i = 0; i + 1 < 12; ++i) chain.push_back({i, i + 1, 1.0});
  Graph g = oracle::make_graph(12, chain);
  NetworkStats exact = graph_stats(g, 1000);
  CHECK(exact.lwcc_diameter == 11);
  CHECK(exact.diameter_exact);
  NetworkStats approx = graph_stats(g, 4);  // cap below the component size
  CHECK_FALSE(approx.diameter_exact);
  CHECK(approx.lwcc_diameter <= 11);
  CHECK(approx.lwcc_diameter >= 6);  // double sweep on a path is tight
}

TEST_CASE("restriction to common vertices") {
  Graph a = oracle::make_graph(3, {{0, 1, 1}, {1, 2, 2}});
  SUBCASE("identical graphs stay identical") {
    auto [ra, rb] = restrict_to_common_vertices(a, a);
    CHECK(ra.vertex_count() == 3);
    CHECK(ra.edge_count() == 2);
    CHECK(graph_stats(ra).lwcc_size == graph_stats(a).lwcc_size);
  }
  SUBCASE("disjoint vertex sets are an error") {
    auto lex = Lexicon::from_names({"x", "y"});
    EdgeAccumulator acc;
    acc.add(0, 1, 1.0);
    Graph b = Graph::build(lex, acc);
    CHECK_THROWS_AS(restrict_to_common_vertices(a, b), Error);
  }
}

TEST_CASE("restriction keeps exactly the surviving edges") {
  // V1 = {a,b,c} path a-b-c; V2 = {b,c,d} edges (b,c) and (c,d)
  auto lex1 = Lexicon::from_names({"a", "b", "c"});
  EdgeAccumulator acc1;
  acc1.add(0, 1, 1.0);
  acc1.add(1, 2, 1.0);
  Graph g1 = Graph::build(lex1, acc1);

  auto lex2 = Lexicon::from_names({"b", "c", "d"});
  EdgeAccumulator acc2;
  acc2.add(0, 1, 3.0);
  acc2.add(1, 2, 1.0);
  Graph g2 = Graph::build(lex2, acc2);

  auto [ra, rb] = restrict_to_common_vertices(g1, g2);
  CHECK(ra.vertex_count() == 2);
  CHECK(rb.vertex_count() == 2);
  CHECK(ra.edge_count() == 1);  // only (b,c) survives
  CHECK(rb.edge_count() == 1);
  CHECK(rb.edge_weight(rb.names().id_of("b"), rb.names().id_of("c")) == 3.0);

  // stats of the restriction equal stats of a freshly built subgraph
  auto fresh_lex = Lexicon::from_names({"b", "c"});
  EdgeAccumulator fresh_acc;
  fresh_acc.add(0, 1, 1.0);
  Graph fresh = Graph::build(fresh_lex, fresh_acc);
  NetworkStats sa = graph_stats(ra);
  NetworkStats sf = graph_stats(fresh);
  CHECK(sa.vertex_count == sf.vertex_count);
  CHECK(sa.edge_count == sf.edge_count);
  CHECK(sa.density == doctest::Approx(sf.density));
  CHECK(sa.lwcc_diameter == sf.lwcc_diameter);
}

TEST_CASE("edge list TSV round trip, ordering and comments") {
  Graph g = oracle::make_graph(4, {{2, 0, 5}, {0, 1, 1.5}, {3, 1, 2}});
  const std::string tsv = g.to_tsv({"manifest deadbeef"});
  CHECK(tsv.rfind("# manifest deadbeef\n", 0) == 0);
  // rows sorted with name_a < name_b
  CHECK(tsv.find("v0\tv1\t1.5\nv0\tv2\t5\nv1\tv3\t2\n") != std::string::npos);

  Graph back = Graph::parse_tsv(tsv, "roundtrip");
  CHECK(back.edge_count() == g.edge_count());
  CHECK(back.edge_weight(back.names().id_of("v0"), back.names().id_of("v2")) ==
        5.0);
  CHECK(back.to_tsv() == g.to_tsv());
}

TEST_CASE("TSV loader rejects malformed rows") {
  CHECK_THROWS_AS(Graph::parse_tsv("a\tb\n", "bad"), Error);
  CHECK_THROWS_AS(Graph::parse_tsv("a\tb\t0\n", "bad"), Error);
  CHECK_THROWS_AS(Graph::parse_tsv("a\ta\t1\n", "bad"), Error);
}

TEST_CASE("names missing from an external lexicon are skipped on load") {
  auto lex = Lexicon::from_names({"Anna"});
  const char* text =
      "2012-03-01T00:00:00Z\tu\tENTER\tAnna\n"
      "2012-03-01T00:00:01Z\tu\tENTER\tUnknown\n";
  ActivityLog log = ActivityLog::parse(text, "test", lex);
  CHECK(log.record_count() == 1);
  CHECK(log.skipped_names() == 1);
}

TEST_CASE("patch_graph applies deltas and drops dead edges") {
  Graph g = oracle::make_graph(3, {{0, 1, 2}, {1, 2, 1}});
  std::unordered_map<std::uint64_t, double> delta;
  delta[EdgeAccumulator::key(0, 1)] = -1.0;
  delta[EdgeAccumulator::key(1, 2)] = -1.0;
  Graph p = patch_graph(g, delta);
  CHECK(p.edge_weight(0, 1) == 1.0);
  CHECK(p.edge_weight(1, 2) == 0.0);
  CHECK(p.edge_count() == 1);
  CHECK(p.vertex_count() == 3);
}
