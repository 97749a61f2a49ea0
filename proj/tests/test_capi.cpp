// Exercises the shared library's C surface: handle lifecycles, error
// reporting, and the file formats written through it.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "namegraph.h"

namespace {

const std::string kDir = "/tmp/ng_capi_test";

std::string path(const std::string& name) { return kDir + "/" + name; }

void put(const std::string& name, const std::string& content) {
  std::ofstream out(path(name), std::ios::binary);
  out << content;
}

std::string slurp(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

struct Setup {
  Setup() {
    std::filesystem::create_directories(kDir);
    put("lexicon.txt", "Anna\nPeter\nPaul\nEmma\nIda\n");
    put("corpus.txt",
        "Anna met Peter. Paul left!\n"
        "Peter and Paul talked. Anna saw Emma and Peter.\n"
        "Ida spoke with Anna and Emma.\n");
    put("two.tsv", "a\tb\t1\n");
    put("log.tsv",
        "2012-03-01T10:00:00Z\tu1\tENTER\tAnna\n"
        "2012-03-01T10:01:00Z\tu1\tENTER\tEmma\n"
        "2012-03-01T10:02:00Z\tu1\tENTER\tIda\n"
        "2012-03-02T09:00:00Z\tu2\tENTER\tAnna\n"
        "2012-03-02T09:01:00Z\tu2\tENTER\tEmma\n"
        "2012-03-02T09:02:00Z\tu2\tENTER\tPeter\n"
        "2012-03-03T09:00:00Z\tu3\tENTER\tAnna\n"
        "2012-03-03T09:01:00Z\tu3\tENTER\tIda\n"
        "2012-03-03T09:02:00Z\tu3\tENTER\tPeter\n"
        "2012-03-03T09:03:00Z\tu3\tFAVORITE\tIda\n");
    put("cats.tsv",
        "Anna\tfemale\nEmma\tfemale\nIda\tfemale\nPeter\tmale\nPaul\tmale\n"
        "Anna\tgerman\nIda\tgerman\n");
    put("layer_a.tsv",
        "Anna\tEmma\t1\nAnna\tPeter\t2\nEmma\tPeter\t1\nPaul\tPeter\t1\n");
  }
};

Setup setup;  // NOLINT

}  // namespace

TEST_CASE("version and error reporting") {
  CHECK(std::string(ng_version()) == "1.0.0");
  ng_lexicon* lex = nullptr;
  CHECK(ng_lexicon_load("/no/such/file", &lex) == NG_ERROR_IO);
  CHECK(std::string(ng_last_error()).find("/no/such/file") !=
        std::string::npos);
}

TEST_CASE("lexicon round trip") {
  ng_lexicon* lex = nullptr;
  REQUIRE(ng_lexicon_load(path("lexicon.txt").c_str(), &lex) == NG_OK);
  CHECK(ng_lexicon_size(lex) == 5);
  CHECK(std::string(ng_lexicon_name(lex, 0)) == "Anna");
  CHECK(ng_lexicon_id(lex, "Paul") == 2);
  CHECK(ng_lexicon_id(lex, "Nobody") == -1);
  CHECK(ng_lexicon_name(lex, 99) == nullptr);
  ng_lexicon_free(lex);
}

TEST_CASE("mining, stats and graph io through the C API") {
  ng_lexicon* lex = nullptr;
  REQUIRE(ng_lexicon_load(path("lexicon.txt").c_str(), &lex) == NG_OK);
  ng_graph* g = nullptr;
  REQUIRE(ng_mine_cooccurrences(lex, path("corpus.txt").c_str(), 0, 0, 1000, 2,
                                &g) == NG_OK);
  CHECK(ng_graph_vertex_count(g) == 5);
  CHECK(ng_graph_edge_count(g) > 0);

  REQUIRE(ng_graph_save(g, path("mined.tsv").c_str(), "manifest cafebabe") ==
          NG_OK);
  const std::string tsv = slurp(path("mined.tsv"));
  CHECK(tsv.rfind("# manifest cafebabe\n", 0) == 0);
  CHECK(tsv.find("Anna\tPeter\t2\n") != std::string::npos);

  ng_graph* loaded = nullptr;
  REQUIRE(ng_graph_load(path("mined.tsv").c_str(), &loaded) == NG_OK);
  CHECK(ng_graph_edge_count(loaded) == ng_graph_edge_count(g));

  ng_graph_stats stats{};
  REQUIRE(ng_graph_compute_stats(loaded, 1000, 1, &stats) == NG_OK);
  CHECK(stats.vertex_count == 5);
  CHECK(stats.wcc_count >= 1);
  CHECK(stats.diameter_exact == 1);

  double sim = 0;
  REQUIRE(ng_vertex_similarity(loaded, "Anna", "Paul", "jaccard", 0, &sim) ==
          NG_OK);
  CHECK(sim >= 0.0);
  CHECK(ng_vertex_similarity(loaded, "Anna", "Nope", "jaccard", 0, &sim) ==
        NG_ERROR_INVALID_ARGUMENT);

  ng_graph_free(loaded);
  ng_graph_free(g);
  ng_lexicon_free(lex);
}

TEST_CASE("categories and similarity analyses") {
  ng_lexicon* lex = nullptr;
  REQUIRE(ng_lexicon_load(path("lexicon.txt").c_str(), &lex) == NG_OK);
  ng_graph* g = nullptr;
  REQUIRE(ng_mine_cooccurrences(lex, path("corpus.txt").c_str(), 0, 0, 1000, 1,
                                &g) == NG_OK);
  ng_categories* cats = nullptr;
  REQUIRE(ng_categories_load(path("cats.tsv").c_str(), g, &cats) == NG_OK);
  double sem = 0;
  REQUIRE(ng_semantic_similarity(cats, g, "Anna", "Emma", &sem) == NG_OK);
  CHECK(sem == doctest::Approx(1.0 / std::sqrt(2.0)));

  ng_table* profile = nullptr;
  REQUIRE(ng_similarity_distance_profile(g, cats, 3, 4, 7, 1, &profile) ==
          NG_OK);
  CHECK(ng_table_cols(profile) == 4);
  CHECK(std::string(ng_table_column(profile, 0)) == "x");
  CHECK(ng_table_rows(profile) >= 1);
  ng_table_free(profile);

  ng_table* bins = nullptr;
  REQUIRE(ng_similarity_bins(g, cats, "cosine", 1, 10, 1, &bins) == NG_OK);
  CHECK(ng_table_rows(bins) >= 1);
  REQUIRE(ng_table_save(bins, path("bins.csv").c_str(), "manifest 123") ==
          NG_OK);
  CHECK(slurp(path("bins.csv")).rfind("# manifest 123\n", 0) == 0);
  ng_table_free(bins);

  ng_categories_free(cats);
  ng_graph_free(g);
  ng_lexicon_free(lex);
}

TEST_CASE("qap through the C API") {
  ng_lexicon* lex = nullptr;
  REQUIRE(ng_lexicon_load(path("lexicon.txt").c_str(), &lex) == NG_OK);
  ng_graph* g = nullptr;
  REQUIRE(ng_mine_cooccurrences(lex, path("corpus.txt").c_str(), 0, 0, 1000, 1,
                                &g) == NG_OK);
  double rho = 0;
  REQUIRE(ng_graph_correlation(g, g, 0, &rho) == NG_OK);
  CHECK(rho == doctest::Approx(1.0));

  ng_qap_result result{};
  ng_table* hist = nullptr;
  REQUIRE(ng_qap_test(g, g, 99, 5, 0, 10, 2, &result, &hist) == NG_OK);
  CHECK(result.permutations == 99);
  CHECK(result.p_value >= 0.0);
  CHECK(ng_table_rows(hist) == 10);
  ng_table_free(hist);
  ng_graph_free(g);
  ng_lexicon_free(lex);
}

TEST_CASE("pagerank and the rank CSV format") {
  ng_graph* g = nullptr;
  REQUIRE(ng_graph_load(path("two.tsv").c_str(), &g) == NG_OK);
  const char* query[] = {"a"};
  ng_rank* r = nullptr;
  REQUIRE(ng_pagerank(g, "ppr", query, 1, 0.85, 1e-10, 1000, 1, &r) == NG_OK);
  double score = 0;
  REQUIRE(ng_rank_score(r, "a", &score) == NG_OK);
  CHECK(score == doctest::Approx(0.5405405405).epsilon(1e-8));
  CHECK(ng_rank_iterations(r) > 0);
  CHECK(ng_rank_residual(r) <= 1e-10);

  REQUIRE(ng_rank_save(r, path("rank.csv").c_str(), "manifest beef") == NG_OK);
  const std::string csv = slurp(path("rank.csv"));
  CHECK(csv.rfind("# manifest beef\n", 0) == 0);
  CHECK(csv.find("# kind=PPR\n") != std::string::npos);
  CHECK(csv.find("# alpha=0.85\n") != std::string::npos);
  CHECK(csv.find("name,score\n") != std::string::npos);
  CHECK(csv.find("a,0.54054") != std::string::npos);
  ng_rank_free(r);

  // ppr+ requires a query
  CHECK(ng_pagerank(g, "ppr+", nullptr, 0, 0.85, 1e-10, 1000, 1, &r) ==
        NG_ERROR_INVALID_ARGUMENT);
  CHECK(ng_pagerank(g, "nonsense", query, 1, 0.85, 1e-10, 1000, 1, &r) ==
        NG_ERROR_INVALID_ARGUMENT);
  ng_graph_free(g);
}

TEST_CASE("activity logs, projections, recommenders") {
  ng_activity_log* log = nullptr;
  REQUIRE(ng_activity_log_load(path("log.tsv").c_str(), nullptr, &log) == NG_OK);
  CHECK(ng_activity_log_users(log) == 3);
  CHECK(ng_activity_log_records(log) == 10);

  ng_graph* proj = nullptr;
  REQUIRE(ng_projection_build(log, "enter", 1, &proj) == NG_OK);
  CHECK(ng_graph_edge_count(proj) > 0);
  ng_graph_free(proj);

  double info = 0;
  REQUIRE(ng_self_information(log, "enter", "Peter", &info) == NG_OK);
  CHECK(info == doctest::Approx(std::log2(3.0 / 2.0)));
  CHECK(ng_self_information(log, "favorite", "Peter", &info) ==
        NG_ERROR_INVALID_ARGUMENT);  // nobody favorited Peter

  ng_recommender* rec = nullptr;
  REQUIRE(ng_recommender_create(log, "ppr+", "alpha=0.85,tol=1e-8", 3, 1,
                                &rec) == NG_OK);
  ng_table* recs = nullptr;
  REQUIRE(ng_recommend(rec, "u1", 3, &recs) == NG_OK);
  CHECK(ng_table_rows(recs) >= 1);
  CHECK(std::string(ng_table_column(recs, 1)) == "name");
  ng_table_free(recs);
  CHECK(ng_recommend(rec, "ghost", 3, &recs) == NG_ERROR_INVALID_ARGUMENT);
  ng_recommender_free(rec);

  CHECK(ng_recommender_create(log, "bogus", nullptr, 0, 1, &rec) ==
        NG_ERROR_INVALID_ARGUMENT);
  ng_activity_log_free(log);
}

TEST_CASE("evaluation through the C API") {
  ng_activity_log* log = nullptr;
  REQUIRE(ng_activity_log_load(path("log.tsv").c_str(), nullptr, &log) == NG_OK);
  ng_eval_config* cfg = nullptr;
  REQUIRE(ng_eval_config_create(&cfg) == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "models", "mp,random") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "protocol", "leave-last-out") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "k", "1") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "n_max", "1") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "min_history", "3") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "metric_ks", "1,2") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "seed", "11") == NG_OK);
  CHECK(ng_eval_config_set(cfg, "unknown_key", "1") == NG_ERROR_PARSE);

  ng_eval_result* res = nullptr;
  REQUIRE(ng_evaluate(log, cfg, &res) == NG_OK);
  CHECK(ng_eval_result_users_evaluated(res) == 3);
  const ng_table* results = ng_eval_result_table(res, "results");
  REQUIRE(results != nullptr);
  CHECK(ng_table_rows(results) > 0);
  CHECK(ng_eval_result_table(res, "nope") == nullptr);
  ng_eval_result_free(res);
  ng_eval_config_free(cfg);

  ng_table* pop = nullptr;
  REQUIRE(ng_popularity_profile(log, "enter", 3, 7, &pop) == NG_OK);
  CHECK(ng_table_rows(pop) >= 3);
  ng_table_free(pop);
  ng_activity_log_free(log);
}

TEST_CASE("stacks and multigraph ranking through the C API") {
  put("stack.tsv", "wiki\tlayer_a.tsv\nusage2\tlayer_a.tsv\n");

  ng_stack* stack = nullptr;
  REQUIRE(ng_stack_load(path("stack.tsv").c_str(), &stack) == NG_OK);
  CHECK(ng_stack_layers(stack) == 2);

  const double eta[4] = {0.7, 0.3, 0.3, 0.7};
  const char* query[] = {"Anna"};
  ng_rank* r = nullptr;
  REQUIRE(ng_multigraph_rank(stack, "multirank", eta, 2, 2, query, 1, 0.85,
                             1e-9, 1000, 1.0, 1, &r) == NG_OK);
  double score = 0;
  REQUIRE(ng_rank_score(r, "Anna", &score) == NG_OK);
  ng_rank_free(r);

  const double eta_vec[2] = {0.5, 0.5};
  REQUIRE(ng_multigraph_rank(stack, "averank", eta_vec, 1, 2, query, 1, 0.85,
                             1e-9, 1000, 1.0, 1, &r) == NG_OK);
  ng_rank_free(r);

  // eta validation propagates as invalid argument
  const double bad_eta[4] = {0.9, 0.3, 0.3, 0.7};
  CHECK(ng_multigraph_rank(stack, "multirank", bad_eta, 2, 2, query, 1, 0.85,
                           1e-9, 1000, 1.0, 1, &r) ==
        NG_ERROR_INVALID_ARGUMENT);
  ng_stack_free(stack);
}

TEST_CASE("diversify experiment through the C API") {
  ng_activity_log* log = nullptr;
  REQUIRE(ng_activity_log_load(path("log.tsv").c_str(), nullptr, &log) == NG_OK);
  ng_stack* stack = nullptr;
  REQUIRE(ng_stack_from_log(log, "enter", nullptr, 1, &stack) == NG_OK);
  CHECK(ng_stack_layers(stack) == 1);

  ng_eval_config* cfg = nullptr;
  REQUIRE(ng_eval_config_create(&cfg) == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "protocol", "take-first-in") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "k", "1") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "n_max", "1") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "min_history", "3") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "metric_ks", "1") == NG_OK);
  REQUIRE(ng_eval_config_set(cfg, "seed", "3") == NG_OK);

  const double grid[2] = {0.8, 1.0};
  ng_table* t = nullptr;
  REQUIRE(ng_diversify_experiment(stack, log, cfg, "averank,prank", grid, 2,
                                  &t) == NG_OK);
  CHECK(ng_table_rows(t) == 4);
  ng_table_free(t);
  ng_eval_config_free(cfg);
  ng_stack_free(stack);
  ng_activity_log_free(log);
}

TEST_CASE("sha256 helpers") {
  char hex[65];
  ng_sha256_buffer("abc", 3, hex);
  CHECK(std::string(hex) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(ng_sha256_file("/no/such/file", hex) == NG_ERROR_IO);
}
