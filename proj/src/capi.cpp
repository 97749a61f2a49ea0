// C ABI of the namegraph engine. Thin translation layer: every entry point
// catches ng::Error / std::exception and converts it into a status code plus
// a thread-local message.

#include "namegraph.h"

#include <cstring>
#include <memory>
#include <string>

#include "core/common.hpp"
#include "core/evaluation.hpp"
#include "core/graph.hpp"
#include "core/lexicon.hpp"
#include "core/metrics.hpp"
#include "core/multigraph.hpp"
#include "core/pagerank.hpp"
#include "core/qap.hpp"
#include "core/recommenders.hpp"
#include "core/sha256.hpp"
#include "core/similarity.hpp"
#include "core/strings.hpp"
#include "core/table.hpp"
#include "core/textmine.hpp"
#include "core/usage.hpp"

namespace {

thread_local std::string g_last_error;

ng_status status_of(ng::Errc code) {
  switch (code) {
    case ng::Errc::io: return NG_ERROR_IO;
    case ng::Errc::parse: return NG_ERROR_PARSE;
    case ng::Errc::invalid_argument: return NG_ERROR_INVALID_ARGUMENT;
    case ng::Errc::numeric: return NG_ERROR_NUMERIC;
    case ng::Errc::state: return NG_ERROR_STATE;
  }
  return NG_ERROR_STATE;
}

template <typename Fn>
ng_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return NG_OK;
  } catch (const ng::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NG_ERROR_STATE;
  }
}

std::vector<std::string> comment_lines(const char* header_comment) {
  std::vector<std::string> lines;
  if (!header_comment || !*header_comment) return lines;
  for (auto part : ng::split(header_comment, '\n'))
    lines.emplace_back(part);
  return lines;
}

}  // namespace

// ---- opaque wrappers -------------------------------------------------------

struct ng_lexicon {
  std::shared_ptr<const ng::Lexicon> impl;
};
struct ng_graph {
  ng::Graph impl;
};
struct ng_activity_log {
  ng::ActivityLog impl;
};
struct ng_categories {
  ng::CategoryAssignments impl;
};
struct ng_table {
  ng::Table impl{std::vector<std::string>{}};
};
struct ng_rank {
  ng::RankVector impl;
  std::shared_ptr<const ng::Lexicon> names;
};
struct ng_recommender {
  std::unique_ptr<ng::Recommender> impl;
  const ng_activity_log* log;
};
struct ng_eval_config {
  ng::EvalConfig impl;
};
struct ng_eval_result {
  ng_table results, scatter, sign_tests, metric_correlations;
  int64_t users_evaluated = 0, users_skipped = 0;
};
struct ng_stack {
  ng::GraphStack impl;
};

// ---- misc -------------------------------------------------------------------

extern "C" {

const char* ng_version(void) { return "1.0.0"; }

const char* ng_last_error(void) { return g_last_error.c_str(); }

ng_status ng_sha256_file(const char* path, char* hex_out) {
  return guarded([&] {
    const std::string hex = ng::Sha256::of_file(path);
    std::memcpy(hex_out, hex.c_str(), 65);
  });
}

void ng_sha256_buffer(const void* data, size_t len, char* hex_out) {
  ng::Sha256 h;
  h.update(data, len);
  const std::string hex = h.hex_digest();
  std::memcpy(hex_out, hex.c_str(), 65);
}

// ---- lexicon ------------------------------------------------------------------

ng_status ng_lexicon_load(const char* path, ng_lexicon** out) {
  return guarded([&] { *out = new ng_lexicon{ng::Lexicon::load_file(path)}; });
}

int64_t ng_lexicon_size(const ng_lexicon* lex) { return lex->impl->size(); }

const char* ng_lexicon_name(const ng_lexicon* lex, int64_t id) {
  if (id < 0 || id >= lex->impl->size()) return nullptr;
  return lex->impl->name(static_cast<std::int32_t>(id)).c_str();
}

int64_t ng_lexicon_id(const ng_lexicon* lex, const char* name) {
  return lex->impl->id_of(name);
}

void ng_lexicon_free(ng_lexicon* lex) { delete lex; }

// ---- graph --------------------------------------------------------------------

ng_status ng_graph_load(const char* path, ng_graph** out) {
  return guarded([&] { *out = new ng_graph{ng::Graph::load_tsv(path)}; });
}

ng_status ng_graph_save(const ng_graph* g, const char* path,
                        const char* header_comment) {
  return guarded([&] { g->impl.save_tsv(path, comment_lines(header_comment)); });
}

int64_t ng_graph_vertex_count(const ng_graph* g) {
  return g->impl.vertex_count();
}

int64_t ng_graph_edge_count(const ng_graph* g) { return g->impl.edge_count(); }

const char* ng_graph_vertex_name(const ng_graph* g, int64_t id) {
  if (id < 0 || id >= g->impl.vertex_count()) return nullptr;
  return g->impl.names().name(static_cast<std::int32_t>(id)).c_str();
}

void ng_graph_free(ng_graph* g) { delete g; }

ng_status ng_mine_cooccurrences(const ng_lexicon* lex, const char* corpus_path,
                                int mode, int blank_delimited, int max_names,
                                int threads, ng_graph** out) {
  return guarded([&] {
    ng::MineOptions options;
    options.mode = mode == 0 ? ng::ContextMode::sentence
                             : ng::ContextMode::whole_message;
    options.max_names_per_context = max_names;
    options.threads = threads;
    *out = new ng_graph{ng::mine_cooccurrence_file(
        corpus_path, lex->impl, blank_delimited != 0, options)};
  });
}

ng_status ng_graph_compute_stats(const ng_graph* g, int64_t diameter_cap,
                                 int threads, ng_graph_stats* out) {
  return guarded([&] {
    const ng::NetworkStats s = ng::graph_stats(g->impl, diameter_cap, threads);
    out->vertex_count = s.vertex_count;
    out->edge_count = s.edge_count;
    out->density = s.density;
    out->wcc_count = s.wcc_count;
    out->lwcc_size = s.lwcc_size;
    out->lwcc_diameter = s.lwcc_diameter;
    out->diameter_exact = s.diameter_exact ? 1 : 0;
  });
}

ng_status ng_graph_restrict_common(const ng_graph* a, const ng_graph* b,
                                   ng_graph** a_out, ng_graph** b_out) {
  return guarded([&] {
    auto [ra, rb] = ng::restrict_to_common_vertices(a->impl, b->impl);
    *a_out = new ng_graph{std::move(ra)};
    *b_out = new ng_graph{std::move(rb)};
  });
}

ng_status ng_vertex_similarity(const ng_graph* g, const char* name_u,
                               const char* name_v, const char* metric,
                               int weighted, double* out) {
  return guarded([&] {
    const std::int32_t u = g->impl.names().id_of(name_u);
    const std::int32_t v = g->impl.names().id_of(name_v);
    if (u < 0 || v < 0)
      ng::fail(ng::Errc::invalid_argument, "name not in graph");
    *out = ng::vertex_similarity(g->impl, u, v,
                                 ng::parse_vertex_metric(metric), weighted != 0);
  });
}

// ---- activity log ----------------------------------------------------------------

ng_status ng_activity_log_load(const char* path, const ng_lexicon* lex,
                               ng_activity_log** out) {
  return guarded([&] {
    *out = new ng_activity_log{
        ng::ActivityLog::load_file(path, lex ? lex->impl : nullptr)};
  });
}

int64_t ng_activity_log_users(const ng_activity_log* log) {
  return log->impl.user_count();
}

int64_t ng_activity_log_records(const ng_activity_log* log) {
  return log->impl.record_count();
}

void ng_activity_log_free(ng_activity_log* log) { delete log; }

ng_status ng_projection_build(const ng_activity_log* log, const char* activity,
                              int threads, ng_graph** out) {
  return guarded([&] {
    *out = new ng_graph{ng::build_projection(
        log->impl, ng::parse_activity(activity), threads)};
  });
}

ng_status ng_self_information(const ng_activity_log* log, const char* activity,
                              const char* name, double* out) {
  return guarded([&] {
    const ng::Activity a = ng::parse_activity(activity);
    const std::int32_t id = log->impl.names().id_of(name);
    if (id < 0) ng::fail(ng::Errc::invalid_argument, "unknown name");
    const auto& m = log->impl.matrix(a);
    *out = ng::self_information(m.user_count(),
                                static_cast<std::int64_t>(m.item_users(id).size()));
  });
}

// ---- categories -------------------------------------------------------------------

ng_status ng_categories_load(const char* path, const ng_graph* g,
                             ng_categories** out) {
  return guarded([&] {
    *out = new ng_categories{
        ng::CategoryAssignments::load_file(path, g->impl.names_ptr())};
  });
}

ng_status ng_semantic_similarity(const ng_categories* cats, const ng_graph* g,
                                 const char* name_u, const char* name_v,
                                 double* out) {
  return guarded([&] {
    const std::int32_t u = g->impl.names().id_of(name_u);
    const std::int32_t v = g->impl.names().id_of(name_v);
    if (u < 0 || v < 0)
      ng::fail(ng::Errc::invalid_argument, "name not in graph");
    *out = cats->impl.cosine(u, v);
  });
}

void ng_categories_free(ng_categories* cats) { delete cats; }

// ---- tables -----------------------------------------------------------------------

int64_t ng_table_rows(const ng_table* t) {
  return static_cast<int64_t>(t->impl.rows());
}

int64_t ng_table_cols(const ng_table* t) {
  return static_cast<int64_t>(t->impl.cols());
}

const char* ng_table_column(const ng_table* t, int64_t col) {
  if (col < 0 || col >= static_cast<int64_t>(t->impl.cols())) return nullptr;
  return t->impl.columns()[static_cast<std::size_t>(col)].c_str();
}

const char* ng_table_cell(const ng_table* t, int64_t row, int64_t col) {
  if (row < 0 || row >= static_cast<int64_t>(t->impl.rows()) || col < 0 ||
      col >= static_cast<int64_t>(t->impl.cols()))
    return nullptr;
  return t->impl.cell(static_cast<std::size_t>(row), static_cast<std::size_t>(col))
      .c_str();
}

ng_status ng_table_save(const ng_table* t, const char* path,
                        const char* header_comment) {
  return guarded([&] { t->impl.save_csv(path, comment_lines(header_comment)); });
}

void ng_table_free(ng_table* t) { delete t; }

// ---- similarity analyses ------------------------------------------------------------

ng_status ng_similarity_distance_profile(const ng_graph* g,
                                         const ng_categories* cats,
                                         int max_distance, int null_shuffles,
                                         uint64_t seed, int threads,
                                         ng_table** out) {
  return guarded([&] {
    ng::DistanceProfileOptions options;
    options.max_distance = max_distance;
    options.null_shuffles = null_shuffles;
    options.seed = seed;
    options.threads = threads;
    const auto profile =
        ng::similarity_vs_distance_profile(g->impl, cats->impl, options);
    auto table = std::make_unique<ng_table>();
    table->impl = ng::Table({"x", "mean", "count", "null_mean"});
    for (const auto& pt : profile) {
      if (!pt.present) continue;
      table->impl.row()
          .num(pt.distance)
          .num(pt.mean)
          .num(pt.pair_count)
          .num(pt.null_mean);
    }
    *out = table.release();
  });
}

ng_status ng_similarity_bins(const ng_graph* g, const ng_categories* cats,
                             const char* metric, int weighted, int64_t bins,
                             int threads, ng_table** out) {
  return guarded([&] {
    const auto rows = ng::binned_similarity_correlation(
        g->impl, cats->impl, ng::parse_vertex_metric(metric), weighted != 0,
        static_cast<std::int32_t>(bins), threads);
    auto table = std::make_unique<ng_table>();
    table->impl = ng::Table({"x", "mean", "count", "null_mean"});
    for (const auto& b : rows)
      table->impl.row().num(b.x).num(b.mean).num(b.pair_count).empty();
    *out = table.release();
  });
}

// ---- QAP ---------------------------------------------------------------------------

ng_status ng_graph_correlation(const ng_graph* a, const ng_graph* b,
                               int binarize, double* rho) {
  return guarded([&] {
    auto [ra, rb] = ng::restrict_to_common_vertices(a->impl, b->impl);
    *rho = ng::graph_correlation(ra, rb, binarize != 0);
  });
}

ng_status ng_qap_test(const ng_graph* a, const ng_graph* b,
                      int64_t permutations, uint64_t seed, int binarize,
                      int histogram_bins, int threads, ng_qap_result* out,
                      ng_table** null_histogram) {
  return guarded([&] {
    auto [ra, rb] = ng::restrict_to_common_vertices(a->impl, b->impl);
    const ng::QapResult r =
        ng::qap_test(ra, rb, permutations, seed, binarize != 0, threads);
    out->rho = r.rho_observed;
    out->permutations = r.permutations;
    out->p_value = r.p_value;
    if (null_histogram) {
      const int nb = histogram_bins > 0 ? histogram_bins : 50;
      double lo = r.null_samples.empty() ? 0 : r.null_samples.front();
      double hi = lo;
      for (double v : r.null_samples) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      const double width = nb > 0 && hi > lo ? (hi - lo) / nb : 1.0;
      std::vector<std::int64_t> counts(static_cast<std::size_t>(nb), 0);
      for (double v : r.null_samples) {
        int bin = width > 0 ? static_cast<int>((v - lo) / width) : 0;
        if (bin >= nb) bin = nb - 1;
        if (bin < 0) bin = 0;
        ++counts[static_cast<std::size_t>(bin)];
      }
      auto table = std::make_unique<ng_table>();
      table->impl = ng::Table({"lo", "hi", "count"});
      for (int i = 0; i < nb; ++i)
        table->impl.row()
            .num(lo + width * i)
            .num(lo + width * (i + 1))
            .num(counts[static_cast<std::size_t>(i)]);
      *null_histogram = table.release();
    }
  });
}

// ---- PageRank ----------------------------------------------------------------------

namespace {

std::vector<std::int32_t> resolve_query(const ng::Lexicon& lex,
                                        const char* const* query,
                                        size_t query_len) {
  std::vector<std::int32_t> ids;
  for (size_t i = 0; i < query_len; ++i) {
    const std::int32_t id = lex.id_of(query[i]);
    if (id < 0)
      ng::fail(ng::Errc::invalid_argument,
               "query name not in graph: '" + std::string(query[i]) + "'");
    ids.push_back(id);
  }
  return ids;
}

}  // namespace

ng_status ng_pagerank(const ng_graph* g, const char* kind,
                      const char* const* query, size_t query_len, double alpha,
                      double tol, int64_t max_iter, int threads,
                      ng_rank** out) {
  return guarded([&] {
    const std::string k = kind ? kind : "pr";
    ng::StochasticMatrix m = ng::StochasticMatrix::from_graph(g->impl);
    ng::PowerIterOptions options{alpha, tol, max_iter, threads, nullptr};
    ng::RankVector r;
    if (k == "pr") {
      r = ng::global_pagerank(m, options);
    } else {
      const auto ids = resolve_query(g->impl.names(), query, query_len);
      if (k == "ppr") r = ng::personalized_pagerank(m, ids, options);
      else if (k == "ppr+") r = ng::ppr_plus(m, ids, options);
      else ng::fail(ng::Errc::invalid_argument, "kind must be pr|ppr|ppr+");
    }
    *out = new ng_rank{std::move(r), g->impl.names_ptr()};
  });
}

int64_t ng_rank_size(const ng_rank* r) {
  return static_cast<int64_t>(r->impl.scores.size());
}

ng_status ng_rank_score(const ng_rank* r, const char* name, double* out) {
  return guarded([&] {
    const std::int32_t id = r->names->id_of(name);
    if (id < 0) ng::fail(ng::Errc::invalid_argument, "unknown name");
    *out = r->impl.scores[static_cast<std::size_t>(id)];
  });
}

int64_t ng_rank_iterations(const ng_rank* r) { return r->impl.iterations; }

double ng_rank_residual(const ng_rank* r) { return r->impl.residual; }

const char* ng_rank_note(const ng_rank* r) { return r->impl.note.c_str(); }

ng_status ng_rank_save(const ng_rank* r, const char* path,
                       const char* header_comment) {
  return guarded([&] {
    std::vector<std::string> comments = comment_lines(header_comment);
    comments.push_back(std::string("kind=") + ng::rank_kind_name(r->impl.kind));
    comments.push_back("alpha=" + ng::format_double(r->impl.alpha));
    comments.push_back("iterations=" + ng::format_int(r->impl.iterations));
    comments.push_back("residual=" + ng::format_double(r->impl.residual));
    if (!r->impl.note.empty()) comments.push_back(r->impl.note);

    std::vector<std::int32_t> order(r->impl.scores.size());
    for (std::size_t i = 0; i < order.size(); ++i)
      order[i] = static_cast<std::int32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
      const double sa = r->impl.scores[static_cast<std::size_t>(a)];
      const double sb = r->impl.scores[static_cast<std::size_t>(b)];
      if (sa != sb) return sa > sb;
      return a < b;
    });
    ng::Table t({"name", "score"});
    for (std::int32_t id : order)
      t.row()
          .str(r->names->name(id))
          .num(r->impl.scores[static_cast<std::size_t>(id)]);
    t.save_csv(path, comments);
  });
}

void ng_rank_free(ng_rank* r) { delete r; }

// ---- recommenders --------------------------------------------------------------------

ng_status ng_recommender_create(const ng_activity_log* log, const char* model,
                                const char* options, uint64_t seed, int threads,
                                ng_recommender** out) {
  return guarded([&] {
    ng::RecommenderOptions opt;
    opt.model = ng::parse_model(model);
    opt.seed = seed;
    opt.threads = threads;
    if (options && *options) {
      for (auto pair : ng::split(options, ',')) {
        pair = ng::trim(pair);
        if (pair.empty()) continue;
        const std::size_t eq = pair.find('=');
        if (eq == std::string_view::npos)
          ng::fail(ng::Errc::invalid_argument,
                   "options must be key=value pairs");
        const auto key = ng::trim(pair.substr(0, eq));
        const auto value = ng::trim(pair.substr(eq + 1));
        auto want_int = [&] {
          auto v = ng::parse_int(value);
          if (!v) ng::fail(ng::Errc::invalid_argument, "bad integer option");
          return *v;
        };
        auto want_double = [&] {
          auto v = ng::parse_double(value);
          if (!v) ng::fail(ng::Errc::invalid_argument, "bad numeric option");
          return *v;
        };
        if (key == "activity") opt.activity = ng::parse_activity(value);
        else if (key == "similarity") {
          if (value == "llr") opt.similarity = ng::SimilarityKind::loglikelihood;
          else if (value == "cosine") opt.similarity = ng::SimilarityKind::cosine;
          else ng::fail(ng::Errc::invalid_argument, "similarity must be llr|cosine");
        } else if (key == "ucf_neighbors") {
          if (value == "all") opt.ucf_neighbors.reset();
          else opt.ucf_neighbors = static_cast<std::int32_t>(want_int());
        } else if (key == "alpha") opt.alpha = want_double();
        else if (key == "tol") opt.tol = want_double();
        else if (key == "max_iter") opt.max_iter = want_int();
        else if (key == "wrmf_d") opt.wrmf.dimensions = static_cast<std::int32_t>(want_int());
        else if (key == "wrmf_lambda") opt.wrmf.lambda = want_double();
        else if (key == "wrmf_alpha_c") opt.wrmf.alpha_c = want_double();
        else if (key == "wrmf_iters") opt.wrmf.iterations = static_cast<std::int32_t>(want_int());
        else ng::fail(ng::Errc::invalid_argument,
                      "unknown option: '" + std::string(key) + "'");
      }
    }
    auto rec = std::make_unique<ng::Recommender>(log->impl, opt);
    *out = new ng_recommender{std::move(rec), log};
  });
}

ng_status ng_recommend(const ng_recommender* rec, const char* user, int64_t k,
                       ng_table** out) {
  return guarded([&] {
    const std::int32_t uid = rec->log->impl.user_id(user);
    if (uid < 0) ng::fail(ng::Errc::invalid_argument, "unknown user");
    const ng::RankedList ranking = rec->impl->score_user(uid);
    auto table = std::make_unique<ng_table>();
    table->impl = ng::Table({"rank", "name", "score"});
    const std::int64_t limit =
        k > 0 ? std::min<std::int64_t>(k, static_cast<std::int64_t>(ranking.order.size()))
              : static_cast<std::int64_t>(ranking.order.size());
    for (std::int64_t i = 0; i < limit; ++i) {
      table->impl.row()
          .num(i + 1)
          .str(rec->log->impl.names().name(ranking.order[static_cast<std::size_t>(i)]))
          .num(ranking.scores[static_cast<std::size_t>(i)]);
    }
    *out = table.release();
  });
}

void ng_recommender_free(ng_recommender* rec) { delete rec; }

// ---- evaluation ------------------------------------------------------------------------

ng_status ng_eval_config_create(ng_eval_config** out) {
  return guarded([&] { *out = new ng_eval_config{}; });
}

ng_status ng_eval_config_load(const char* path, ng_eval_config** out) {
  return guarded([&] {
    *out = new ng_eval_config{
        ng::EvalConfig::parse_kv(ng::read_file(path), path)};
  });
}

ng_status ng_eval_config_set(ng_eval_config* cfg, const char* key,
                             const char* value) {
  return guarded([&] { cfg->impl.set(key, value); });
}

void ng_eval_config_free(ng_eval_config* cfg) { delete cfg; }

ng_status ng_evaluate(const ng_activity_log* log, const ng_eval_config* cfg,
                      ng_eval_result** out) {
  return guarded([&] {
    ng::ExperimentResult r = ng::run_experiment(log->impl, cfg->impl);
    auto res = std::make_unique<ng_eval_result>();
    res->results.impl = std::move(r.results);
    res->scatter.impl = std::move(r.scatter);
    res->sign_tests.impl = std::move(r.sign_tests);
    res->metric_correlations.impl = std::move(r.metric_correlations);
    res->users_evaluated = r.users_evaluated;
    res->users_skipped = r.users_skipped;
    *out = res.release();
  });
}

const ng_table* ng_eval_result_table(const ng_eval_result* res,
                                     const char* which) {
  const std::string w = which ? which : "";
  if (w == "results") return &res->results;
  if (w == "scatter") return &res->scatter;
  if (w == "sign_tests") return &res->sign_tests;
  if (w == "metric_correlations") return &res->metric_correlations;
  return nullptr;
}

int64_t ng_eval_result_users_evaluated(const ng_eval_result* res) {
  return res->users_evaluated;
}

int64_t ng_eval_result_users_skipped(const ng_eval_result* res) {
  return res->users_skipped;
}

void ng_eval_result_free(ng_eval_result* res) { delete res; }

ng_status ng_popularity_profile(const ng_activity_log* log,
                                const char* activity, int shuffles,
                                uint64_t seed, ng_table** out) {
  return guarded([&] {
    auto table = std::make_unique<ng_table>();
    table->impl = ng::popularity_rank_profile(
        log->impl, ng::parse_activity(activity), shuffles, seed);
    *out = table.release();
  });
}

// ---- multigraph ---------------------------------------------------------------------------

ng_status ng_stack_load(const char* manifest_path, ng_stack** out) {
  return guarded([&] {
    *out = new ng_stack{ng::GraphStack::load_manifest(manifest_path)};
  });
}

ng_status ng_stack_from_log(const ng_activity_log* log, const char* activity,
                            const char* manifest_path, int threads,
                            ng_stack** out) {
  return guarded([&] {
    std::vector<std::string> names{"usage"};
    std::vector<ng::Graph> graphs;
    graphs.push_back(ng::build_projection(log->impl,
                                          ng::parse_activity(activity), threads));
    if (manifest_path && *manifest_path) {
      ng::GraphStack extra = ng::GraphStack::load_manifest(manifest_path);
      for (std::size_t i = 0; i < extra.layers.size(); ++i) {
        names.push_back(extra.layer_names[i]);
        graphs.push_back(std::move(extra.layers[i]));
      }
    }
    *out = new ng_stack{
        ng::GraphStack::from_graphs(std::move(names), std::move(graphs))};
  });
}

int64_t ng_stack_layers(const ng_stack* stack) {
  return stack->impl.layer_count();
}

void ng_stack_free(ng_stack* stack) { delete stack; }

ng_status ng_multigraph_rank(const ng_stack* stack, const char* method,
                             const double* eta, size_t eta_rows,
                             size_t eta_cols, const char* const* query,
                             size_t query_len, double alpha, double tol,
                             int64_t max_iter, double interlayer_weight,
                             int threads, ng_rank** out) {
  return guarded([&] {
    ng::EtaMatrix em;
    em.rows = static_cast<std::int32_t>(eta_rows);
    em.cols = static_cast<std::int32_t>(eta_cols);
    em.values.assign(eta, eta + eta_rows * eta_cols);
    const auto ids = resolve_query(*stack->impl.names, query, query_len);
    ng::MultigraphOptions options;
    options.interlayer_weight = interlayer_weight;
    options.power = {alpha, tol, max_iter, threads, nullptr};
    ng::RankVector r = ng::multigraph_rank(
        stack->impl, ng::parse_multigraph_method(method), em, ids, options);
    *out = new ng_rank{std::move(r), stack->impl.names};
  });
}

ng_status ng_diversify_experiment(const ng_stack* stack,
                                  const ng_activity_log* log,
                                  const ng_eval_config* cfg,
                                  const char* methods_csv,
                                  const double* eta_grid, size_t eta_len,
                                  ng_table** out) {
  return guarded([&] {
    std::vector<ng::MultigraphMethod> methods;
    for (auto tok : ng::split(methods_csv ? methods_csv : "", ','))
      if (!ng::trim(tok).empty())
        methods.push_back(ng::parse_multigraph_method(ng::trim(tok)));
    std::vector<double> grid(eta_grid, eta_grid + eta_len);
    auto table = std::make_unique<ng_table>();
    table->impl = ng::diversify_experiment(stack->impl, log->impl, cfg->impl,
                                           methods, grid);
    *out = table.release();
  });
}

}  // extern "C"
