/* namegraph — graph mining and recommendation engine for given names.
 *
 * C API of the shared library. All functions return ng_status; on failure
 * ng_last_error() holds a thread-local message. Objects are opaque handles
 * released with their ng_*_free function. Unless noted otherwise, handles
 * are immutable after creation and safe to share across threads.
 */
#ifndef NAMEGRAPH_H
#define NAMEGRAPH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define NG_API __declspec(dllexport)
#else
#  define NG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ng_status {
  NG_OK = 0,
  NG_ERROR_IO = 1,
  NG_ERROR_PARSE = 2,
  NG_ERROR_INVALID_ARGUMENT = 3,
  NG_ERROR_NUMERIC = 4,
  NG_ERROR_STATE = 5
} ng_status;

NG_API const char* ng_version(void);
/* Message of the last failing call on this thread ("" when none). */
NG_API const char* ng_last_error(void);

/* ---- hashing (run manifests) ------------------------------------------ */

/* hex_out must hold 65 bytes (64 hex chars + NUL). */
NG_API ng_status ng_sha256_file(const char* path, char* hex_out);
NG_API void ng_sha256_buffer(const void* data, size_t len, char* hex_out);

/* ---- lexicon ----------------------------------------------------------- */

typedef struct ng_lexicon ng_lexicon;

/* One name per line, UTF-8; duplicates collapse case-insensitively. */
NG_API ng_status ng_lexicon_load(const char* path, ng_lexicon** out);
NG_API int64_t ng_lexicon_size(const ng_lexicon* lex);
/* Borrowed pointer, valid while the lexicon lives; NULL when out of range. */
NG_API const char* ng_lexicon_name(const ng_lexicon* lex, int64_t id);
/* -1 when the name is absent (exact match against canonical forms). */
NG_API int64_t ng_lexicon_id(const ng_lexicon* lex, const char* name);
NG_API void ng_lexicon_free(ng_lexicon* lex);

/* ---- graphs ------------------------------------------------------------ */

typedef struct ng_graph ng_graph;

/* Edge-list TSV: name_a \t name_b \t weight ('#' lines ignored). */
NG_API ng_status ng_graph_load(const char* path, ng_graph** out);
/* header_comment (may be NULL) is written as leading '# ' lines. */
NG_API ng_status ng_graph_save(const ng_graph* g, const char* path,
                               const char* header_comment);
NG_API int64_t ng_graph_vertex_count(const ng_graph* g);
NG_API int64_t ng_graph_edge_count(const ng_graph* g);
NG_API const char* ng_graph_vertex_name(const ng_graph* g, int64_t id);
NG_API void ng_graph_free(ng_graph* g);

/* Sentence (mode=0) or whole-message (mode=1) co-occurrence mining over a
 * corpus file; documents are single lines, or blank-line separated blocks
 * when blank_delimited != 0. Contexts with more than max_names matched names
 * are discarded (0 disables the cap). */
NG_API ng_status ng_mine_cooccurrences(const ng_lexicon* lex,
                                       const char* corpus_path, int mode,
                                       int blank_delimited, int max_names,
                                       int threads, ng_graph** out);

typedef struct ng_graph_stats {
  int64_t vertex_count;
  int64_t edge_count;
  double density;
  int64_t wcc_count;
  int64_t lwcc_size;
  int64_t lwcc_diameter; /* -1 when undefined (empty graph) */
  int diameter_exact;    /* 0 = double-sweep lower bound */
} ng_graph_stats;

NG_API ng_status ng_graph_compute_stats(const ng_graph* g, int64_t diameter_cap,
                                        int threads, ng_graph_stats* out);

/* Restriction of both graphs to their common vertex set. */
NG_API ng_status ng_graph_restrict_common(const ng_graph* a, const ng_graph* b,
                                          ng_graph** a_out, ng_graph** b_out);

/* Vertex similarity: metric "jaccard" | "cosine". */
NG_API ng_status ng_vertex_similarity(const ng_graph* g, const char* name_u,
                                      const char* name_v, const char* metric,
                                      int weighted, double* out);

/* ---- activity logs ----------------------------------------------------- */

typedef struct ng_activity_log ng_activity_log;

/* TSV: timestamp \t user \t ENTER|CLICK|FAVORITE \t name. lex may be NULL
 * (name universe from the file). */
NG_API ng_status ng_activity_log_load(const char* path, const ng_lexicon* lex,
                                      ng_activity_log** out);
NG_API int64_t ng_activity_log_users(const ng_activity_log* log);
NG_API int64_t ng_activity_log_records(const ng_activity_log* log);
NG_API void ng_activity_log_free(ng_activity_log* log);

/* Projection graph for activity "enter" | "click" | "favorite". */
NG_API ng_status ng_projection_build(const ng_activity_log* log,
                                     const char* activity, int threads,
                                     ng_graph** out);

/* log2(|users| / |users of name|) for one activity class. */
NG_API ng_status ng_self_information(const ng_activity_log* log,
                                     const char* activity, const char* name,
                                     double* out);

/* ---- category reference ------------------------------------------------- */

typedef struct ng_categories ng_categories;

/* TSV rows: name \t category, aligned with the graph's vertex names. */
NG_API ng_status ng_categories_load(const char* path, const ng_graph* g,
                                    ng_categories** out);
NG_API ng_status ng_semantic_similarity(const ng_categories* cats,
                                        const ng_graph* g, const char* name_u,
                                        const char* name_v, double* out);
NG_API void ng_categories_free(ng_categories* cats);

/* ---- generic result tables ---------------------------------------------- */

typedef struct ng_table ng_table;

NG_API int64_t ng_table_rows(const ng_table* t);
NG_API int64_t ng_table_cols(const ng_table* t);
NG_API const char* ng_table_column(const ng_table* t, int64_t col);
NG_API const char* ng_table_cell(const ng_table* t, int64_t row, int64_t col);
/* CSV with LF endings; header_comment written as leading '# ' lines. */
NG_API ng_status ng_table_save(const ng_table* t, const char* path,
                               const char* header_comment);
NG_API void ng_table_free(ng_table* t);

/* Mean category similarity per shortest-path distance (observed + shuffled
 * null): columns x,mean,count,null_mean. */
NG_API ng_status ng_similarity_distance_profile(const ng_graph* g,
                                                const ng_categories* cats,
                                                int max_distance,
                                                int null_shuffles, uint64_t seed,
                                                int threads, ng_table** out);

/* Mean category similarity per structural-similarity bin: columns
 * x,mean,count,null_mean (null_mean empty). */
NG_API ng_status ng_similarity_bins(const ng_graph* g, const ng_categories* cats,
                                    const char* metric, int weighted,
                                    int64_t bins, int threads, ng_table** out);

/* ---- QAP ----------------------------------------------------------------- */

typedef struct ng_qap_result {
  double rho;
  int64_t permutations;
  double p_value;
} ng_qap_result;

/* Graphs are restricted to their common vertex set internally. */
NG_API ng_status ng_graph_correlation(const ng_graph* a, const ng_graph* b,
                                      int binarize, double* rho);
/* null_histogram (optional, pass NULL to skip) receives columns lo,hi,count. */
NG_API ng_status ng_qap_test(const ng_graph* a, const ng_graph* b,
                             int64_t permutations, uint64_t seed, int binarize,
                             int histogram_bins, int threads,
                             ng_qap_result* out, ng_table** null_histogram);

/* ---- PageRank family ------------------------------------------------------ */

typedef struct ng_rank ng_rank;

/* kind: "pr" (query ignored), "ppr", "ppr+". query: names, may be NULL for
 * "pr". Scores cover every vertex of g. */
NG_API ng_status ng_pagerank(const ng_graph* g, const char* kind,
                             const char* const* query, size_t query_len,
                             double alpha, double tol, int64_t max_iter,
                             int threads, ng_rank** out);
NG_API int64_t ng_rank_size(const ng_rank* r);
NG_API ng_status ng_rank_score(const ng_rank* r, const char* name, double* out);
NG_API int64_t ng_rank_iterations(const ng_rank* r);
NG_API double ng_rank_residual(const ng_rank* r);
NG_API const char* ng_rank_note(const ng_rank* r);
/* CSV name,score sorted by descending score; metadata comment lines record
 * kind/alpha/tol/iterations/residual after the caller's header_comment. */
NG_API ng_status ng_rank_save(const ng_rank* r, const char* path,
                              const char* header_comment);
NG_API void ng_rank_free(ng_rank* r);

/* ---- recommenders ---------------------------------------------------------- */

typedef struct ng_recommender ng_recommender;

/* model: ucf | icf | ppr | ppr+ | wrmf | mp | random.
 * options: comma-separated key=value pairs (activity=enter, similarity=llr,
 * ucf_neighbors=all, alpha=0.85, tol=1e-10, max_iter=1000, wrmf_d=10,
 * wrmf_lambda=0.015, wrmf_alpha_c=1, wrmf_iters=15); NULL for defaults. */
NG_API ng_status ng_recommender_create(const ng_activity_log* log,
                                       const char* model, const char* options,
                                       uint64_t seed, int threads,
                                       ng_recommender** out);
/* Top-k ranking for a user id from the log: columns rank,name,score. */
NG_API ng_status ng_recommend(const ng_recommender* rec, const char* user,
                              int64_t k, ng_table** out);
NG_API void ng_recommender_free(ng_recommender* rec);

/* ---- offline evaluation ----------------------------------------------------- */

typedef struct ng_eval_config ng_eval_config;

NG_API ng_status ng_eval_config_create(ng_eval_config** out);
/* Line-oriented key=value file (see README for keys). */
NG_API ng_status ng_eval_config_load(const char* path, ng_eval_config** out);
NG_API ng_status ng_eval_config_set(ng_eval_config* cfg, const char* key,
                                    const char* value);
NG_API void ng_eval_config_free(ng_eval_config* cfg);

typedef struct ng_eval_result ng_eval_result;

NG_API ng_status ng_evaluate(const ng_activity_log* log,
                             const ng_eval_config* cfg, ng_eval_result** out);
/* which: "results" | "scatter" | "sign_tests" | "metric_correlations".
 * Borrowed pointer owned by the result. */
NG_API const ng_table* ng_eval_result_table(const ng_eval_result* res,
                                            const char* which);
NG_API int64_t ng_eval_result_users_evaluated(const ng_eval_result* res);
NG_API int64_t ng_eval_result_users_skipped(const ng_eval_result* res);
NG_API void ng_eval_result_free(ng_eval_result* res);

/* Mean popularity rank per search-history position with shuffled baseline:
 * columns position,mean_rank,count,null_mean. */
NG_API ng_status ng_popularity_profile(const ng_activity_log* log,
                                       const char* activity, int shuffles,
                                       uint64_t seed, ng_table** out);

/* ---- multigraph diversification ----------------------------------------------- */

typedef struct ng_stack ng_stack;

/* Manifest: one `layer_name<TAB>edge_list_path` per line. */
NG_API ng_status ng_stack_load(const char* manifest_path, ng_stack** out);
/* Stack whose first layer "usage" is the projection graph of `log`; the
 * manifest's layers follow. manifest_path may be NULL for the log alone. */
NG_API ng_status ng_stack_from_log(const ng_activity_log* log,
                                   const char* activity,
                                   const char* manifest_path, int threads,
                                   ng_stack** out);
NG_API int64_t ng_stack_layers(const ng_stack* stack);
NG_API void ng_stack_free(ng_stack* stack);

/* method: averank | multirank | prank. eta: row-major, 1 x L for averank and
 * L x L doubly stochastic otherwise. Scores are per name over the stack's
 * vertex union. */
NG_API ng_status ng_multigraph_rank(const ng_stack* stack, const char* method,
                                    const double* eta, size_t eta_rows,
                                    size_t eta_cols, const char* const* query,
                                    size_t query_len, double alpha, double tol,
                                    int64_t max_iter, double interlayer_weight,
                                    int threads, ng_rank** out);

/* Accuracy/diversity sweep: for each eta in eta_grid (diagonal mix value) and
 * each method, evaluates top-k precision and pairwise personalization under
 * the config's protocol. Emits columns model,eta,personalization,precision. */
NG_API ng_status ng_diversify_experiment(const ng_stack* stack,
                                         const ng_activity_log* log,
                                         const ng_eval_config* cfg,
                                         const char* methods_csv,
                                         const double* eta_grid, size_t eta_len,
                                         ng_table** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* NAMEGRAPH_H */
