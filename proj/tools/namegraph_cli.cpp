// namegraph command-line front end. All engine access goes through the
// shared library's C API; this file owns argument parsing, run manifests and
// local file bookkeeping only.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "namegraph.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

[[noreturn]] void die(const std::string& message, int code = kExitError) {
  std::fprintf(stderr, "namegraph: %s\n", message.c_str());
  std::exit(code);
}

void check(ng_status status) {
  if (status == NG_OK) return;
  const int code = status == NG_ERROR_INVALID_ARGUMENT ? kExitUsage : kExitError;
  die(ng_last_error(), code);
}

// Deleter-based handle guards so early exits cannot leak.
template <typename T, void (*Free)(T*)>
using handle = std::unique_ptr<T, std::integral_constant<void (*)(T*), Free>>;

using lexicon_ptr = handle<ng_lexicon, ng_lexicon_free>;
using graph_ptr = handle<ng_graph, ng_graph_free>;
using log_ptr = handle<ng_activity_log, ng_activity_log_free>;
using categories_ptr = handle<ng_categories, ng_categories_free>;
using table_ptr = handle<ng_table, ng_table_free>;
using rank_ptr = handle<ng_rank, ng_rank_free>;
using recommender_ptr = handle<ng_recommender, ng_recommender_free>;
using eval_config_ptr = handle<ng_eval_config, ng_eval_config_free>;
using eval_result_ptr = handle<ng_eval_result, ng_eval_result_free>;
using stack_ptr = handle<ng_stack, ng_stack_free>;

// Run manifest: resolved flags, seed, content hashes of the inputs. The hash
// of its canonical JSON form is stamped into every output file header so a
// result can be traced back to the exact invocation.
class Manifest {
 public:
  Manifest(std::string subcommand, std::uint64_t seed)
      : subcommand_(std::move(subcommand)) {
    doc_["subcommand"] = subcommand_;
    doc_["seed"] = seed;
    doc_["flags"] = json::object();
    doc_["inputs"] = json::object();
  }

  void flag(const std::string& name, const std::string& value) {
    doc_["flags"][name] = value;
  }
  void flag(const std::string& name, std::int64_t value) {
    doc_["flags"][name] = value;
  }
  void flag(const std::string& name, double value) {
    doc_["flags"][name] = value;
  }
  void flag(const std::string& name, bool value) { doc_["flags"][name] = value; }

  void input(const std::string& path) {
    char hex[65];
    check(ng_sha256_file(path.c_str(), hex));
    doc_["inputs"][path] = hex;
  }

  // Finalizes the hash; call after all flags/inputs are recorded.
  const std::string& hash() {
    if (hash_.empty()) {
      const std::string canonical = doc_.dump();
      char hex[65];
      ng_sha256_buffer(canonical.data(), canonical.size(), hex);
      hash_.assign(hex, 16);  // 64 bits are plenty for tracing
    }
    return hash_;
  }

  std::string header() { return "manifest " + hash(); }

  void save(const std::string& primary_output) {
    doc_["manifest_hash"] = hash();
    const std::string path = primary_output + ".manifest.json";
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) die("cannot write " + path);
    const std::string text = doc_.dump(2) + "\n";
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }

 private:
  std::string subcommand_;
  json doc_;
  std::string hash_;
};

std::uint64_t resolve_seed(CLI::Option* seed_opt, std::uint64_t seed_flag) {
  if (seed_opt->count() > 0) return seed_flag;
  std::random_device rd;
  const std::uint64_t seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  std::fprintf(stderr, "namegraph: no --seed given, using %llu\n",
               static_cast<unsigned long long>(seed));
  return seed;
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i == csv.size() || csv[i] == ',') {
      if (i > start) out.push_back(csv.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<const char*> c_strings(const std::vector<std::string>& v) {
  std::vector<const char*> out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.c_str());
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) die("cannot write " + path);
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"namegraph - name co-occurrence mining, ranking and "
               "recommendation toolkit"};
  app.require_subcommand(1);

  int threads = 0;  // 0 = hardware default
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  // ---- mine-cooc ----
  auto* mine = app.add_subcommand(
      "mine-cooc", "count name co-occurrences in a text corpus");
  std::string mine_lexicon, mine_input, mine_out, mine_mode = "sentence";
  bool mine_blank = false;
  int mine_max_names = 1000;
  mine->add_option("--lexicon", mine_lexicon, "name list, one per line")
      ->required();
  mine->add_option("--input", mine_input, "corpus file")->required();
  mine->add_option("--mode", mine_mode, "sentence|message")
      ->check(CLI::IsMember({"sentence", "message"}));
  mine->add_flag("--blank-delimited", mine_blank,
                 "documents separated by blank lines instead of one per line");
  mine->add_option("--max-names", mine_max_names,
                   "discard contexts with more matched names (0 = no cap)");
  mine->add_option("--out", mine_out, "edge list TSV output")->required();

  // ---- build-projection ----
  auto* proj = app.add_subcommand(
      "build-projection", "shared-interest projection graph from a usage log");
  std::string proj_log, proj_lexicon, proj_class = "enter", proj_out;
  proj->add_option("--log", proj_log, "activity log TSV")->required();
  proj->add_option("--lexicon", proj_lexicon, "optional name universe");
  proj->add_option("--class", proj_class, "enter|click|favorite")
      ->check(CLI::IsMember({"enter", "click", "favorite"}));
  proj->add_option("--out", proj_out, "edge list TSV output")->required();

  // ---- stats ----
  auto* stats = app.add_subcommand("stats", "network statistics of a graph");
  std::string stats_graph, stats_name = "graph", stats_out;
  std::int64_t stats_cap = 20000;
  stats->add_option("--graph", stats_graph, "edge list TSV")->required();
  stats->add_option("--name", stats_name, "row label in the output CSV");
  stats->add_option("--diameter-cap", stats_cap,
                    "exact diameter up to this component size");
  stats->add_option("--out", stats_out, "stats CSV output")->required();

  // ---- similarity ----
  auto* sim = app.add_subcommand(
      "similarity", "vertex similarities and category-reference analyses");
  std::string sim_graph, sim_categories, sim_pair, sim_metric = "jaccard",
              sim_out;
  bool sim_weighted = false, sim_profile = false;
  int sim_max_d = 6, sim_shuffles = 10;
  std::int64_t sim_bins = 0;
  std::uint64_t sim_seed = 0;
  sim->add_option("--graph", sim_graph, "edge list TSV")->required();
  sim->add_option("--categories", sim_categories, "name<TAB>category TSV");
  sim->add_option("--pair", sim_pair, "two names: A,B");
  sim->add_option("--metric", sim_metric, "jaccard|cosine")
      ->check(CLI::IsMember({"jaccard", "cosine"}));
  sim->add_flag("--weighted", sim_weighted, "use edge weights");
  sim->add_flag("--profile", sim_profile,
                "similarity vs. shortest-path distance profile");
  sim->add_option("--max-d", sim_max_d, "profile distance limit");
  sim->add_option("--null-shuffles", sim_shuffles,
                  "null-model shuffles for the profile");
  sim->add_option("--bins", sim_bins,
                  "bin count for the structural/semantic correlation");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "RNG seed");
  sim->add_option("--out", sim_out, "CSV output")->required();

  // ---- qap ----
  auto* qap = app.add_subcommand("qap",
                                 "graph correlation and QAP permutation test");
  std::string qap_g1, qap_g2, qap_out, qap_hist;
  std::int64_t qap_perms = 999;
  bool qap_binarize = false;
  std::uint64_t qap_seed = 0;
  qap->add_option("--graph1", qap_g1, "edge list TSV")->required();
  qap->add_option("--graph2", qap_g2, "edge list TSV")->required();
  qap->add_option("--permutations", qap_perms, "permutation count");
  qap->add_flag("--binarize", qap_binarize, "ignore edge weights");
  qap->add_option("--hist", qap_hist, "optional null-sample histogram CSV");
  auto* qap_seed_opt = qap->add_option("--seed", qap_seed, "RNG seed");
  qap->add_option("--out", qap_out, "result CSV output")->required();

  // ---- rank ----
  auto* rank = app.add_subcommand(
      "rank", "PageRank / preferential PageRank over a name graph");
  std::string rank_graph, rank_query, rank_kind, rank_out;
  double rank_alpha = 0.85, rank_tol = 1e-10;
  std::int64_t rank_max_iter = 1000;
  rank->add_option("--graph", rank_graph, "edge list TSV")->required();
  rank->add_option("--query", rank_query,
                   "comma-separated query names (personalized modes)");
  rank->add_option("--kind", rank_kind,
                   "pr|ppr|ppr+ (default: ppr when a query is given)");
  rank->add_option("--alpha", rank_alpha, "damping factor");
  rank->add_option("--tol", rank_tol, "l1 convergence tolerance");
  rank->add_option("--max-iter", rank_max_iter, "iteration cap");
  rank->add_option("--out", rank_out, "ranking CSV output")->required();

  // ---- recommend ----
  auto* rec = app.add_subcommand("recommend",
                                 "score one user with a trained recommender");
  std::string rec_log, rec_model = "ppr+", rec_user, rec_options, rec_out;
  std::int64_t rec_k = 10;
  std::uint64_t rec_seed = 0;
  rec->add_option("--log", rec_log, "activity log TSV")->required();
  rec->add_option("--model", rec_model, "ucf|icf|ppr|ppr+|wrmf|mp|random");
  rec->add_option("--user", rec_user, "user id from the log")->required();
  rec->add_option("-k,--top-k", rec_k, "list length");
  rec->add_option("--options", rec_options,
                  "model options as key=value[,key=value...]");
  auto* rec_seed_opt = rec->add_option("--seed", rec_seed, "RNG seed");
  rec->add_option("--out", rec_out, "recommendation CSV output")->required();

  // ---- evaluate ----
  auto* eval = app.add_subcommand(
      "evaluate", "offline protocol evaluation of recommender models");
  std::string eval_log, eval_config_path, eval_models, eval_protocol,
      eval_metric_ks, eval_out, eval_plot_dir, eval_pop_profile;
  std::int64_t eval_k = -1, eval_k_min = -1, eval_k_max = -1, eval_n_max = -1,
               eval_reps = -1, eval_min_history = -1, eval_ucf_neighbors = -2,
               eval_pop_shuffles = 10;
  double eval_alpha = -1, eval_tol = -1;
  bool eval_sign = false;
  std::uint64_t eval_seed = 0;
  eval->add_option("--log", eval_log, "activity log TSV")->required();
  eval->add_option("--config", eval_config_path,
                   "key=value config file (flags override it)");
  eval->add_option("--models", eval_models,
                   "comma separated: ppr+,ppr,ucf,icf,wrmf,mp,random");
  eval->add_option("--protocol", eval_protocol,
                   "take-k-in|leave-k-out|take-first-in|leave-last-out");
  eval->add_option("--k", eval_k, "protocol k");
  eval->add_option("--k-min", eval_k_min, "sweep lower bound");
  eval->add_option("--k-max", eval_k_max, "sweep upper bound");
  eval->add_option("--n-max", eval_n_max, "N_max test-trim parameter");
  eval->add_option("--repetitions", eval_reps, "random-split repetitions");
  eval->add_option("--min-history", eval_min_history,
                   "minimum distinct names per evaluated user");
  eval->add_option("--metric-ks", eval_metric_ks, "prefix metric cutoffs");
  eval->add_option("--alpha", eval_alpha, "PageRank damping factor");
  eval->add_option("--tol", eval_tol, "PageRank tolerance");
  eval->add_option("--ucf-neighbors", eval_ucf_neighbors,
                   "UCF nearest-neighbor count (-1 = all)");
  eval->add_flag("--sign-tests", eval_sign,
                 "pairwise sign tests on per-user average precision");
  eval->add_option("--emit-plot-data", eval_plot_dir,
                   "directory for scatter/correlation CSVs");
  eval->add_option("--popularity-profile", eval_pop_profile,
                   "also write the popularity-rank-per-position CSV");
  eval->add_option("--popularity-shuffles", eval_pop_shuffles,
                   "shuffled baselines for the popularity profile");
  auto* eval_seed_opt = eval->add_option("--seed", eval_seed, "master seed");
  eval->add_option("--out", eval_out, "results CSV output")->required();

  // ---- diversify ----
  auto* div = app.add_subcommand(
      "diversify",
      "multigraph-diversified rankings and accuracy/diversity sweeps");
  std::string div_log, div_stack, div_class = "enter", div_method,
      div_methods = "averank,multirank,prank", div_eta_path, div_eta_grid,
      div_query, div_protocol = "take-first-in", div_out;
  std::int64_t div_k = 5, div_min_history = -1;
  double div_alpha = 0.85, div_tol = 1e-10, div_interlayer = 1.0;
  std::uint64_t div_seed = 0;
  div->add_option("--stack", div_stack,
                  "stack manifest: layer_name<TAB>edge_list_path per line");
  div->add_option("--log", div_log, "activity log TSV (usage layer + eval)");
  div->add_option("--class", div_class, "activity class for the usage layer")
      ->check(CLI::IsMember({"enter", "click", "favorite"}));
  div->add_option("--method", div_method,
                  "averank|multirank|prank (single ranking mode)");
  div->add_option("--methods", div_methods, "sweep methods, comma separated");
  div->add_option("--eta", div_eta_path, "eta CSV (single ranking mode)");
  div->add_option("--eta-grid", div_eta_grid,
                  "sweep of diagonal eta values, comma separated");
  div->add_option("--query", div_query, "query names (single ranking mode)");
  div->add_option("--protocol", div_protocol, "evaluation protocol (sweep)");
  div->add_option("--k", div_k, "protocol k / top-k list length");
  div->add_option("--min-history", div_min_history, "eligibility threshold");
  div->add_option("--alpha", div_alpha, "damping factor");
  div->add_option("--tol", div_tol, "PageRank tolerance");
  div->add_option("--interlayer-weight", div_interlayer,
                  "weight of inter-layer edges");
  auto* div_seed_opt = div->add_option("--seed", div_seed, "RNG seed");
  div->add_option("--out", div_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw > 0 ? static_cast<int>(hw) : 1;
  }

  try {
    if (mine->parsed()) {
      Manifest manifest("mine-cooc", 0);
      manifest.flag("mode", mine_mode);
      manifest.flag("blank_delimited", mine_blank);
      manifest.flag("max_names", static_cast<std::int64_t>(mine_max_names));
      manifest.input(mine_lexicon);
      manifest.input(mine_input);

      ng_lexicon* lex_raw = nullptr;
      check(ng_lexicon_load(mine_lexicon.c_str(), &lex_raw));
      lexicon_ptr lex(lex_raw);
      ng_graph* g_raw = nullptr;
      check(ng_mine_cooccurrences(lex.get(), mine_input.c_str(),
                                  mine_mode == "sentence" ? 0 : 1,
                                  mine_blank ? 1 : 0, mine_max_names, threads,
                                  &g_raw));
      graph_ptr g(g_raw);
      check(ng_graph_save(g.get(), mine_out.c_str(), manifest.header().c_str()));
      manifest.save(mine_out);
      std::fprintf(stderr, "namegraph: %lld vertices, %lld edges\n",
                   static_cast<long long>(ng_graph_vertex_count(g.get())),
                   static_cast<long long>(ng_graph_edge_count(g.get())));
    } else if (proj->parsed()) {
      Manifest manifest("build-projection", 0);
      manifest.flag("class", proj_class);
      manifest.input(proj_log);
      lexicon_ptr lex;
      if (!proj_lexicon.empty()) {
        manifest.input(proj_lexicon);
        ng_lexicon* raw = nullptr;
        check(ng_lexicon_load(proj_lexicon.c_str(), &raw));
        lex.reset(raw);
      }
      ng_activity_log* log_raw = nullptr;
      check(ng_activity_log_load(proj_log.c_str(), lex.get(), &log_raw));
      log_ptr log(log_raw);
      ng_graph* g_raw = nullptr;
      check(ng_projection_build(log.get(), proj_class.c_str(), threads, &g_raw));
      graph_ptr g(g_raw);
      check(ng_graph_save(g.get(), proj_out.c_str(), manifest.header().c_str()));
      manifest.save(proj_out);
    } else if (stats->parsed()) {
      Manifest manifest("stats", 0);
      manifest.flag("name", stats_name);
      manifest.flag("diameter_cap", stats_cap);
      manifest.input(stats_graph);
      ng_graph* g_raw = nullptr;
      check(ng_graph_load(stats_graph.c_str(), &g_raw));
      graph_ptr g(g_raw);
      ng_graph_stats s{};
      check(ng_graph_compute_stats(g.get(), stats_cap, threads, &s));

      std::string csv = "# " + manifest.header() + "\n";
      csv += "graph,vertices,edges,density,wcc_count,lwcc_size,lwcc_diameter,"
             "diameter_exact\n";
      char line[512];
      std::snprintf(line, sizeof line, "%s,%lld,%lld,%.17g,%lld,%lld,%lld,%d\n",
                    stats_name.c_str(), static_cast<long long>(s.vertex_count),
                    static_cast<long long>(s.edge_count), s.density,
                    static_cast<long long>(s.wcc_count),
                    static_cast<long long>(s.lwcc_size),
                    static_cast<long long>(s.lwcc_diameter), s.diameter_exact);
      csv += line;
      write_text(stats_out, csv);
      manifest.save(stats_out);
    } else if (sim->parsed()) {
      const std::uint64_t seed = resolve_seed(sim_seed_opt, sim_seed);
      Manifest manifest("similarity", seed);
      manifest.flag("metric", sim_metric);
      manifest.flag("weighted", sim_weighted);
      manifest.input(sim_graph);
      ng_graph* g_raw = nullptr;
      check(ng_graph_load(sim_graph.c_str(), &g_raw));
      graph_ptr g(g_raw);

      if (!sim_pair.empty()) {
        manifest.flag("pair", sim_pair);
        const auto names = split_csv(sim_pair);
        if (names.size() != 2) die("--pair needs exactly two names", kExitUsage);
        double structural = 0;
        check(ng_vertex_similarity(g.get(), names[0].c_str(), names[1].c_str(),
                                   sim_metric.c_str(), sim_weighted ? 1 : 0,
                                   &structural));
        std::string semantic;
        if (!sim_categories.empty()) {
          manifest.input(sim_categories);
          ng_categories* cats_raw = nullptr;
          check(ng_categories_load(sim_categories.c_str(), g.get(), &cats_raw));
          categories_ptr cats(cats_raw);
          double sem = 0;
          check(ng_semantic_similarity(cats.get(), g.get(), names[0].c_str(),
                                       names[1].c_str(), &sem));
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.17g", sem);
          semantic = buf;
        }
        std::string csv = "# " + manifest.header() + "\n";
        csv += "name_a,name_b,metric,weighted,structural,semantic\n";
        char line[512];
        std::snprintf(line, sizeof line, "%s,%s,%s,%d,%.17g,%s\n",
                      names[0].c_str(), names[1].c_str(), sim_metric.c_str(),
                      sim_weighted ? 1 : 0, structural, semantic.c_str());
        csv += line;
        write_text(sim_out, csv);
        manifest.save(sim_out);
      } else if (sim_profile || sim_bins > 0) {
        if (sim_categories.empty())
          die("--categories is required for --profile/--bins", kExitUsage);
        manifest.input(sim_categories);
        ng_categories* cats_raw = nullptr;
        check(ng_categories_load(sim_categories.c_str(), g.get(), &cats_raw));
        categories_ptr cats(cats_raw);
        ng_table* t_raw = nullptr;
        if (sim_profile) {
          manifest.flag("max_d", static_cast<std::int64_t>(sim_max_d));
          manifest.flag("null_shuffles",
                        static_cast<std::int64_t>(sim_shuffles));
          check(ng_similarity_distance_profile(g.get(), cats.get(), sim_max_d,
                                               sim_shuffles, seed, threads,
                                               &t_raw));
        } else {
          manifest.flag("bins", sim_bins);
          check(ng_similarity_bins(g.get(), cats.get(), sim_metric.c_str(),
                                   sim_weighted ? 1 : 0, sim_bins, threads,
                                   &t_raw));
        }
        table_ptr t(t_raw);
        check(ng_table_save(t.get(), sim_out.c_str(), manifest.header().c_str()));
        manifest.save(sim_out);
      } else {
        die("similarity needs one of --pair, --profile or --bins", kExitUsage);
      }
    } else if (qap->parsed()) {
      const std::uint64_t seed = resolve_seed(qap_seed_opt, qap_seed);
      Manifest manifest("qap", seed);
      manifest.flag("permutations", qap_perms);
      manifest.flag("binarize", qap_binarize);
      manifest.input(qap_g1);
      manifest.input(qap_g2);
      ng_graph *g1_raw = nullptr, *g2_raw = nullptr;
      check(ng_graph_load(qap_g1.c_str(), &g1_raw));
      graph_ptr g1(g1_raw);
      check(ng_graph_load(qap_g2.c_str(), &g2_raw));
      graph_ptr g2(g2_raw);
      ng_qap_result result{};
      ng_table* hist_raw = nullptr;
      check(ng_qap_test(g1.get(), g2.get(), qap_perms, seed,
                        qap_binarize ? 1 : 0, 50, threads, &result,
                        qap_hist.empty() ? nullptr : &hist_raw));
      table_ptr hist(hist_raw);
      std::string csv = "# " + manifest.header() + "\n";
      csv += "rho,permutations,p_value\n";
      char line[256];
      std::snprintf(line, sizeof line, "%.17g,%lld,%.17g\n", result.rho,
                    static_cast<long long>(result.permutations),
                    result.p_value);
      csv += line;
      write_text(qap_out, csv);
      if (hist)
        check(ng_table_save(hist.get(), qap_hist.c_str(),
                            manifest.header().c_str()));
      manifest.save(qap_out);
    } else if (rank->parsed()) {
      Manifest manifest("rank", 0);
      const auto query = split_csv(rank_query);
      if (rank_kind.empty()) rank_kind = query.empty() ? "pr" : "ppr";
      manifest.flag("kind", rank_kind);
      manifest.flag("query", rank_query);
      manifest.flag("alpha", rank_alpha);
      manifest.flag("tol", rank_tol);
      manifest.flag("max_iter", rank_max_iter);
      manifest.input(rank_graph);
      ng_graph* g_raw = nullptr;
      check(ng_graph_load(rank_graph.c_str(), &g_raw));
      graph_ptr g(g_raw);
      const auto q = c_strings(query);
      ng_rank* r_raw = nullptr;
      check(ng_pagerank(g.get(), rank_kind.c_str(), q.data(), q.size(),
                        rank_alpha, rank_tol, rank_max_iter, threads, &r_raw));
      rank_ptr r(r_raw);
      check(ng_rank_save(r.get(), rank_out.c_str(), manifest.header().c_str()));
      manifest.save(rank_out);
    } else if (rec->parsed()) {
      const std::uint64_t seed = resolve_seed(rec_seed_opt, rec_seed);
      Manifest manifest("recommend", seed);
      manifest.flag("model", rec_model);
      manifest.flag("user", rec_user);
      manifest.flag("k", rec_k);
      manifest.flag("options", rec_options);
      manifest.input(rec_log);
      ng_activity_log* log_raw = nullptr;
      check(ng_activity_log_load(rec_log.c_str(), nullptr, &log_raw));
      log_ptr log(log_raw);
      ng_recommender* rec_raw = nullptr;
      check(ng_recommender_create(
          log.get(), rec_model.c_str(),
          rec_options.empty() ? nullptr : rec_options.c_str(), seed, threads,
          &rec_raw));
      recommender_ptr recommender(rec_raw);
      ng_table* t_raw = nullptr;
      check(ng_recommend(recommender.get(), rec_user.c_str(), rec_k, &t_raw));
      table_ptr t(t_raw);
      check(ng_table_save(t.get(), rec_out.c_str(), manifest.header().c_str()));
      manifest.save(rec_out);
    } else if (eval->parsed()) {
      const std::uint64_t seed = resolve_seed(eval_seed_opt, eval_seed);
      Manifest manifest("evaluate", seed);
      manifest.input(eval_log);

      ng_eval_config* cfg_raw = nullptr;
      if (!eval_config_path.empty()) {
        manifest.input(eval_config_path);
        check(ng_eval_config_load(eval_config_path.c_str(), &cfg_raw));
      } else {
        check(ng_eval_config_create(&cfg_raw));
      }
      eval_config_ptr cfg(cfg_raw);
      auto set = [&](const char* key, const std::string& value) {
        check(ng_eval_config_set(cfg.get(), key, value.c_str()));
        manifest.flag(key, value);
      };
      set("seed", std::to_string(seed));
      if (!eval_models.empty()) set("models", eval_models);
      if (!eval_protocol.empty()) set("protocol", eval_protocol);
      if (eval_k >= 0) set("k", std::to_string(eval_k));
      if (eval_k_min >= 0) set("k_min", std::to_string(eval_k_min));
      if (eval_k_max >= 0) set("k_max", std::to_string(eval_k_max));
      if (eval_n_max >= 0) set("n_max", std::to_string(eval_n_max));
      if (eval_reps >= 0) set("repetitions", std::to_string(eval_reps));
      if (eval_min_history >= 0)
        set("min_history", std::to_string(eval_min_history));
      if (!eval_metric_ks.empty()) set("metric_ks", eval_metric_ks);
      if (eval_alpha >= 0) set("alpha", std::to_string(eval_alpha));
      if (eval_tol >= 0) set("tol", std::to_string(eval_tol));
      if (eval_ucf_neighbors >= -1)
        set("ucf_neighbors", eval_ucf_neighbors < 0
                                 ? std::string("all")
                                 : std::to_string(eval_ucf_neighbors));
      if (eval_sign) set("emit_sign_tests", "1");
      if (!eval_plot_dir.empty()) {
        set("emit_scatter", "1");
        set("emit_metric_correlations", "1");
      }
      // execution detail, deliberately outside the manifest
      check(ng_eval_config_set(cfg.get(), "threads",
                               std::to_string(threads).c_str()));

      ng_activity_log* log_raw = nullptr;
      check(ng_activity_log_load(eval_log.c_str(), nullptr, &log_raw));
      log_ptr log(log_raw);
      ng_eval_result* res_raw = nullptr;
      check(ng_evaluate(log.get(), cfg.get(), &res_raw));
      eval_result_ptr res(res_raw);

      const std::string header =
          manifest.header() + "\nusers_evaluated " +
          std::to_string(ng_eval_result_users_evaluated(res.get())) +
          "\nusers_skipped " +
          std::to_string(ng_eval_result_users_skipped(res.get()));
      check(ng_table_save(ng_eval_result_table(res.get(), "results"),
                          eval_out.c_str(), header.c_str()));
      if (!eval_plot_dir.empty()) {
        const std::string dir = eval_plot_dir + "/";
        check(ng_table_save(ng_eval_result_table(res.get(), "scatter"),
                            (dir + "diversity_scatter.csv").c_str(),
                            header.c_str()));
        check(ng_table_save(
            ng_eval_result_table(res.get(), "metric_correlations"),
            (dir + "metric_correlations.csv").c_str(), header.c_str()));
      }
      if (eval_sign)
        check(ng_table_save(ng_eval_result_table(res.get(), "sign_tests"),
                            (eval_out + ".sign_tests.csv").c_str(),
                            header.c_str()));
      if (!eval_pop_profile.empty()) {
        ng_table* pop_raw = nullptr;
        check(ng_popularity_profile(log.get(), "enter",
                                    static_cast<int>(eval_pop_shuffles), seed,
                                    &pop_raw));
        table_ptr pop(pop_raw);
        check(ng_table_save(pop.get(), eval_pop_profile.c_str(),
                            manifest.header().c_str()));
      }
      manifest.save(eval_out);
    } else if (div->parsed()) {
      const std::uint64_t seed = resolve_seed(div_seed_opt, div_seed);
      Manifest manifest("diversify", seed);
      if (!div_stack.empty()) manifest.input(div_stack);
      if (!div_log.empty()) manifest.input(div_log);

      if (!div_method.empty()) {
        // single-ranking mode over an explicit stack + eta
        if (div_eta_path.empty()) die("--eta is required", kExitUsage);
        if (div_query.empty()) die("--query is required", kExitUsage);
        if (div_stack.empty() && div_log.empty())
          die("need --stack and/or --log", kExitUsage);
        manifest.flag("method", div_method);
        manifest.flag("query", div_query);
        manifest.input(div_eta_path);

        stack_ptr stack;
        {
          ng_stack* raw = nullptr;
          if (!div_log.empty()) {
            ng_activity_log* log_raw = nullptr;
            check(ng_activity_log_load(div_log.c_str(), nullptr, &log_raw));
            log_ptr log(log_raw);
            check(ng_stack_from_log(log.get(), div_class.c_str(),
                                    div_stack.empty() ? nullptr
                                                      : div_stack.c_str(),
                                    threads, &raw));
          } else {
            check(ng_stack_load(div_stack.c_str(), &raw));
          }
          stack.reset(raw);
        }
        // eta CSV: one row (averank) or L rows of L values
        std::vector<std::vector<double>> eta_rows;
        {
          std::FILE* f = std::fopen(div_eta_path.c_str(), "rb");
          if (!f) die("cannot read " + div_eta_path);
          std::string text;
          char buf[4096];
          std::size_t got;
          while ((got = std::fread(buf, 1, sizeof buf, f)) > 0)
            text.append(buf, got);
          std::fclose(f);
          std::size_t pos = 0;
          while (pos <= text.size()) {
            std::size_t eol = text.find('\n', pos);
            if (eol == std::string::npos) eol = text.size();
            std::string line = text.substr(pos, eol - pos);
            if (eol == text.size() && line.empty()) break;
            pos = eol + 1;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') {
              if (eol == text.size()) break;
              continue;
            }
            std::vector<double> row;
            for (const auto& tok : split_csv(line))
              row.push_back(std::stod(tok));
            if (!row.empty()) eta_rows.push_back(std::move(row));
            if (eol == text.size()) break;
          }
        }
        if (eta_rows.empty()) die("empty eta file");
        std::vector<double> eta_flat;
        for (const auto& row : eta_rows)
          eta_flat.insert(eta_flat.end(), row.begin(), row.end());
        const auto query = split_csv(div_query);
        const auto q = c_strings(query);
        ng_rank* r_raw = nullptr;
        check(ng_multigraph_rank(stack.get(), div_method.c_str(),
                                 eta_flat.data(), eta_rows.size(),
                                 eta_rows[0].size(), q.data(), q.size(),
                                 div_alpha, div_tol, 1000, div_interlayer,
                                 threads, &r_raw));
        rank_ptr r(r_raw);
        check(ng_rank_save(r.get(), div_out.c_str(),
                           manifest.header().c_str()));
        manifest.save(div_out);
      } else {
        // accuracy/diversity sweep
        if (div_log.empty()) die("--log is required for the sweep", kExitUsage);
        if (div_eta_grid.empty())
          die("--eta-grid is required for the sweep", kExitUsage);
        manifest.flag("methods", div_methods);
        manifest.flag("eta_grid", div_eta_grid);
        manifest.flag("protocol", div_protocol);
        manifest.flag("k", div_k);
        manifest.flag("interlayer_weight", div_interlayer);

        ng_activity_log* log_raw = nullptr;
        check(ng_activity_log_load(div_log.c_str(), nullptr, &log_raw));
        log_ptr log(log_raw);
        ng_stack* stack_raw = nullptr;
        check(ng_stack_from_log(log.get(), div_class.c_str(),
                                div_stack.empty() ? nullptr : div_stack.c_str(),
                                threads, &stack_raw));
        stack_ptr stack(stack_raw);

        ng_eval_config* cfg_raw = nullptr;
        check(ng_eval_config_create(&cfg_raw));
        eval_config_ptr cfg(cfg_raw);
        check(ng_eval_config_set(cfg.get(), "protocol", div_protocol.c_str()));
        check(ng_eval_config_set(cfg.get(), "k", std::to_string(div_k).c_str()));
        check(ng_eval_config_set(cfg.get(), "metric_ks",
                                 std::to_string(div_k).c_str()));
        check(ng_eval_config_set(cfg.get(), "seed",
                                 std::to_string(seed).c_str()));
        check(ng_eval_config_set(cfg.get(), "alpha",
                                 std::to_string(div_alpha).c_str()));
        check(ng_eval_config_set(cfg.get(), "tol",
                                 std::to_string(div_tol).c_str()));
        check(ng_eval_config_set(cfg.get(), "activity", div_class.c_str()));
        if (div_min_history >= 0)
          check(ng_eval_config_set(cfg.get(), "min_history",
                                   std::to_string(div_min_history).c_str()));
        check(ng_eval_config_set(cfg.get(), "threads",
                                 std::to_string(threads).c_str()));

        std::vector<double> grid;
        for (const auto& tok : split_csv(div_eta_grid))
          grid.push_back(std::stod(tok));
        ng_table* t_raw = nullptr;
        check(ng_diversify_experiment(stack.get(), log.get(), cfg.get(),
                                      div_methods.c_str(), grid.data(),
                                      grid.size(), &t_raw));
        table_ptr t(t_raw);
        check(ng_table_save(t.get(), div_out.c_str(),
                            manifest.header().c_str()));
        manifest.save(div_out);
      }
    }
  } catch (const std::exception& e) {
    die(e.what());
  }
  return kExitOk;
}
