#include "core/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/common.hpp"
#include "core/multigraph.hpp"
#include "core/parallel.hpp"
#include "core/strings.hpp"

namespace ng {

Protocol parse_protocol(std::string_view token) {
  if (token == "take-k-in" || token == "takekin") return Protocol::take_k_in;
  if (token == "leave-k-out" || token == "leavekout") return Protocol::leave_k_out;
  if (token == "take-first-in" || token == "takefirstin")
    return Protocol::take_first_in;
  if (token == "leave-last-out" || token == "leavelastout")
    return Protocol::leave_last_out;
  fail(Errc::invalid_argument, "unknown protocol: '" + std::string(token) + "'");
}

const char* protocol_name(Protocol p) {
  switch (p) {
    case Protocol::take_k_in: return "take-k-in";
    case Protocol::leave_k_out: return "leave-k-out";
    case Protocol::take_first_in: return "take-first-in";
    case Protocol::leave_last_out: return "leave-last-out";
  }
  return "?";
}

std::optional<Split> split_history(std::span<const std::int32_t> history,
                                   const SplitPlan& plan, Rng& rng) {
  if (plan.k < 1 || plan.k > plan.n_max)
    fail(Errc::invalid_argument, "need 1 <= k <= n_max");
  const std::int64_t h = static_cast<std::int64_t>(history.size());
  if (h < plan.min_history) return std::nullopt;

  Split split;
  auto take = [&](std::vector<std::uint32_t> idx, std::size_t test_count) {
    // first test_count shuffled indices form the test set, the complement of
    // the *initial* test draw is the training set
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const std::int32_t name = history[idx[i]];
      if (i < test_count) split.test.push_back(name);
      else split.train.push_back(name);
    }
  };

  switch (plan.protocol) {
    case Protocol::take_k_in: {
      // test drawn with size h-k, then shrunk by n_max-k
      const std::int64_t test_size = h - plan.n_max;
      if (test_size < 1 || h <= plan.k) return std::nullopt;
      auto idx = rng.sample_without_replacement(static_cast<std::uint64_t>(h),
                                                static_cast<std::uint64_t>(h));
      // first h-k indices are the drawn test pool (random order), of which
      // the first h-n_max survive the shrink; the final k are training
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const std::int32_t name = history[idx[i]];
        if (i < static_cast<std::size_t>(test_size)) split.test.push_back(name);
        else if (i >= static_cast<std::size_t>(h - plan.k))
          split.train.push_back(name);
      }
      break;
    }
    case Protocol::leave_k_out: {
      if (h <= plan.k) return std::nullopt;
      auto idx = rng.sample_without_replacement(static_cast<std::uint64_t>(h),
                                                static_cast<std::uint64_t>(h));
      take(std::move(idx), static_cast<std::size_t>(plan.k));
      break;
    }
    case Protocol::take_first_in: {
      const std::int64_t pool = h - plan.k;
      const std::int64_t test_size = h - plan.n_max;
      if (test_size < 1 || pool < 1) return std::nullopt;
      for (std::int64_t i = 0; i < plan.k; ++i)
        split.train.push_back(history[static_cast<std::size_t>(i)]);
      auto idx = rng.sample_without_replacement(
          static_cast<std::uint64_t>(pool), static_cast<std::uint64_t>(test_size));
      for (std::uint32_t off : idx)
        split.test.push_back(history[static_cast<std::size_t>(plan.k) + off]);
      break;
    }
    case Protocol::leave_last_out: {
      if (h <= plan.k) return std::nullopt;
      for (std::int64_t i = 0; i < h - plan.k; ++i)
        split.train.push_back(history[static_cast<std::size_t>(i)]);
      for (std::int64_t i = h - plan.k; i < h; ++i)
        split.test.push_back(history[static_cast<std::size_t>(i)]);
      break;
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  if (split.train.empty() || split.test.empty()) return std::nullopt;
  return split;
}

std::vector<std::int32_t> EvalConfig::ks() const {
  if (k_min > 0 && k_max >= k_min) {
    std::vector<std::int32_t> out;
    for (std::int32_t k = k_min; k <= k_max; ++k) out.push_back(k);
    return out;
  }
  return {plan.k};
}

void EvalConfig::set(std::string_view key, std::string_view value) {
  auto want_int = [&](std::string_view v) {
    auto n = parse_int(v);
    if (!n) fail(Errc::parse, "bad integer for " + std::string(key));
    return *n;
  };
  auto want_double = [&](std::string_view v) {
    auto d = parse_double(v);
    if (!d) fail(Errc::parse, "bad number for " + std::string(key));
    return *d;
  };
  if (key == "models") {
    models.clear();
    for (auto tok : split(value, ','))
      if (!trim(tok).empty()) models.push_back(parse_model(trim(tok)));
  } else if (key == "protocol") {
    plan.protocol = parse_protocol(trim(value));
  } else if (key == "k") {
    plan.k = static_cast<std::int32_t>(want_int(value));
  } else if (key == "k_min") {
    k_min = static_cast<std::int32_t>(want_int(value));
  } else if (key == "k_max") {
    k_max = static_cast<std::int32_t>(want_int(value));
  } else if (key == "n_max") {
    plan.n_max = static_cast<std::int32_t>(want_int(value));
  } else if (key == "repetitions") {
    plan.repetitions = static_cast<std::int32_t>(want_int(value));
  } else if (key == "seed") {
    plan.seed = static_cast<std::uint64_t>(want_int(value));
  } else if (key == "min_history") {
    plan.min_history = static_cast<std::int32_t>(want_int(value));
  } else if (key == "activity") {
    activity = parse_activity(trim(value));
  } else if (key == "metric_ks") {
    metric_ks.clear();
    for (auto tok : split(value, ','))
      metric_ks.push_back(static_cast<std::int32_t>(want_int(tok)));
  } else if (key == "alpha") {
    alpha = want_double(value);
  } else if (key == "tol") {
    tol = want_double(value);
  } else if (key == "max_iter") {
    max_iter = want_int(value);
  } else if (key == "similarity") {
    const auto v = trim(value);
    if (v == "llr" || v == "loglikelihood") similarity = SimilarityKind::loglikelihood;
    else if (v == "cosine") similarity = SimilarityKind::cosine;
    else fail(Errc::parse, "unknown similarity: '" + std::string(v) + "'");
  } else if (key == "ucf_neighbors") {
    const auto v = trim(value);
    if (v == "all") ucf_neighbors.reset();
    else ucf_neighbors = static_cast<std::int32_t>(want_int(v));
  } else if (key == "wrmf_d") {
    wrmf.dimensions = static_cast<std::int32_t>(want_int(value));
  } else if (key == "wrmf_lambda") {
    wrmf.lambda = want_double(value);
  } else if (key == "wrmf_alpha_c") {
    wrmf.alpha_c = want_double(value);
  } else if (key == "wrmf_iters") {
    wrmf.iterations = static_cast<std::int32_t>(want_int(value));
  } else if (key == "emit_scatter") {
    emit_scatter = want_int(value) != 0;
  } else if (key == "emit_sign_tests") {
    emit_sign_tests = want_int(value) != 0;
  } else if (key == "emit_metric_correlations") {
    emit_metric_correlations = want_int(value) != 0;
  } else if (key == "threads") {
    threads = static_cast<int>(want_int(value));
  } else {
    fail(Errc::parse, "unknown config key: '" + std::string(key) + "'");
  }
}

EvalConfig EvalConfig::parse_kv(std::string_view text, const std::string& origin) {
  EvalConfig config;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++line_no;
    std::string_view line = trim(chomp_cr(text.substr(pos, eol - pos)));
    pos = eol + 1;
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      fail(Errc::parse, origin + ":" + format_int(static_cast<std::int64_t>(line_no)) +
                            ": expected key=value");
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

namespace {

struct UserEval {
  bool evaluated = false;
  double avep = 0;
  double ndcg = 0;
  std::vector<double> precision;  // per metric_k
  std::vector<double> recall;
  std::vector<double> ndcg_at;
  std::vector<std::int32_t> top;  // top metric_ks[0] items (scatter)
};

struct ModelRun {
  // per user slots for one (model, k, repetition)
  std::vector<UserEval> users;
};

// pairs of u's affiliations that involve at least one test item; removing
// them from the projection graph is exactly the r~ masking for user u
std::unordered_map<std::uint64_t, double> projection_delta(
    std::span<const std::int32_t> full_items, const Split& split) {
  std::unordered_map<std::uint64_t, double> delta;
  for (std::size_t i = 0; i < full_items.size(); ++i) {
    const bool i_test =
        std::binary_search(split.test.begin(), split.test.end(), full_items[i]);
    for (std::size_t j = i + 1; j < full_items.size(); ++j) {
      const bool j_test = std::binary_search(split.test.begin(),
                                             split.test.end(), full_items[j]);
      if (!i_test && !j_test) continue;
      delta[EdgeAccumulator::key(full_items[i], full_items[j])] -= 1.0;
    }
  }
  return delta;
}

}  // namespace

ExperimentResult run_experiment(const ActivityLog& log, const EvalConfig& config) {
  ExperimentResult out;
  if (config.models.empty())
    fail(Errc::invalid_argument, "no models configured");
  if (config.metric_ks.empty())
    fail(Errc::invalid_argument, "metric_ks must not be empty");

  const InteractionMatrix& base = log.matrix(config.activity);
  const std::int32_t user_count = log.user_count();
  const std::int32_t name_count = log.names().size();

  // chronological distinct histories, once
  std::vector<std::vector<std::int32_t>> histories(
      static_cast<std::size_t>(user_count));
  std::vector<std::int32_t> eligible;
  for (std::int32_t u = 0; u < user_count; ++u) {
    histories[static_cast<std::size_t>(u)] = log.history(u, config.activity);
    if (static_cast<std::int32_t>(histories[static_cast<std::size_t>(u)].size()) >=
        config.plan.min_history)
      eligible.push_back(u);
    else if (!histories[static_cast<std::size_t>(u)].empty())
      ++out.users_skipped;
  }
  out.users_evaluated = static_cast<std::int64_t>(eligible.size());

  const bool needs_projection =
      std::find(config.models.begin(), config.models.end(), Model::ppr) !=
          config.models.end() ||
      std::find(config.models.begin(), config.models.end(), Model::ppr_plus) !=
          config.models.end();
  Graph projection;
  if (needs_projection)
    projection = build_projection(log, config.activity, config.threads);

  const bool needs_wrmf =
      std::find(config.models.begin(), config.models.end(), Model::wrmf) !=
      config.models.end();

  const std::size_t nk = config.metric_ks.size();
  const std::int32_t scatter_k = config.metric_ks.front();

  // metric name strings (stable order)
  std::vector<std::string> metric_names;
  for (std::int32_t mk : config.metric_ks) {
    metric_names.push_back("precision@" + format_int(static_cast<std::int64_t>(mk)));
    metric_names.push_back("recall@" + format_int(static_cast<std::int64_t>(mk)));
    metric_names.push_back("ndcg@" + format_int(static_cast<std::int64_t>(mk)));
  }
  metric_names.push_back("ndcg");
  metric_names.push_back("map");

  // (model, k) -> mean metric values over repetitions (for tau analysis)
  std::map<std::pair<std::size_t, std::int32_t>, std::vector<double>> sweep_means;
  // (model) -> per-user avep sums over reps of the final k (sign tests)
  std::map<std::size_t, std::vector<double>> avep_by_model;
  std::map<std::size_t, std::vector<double>> personalization_sums;
  std::map<std::size_t, double> precision_sums;

  for (std::int32_t k : config.ks()) {
    SplitPlan plan = config.plan;
    plan.k = k;

    // accumulated over repetitions: [model][metric] mean values
    std::vector<std::vector<double>> rep_mean_acc(
        config.models.size(), std::vector<double>(metric_names.size(), 0.0));

    for (std::int32_t rep = 0; rep < plan.repetitions; ++rep) {
      // 1. splits for every eligible user
      std::vector<std::optional<Split>> splits(static_cast<std::size_t>(user_count));
      for (std::int32_t u : eligible) {
        Rng rng = Rng::derive(plan.seed, static_cast<std::uint64_t>(u),
                              static_cast<std::uint64_t>(rep),
                              static_cast<std::uint64_t>(k));
        splits[static_cast<std::size_t>(u)] =
            split_history(histories[static_cast<std::size_t>(u)], plan, rng);
      }

      // 2. WRMF trains once per repetition on the union mask
      FactorModel wrmf_model;
      if (needs_wrmf) {
        MaskedMatrix all_masked(base);
        for (std::int32_t u : eligible)
          if (splits[static_cast<std::size_t>(u)])
            all_masked.hide(u, splits[static_cast<std::size_t>(u)]->test);
        WrmfOptions w = config.wrmf;
        w.seed = Rng::derive(plan.seed, 0x77f3, static_cast<std::uint64_t>(rep),
                             static_cast<std::uint64_t>(k))
                     .next();
        w.threads = config.threads;
        wrmf_model = wrmf_train(all_masked, w);
      }

      // 3. per-user, per-model scoring
      std::vector<ModelRun> runs(config.models.size());
      for (auto& r : runs)
        r.users.assign(static_cast<std::size_t>(user_count), UserEval{});

      const std::int64_t ne = static_cast<std::int64_t>(eligible.size());
      parallel_blocks(ne, 4, config.threads, [&](std::int64_t, std::int64_t lo,
                                                 std::int64_t hi) {
        for (std::int64_t ei = lo; ei < hi; ++ei) {
          const std::int32_t u = eligible[static_cast<std::size_t>(ei)];
          const auto& maybe_split = splits[static_cast<std::size_t>(u)];
          if (!maybe_split) continue;
          const Split& split = *maybe_split;

          MaskedMatrix masked(base);
          masked.hide(u, split.test);

          // masked projection for the PageRank models (shared by ppr/ppr+)
          std::unique_ptr<StochasticMatrix> patched;
          std::unique_ptr<RankEngine> engine;
          if (needs_projection) {
            auto full_items = base.user_items(u);
            auto delta = projection_delta(full_items, split);
            patched = std::make_unique<StochasticMatrix>(
                delta.empty()
                    ? StochasticMatrix::from_graph(projection)
                    : StochasticMatrix::from_graph_with_deltas(projection, delta));
            engine = std::make_unique<RankEngine>(*patched);
          }
          PowerIterOptions pi{config.alpha, config.tol, config.max_iter, 1,
                              nullptr};

          for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
            const Model model = config.models[mi];
            RankedList ranking;
            try {
              switch (model) {
                case Model::ucf:
                  ranking = ucf_scores(masked, u, config.similarity,
                                       config.ucf_neighbors);
                  break;
                case Model::icf:
                  ranking = icf_scores(masked, u, config.similarity);
                  break;
                case Model::ppr:
                  ranking = namerank_scores(*patched, *engine, split.train,
                                            name_count, pi, false);
                  break;
                case Model::ppr_plus:
                  ranking = namerank_scores(*patched, *engine, split.train,
                                            name_count, pi, true);
                  break;
                case Model::wrmf:
                  ranking = wrmf_scores(wrmf_model, u, split.train);
                  break;
                case Model::most_popular:
                  ranking = most_popular_scores(masked, split.train);
                  break;
                case Model::random: {
                  Rng rng = Rng::derive(
                      plan.seed, static_cast<std::uint64_t>(u),
                      (static_cast<std::uint64_t>(rep) << 32) |
                          static_cast<std::uint64_t>(k),
                      0x9d2c0000ULL + static_cast<std::uint64_t>(mi));
                  ranking = random_scores(name_count, split.train, rng);
                  break;
                }
              }
            } catch (const Error&) {
              // cold profile: rank nothing, test items fall to the tail
              std::vector<double> zeros(static_cast<std::size_t>(name_count), 0.0);
              ranking = build_ranking(name_count, split.train, zeros, 0);
            }

            UserEval& ue = runs[mi].users[static_cast<std::size_t>(u)];
            ue.evaluated = true;
            const auto hits = hit_positions(ranking, split.test);
            const auto test_size = static_cast<std::int64_t>(split.test.size());
            ue.precision.resize(nk);
            ue.recall.resize(nk);
            ue.ndcg_at.resize(nk);
            for (std::size_t ki = 0; ki < nk; ++ki) {
              const auto pm =
                  prefix_metrics(hits, test_size, config.metric_ks[ki]);
              ue.precision[ki] = pm.precision;
              ue.recall[ki] = pm.recall;
              ue.ndcg_at[ki] = pm.ndcg;
            }
            ue.ndcg = ndcg_full(hits, test_size,
                                static_cast<std::int64_t>(ranking.order.size()));
            ue.avep = average_precision(hits, test_size);
            const std::size_t top_n = std::min<std::size_t>(
                static_cast<std::size_t>(scatter_k), ranking.order.size());
            ue.top.assign(ranking.order.begin(),
                          ranking.order.begin() + static_cast<std::ptrdiff_t>(top_n));
          }
        }
      });

      // 4. fold into per-repetition means and emit rows
      for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
        std::vector<double> sums(metric_names.size(), 0.0);
        std::int64_t counted = 0;
        for (std::int32_t u : eligible) {
          const UserEval& ue = runs[mi].users[static_cast<std::size_t>(u)];
          if (!ue.evaluated) continue;
          ++counted;
          std::size_t col = 0;
          for (std::size_t ki = 0; ki < nk; ++ki) {
            sums[col++] += ue.precision[ki];
            sums[col++] += ue.recall[ki];
            sums[col++] += ue.ndcg_at[ki];
          }
          sums[col++] += ue.ndcg;
          sums[col++] += ue.avep;
        }
        for (std::size_t c = 0; c < sums.size(); ++c) {
          const double mean =
              counted > 0 ? sums[c] / static_cast<double>(counted) : 0.0;
          rep_mean_acc[mi][c] += mean;
          out.results.row()
              .str(model_name(config.models[mi]))
              .str(protocol_name(plan.protocol))
              .num(static_cast<std::int64_t>(k))
              .num(static_cast<std::int64_t>(rep))
              .str(metric_names[c])
              .num(mean);
        }

        // sign-test accumulation (per-user avep means over reps, last k)
        if (config.emit_sign_tests && k == config.ks().back()) {
          auto& slot = avep_by_model[mi];
          slot.resize(static_cast<std::size_t>(user_count), 0.0);
          for (std::int32_t u : eligible) {
            const UserEval& ue = runs[mi].users[static_cast<std::size_t>(u)];
            if (ue.evaluated)
              slot[static_cast<std::size_t>(u)] +=
                  ue.avep / static_cast<double>(plan.repetitions);
          }
        }

        // personalization over user pairs on the top lists (last k only)
        if (config.emit_scatter && k == config.ks().back()) {
          double h_sum = 0;
          std::int64_t h_pairs = 0;
          double prec_sum = 0;
          std::int64_t prec_count = 0;
          std::vector<const UserEval*> evaluated;
          for (std::int32_t u : eligible) {
            const UserEval& ue = runs[mi].users[static_cast<std::size_t>(u)];
            if (!ue.evaluated) continue;
            evaluated.push_back(&ue);
            prec_sum += ue.precision[0];
            ++prec_count;
          }
          for (std::size_t a = 0; a < evaluated.size(); ++a)
            for (std::size_t b = a + 1; b < evaluated.size(); ++b) {
              if (evaluated[a]->top.empty() || evaluated[b]->top.empty())
                continue;
              if (evaluated[a]->top.size() != evaluated[b]->top.size()) continue;
              h_sum += personalization_index(evaluated[a]->top, evaluated[b]->top);
              ++h_pairs;
            }
          auto& pslot = personalization_sums[mi];
          pslot.push_back(h_pairs > 0 ? h_sum / static_cast<double>(h_pairs)
                                      : 0.0);
          precision_sums[mi] +=
              (prec_count > 0 ? prec_sum / static_cast<double>(prec_count)
                              : 0.0) /
              static_cast<double>(plan.repetitions);
        }
      }
    }

    // mean-over-repetition rows
    for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
      std::vector<double> means(metric_names.size());
      for (std::size_t c = 0; c < metric_names.size(); ++c) {
        means[c] = rep_mean_acc[mi][c] /
                   static_cast<double>(config.plan.repetitions);
        out.results.row()
            .str(model_name(config.models[mi]))
            .str(protocol_name(config.plan.protocol))
            .num(static_cast<std::int64_t>(k))
            .str("mean")
            .str(metric_names[c])
            .num(means[c]);
      }
      sweep_means[{mi, k}] = std::move(means);
    }
  }

  // sign tests on per-user AveP (paired across models)
  if (config.emit_sign_tests && config.models.size() > 1) {
    const std::int32_t k = config.ks().back();
    for (std::size_t a = 0; a < config.models.size(); ++a) {
      for (std::size_t b = a + 1; b < config.models.size(); ++b) {
        const auto& va = avep_by_model[a];
        const auto& vb = avep_by_model[b];
        std::vector<double> pa, pb;
        for (std::int32_t u : eligible) {
          pa.push_back(va[static_cast<std::size_t>(u)]);
          pb.push_back(vb[static_cast<std::size_t>(u)]);
        }
        try {
          const SignTestResult st = sign_test(pa, pb);
          out.sign_tests.row()
              .num(static_cast<std::int64_t>(k))
              .str("map")
              .str(model_name(config.models[a]))
              .str(model_name(config.models[b]))
              .num(st.n_a)
              .num(st.n_b)
              .num(st.p_value);
        } catch (const Error&) {
          // all ties: no row
        }
      }
    }
  }

  // Kendall tau between metric-induced rankings of the (model, k) settings
  if (config.emit_metric_correlations && sweep_means.size() > 1) {
    const std::size_t n_metrics = metric_names.size();
    std::vector<std::vector<double>> columns(n_metrics);
    for (const auto& [key, values] : sweep_means)
      for (std::size_t c = 0; c < n_metrics; ++c)
        columns[c].push_back(values[c]);
    for (std::size_t a = 0; a < n_metrics; ++a)
      for (std::size_t b = a + 1; b < n_metrics; ++b) {
        double tau;
        try {
          tau = kendall_tau(columns[a], columns[b]);
        } catch (const Error&) {
          continue;
        }
        out.metric_correlations.row()
            .str(metric_names[a])
            .str(metric_names[b])
            .num(tau);
      }
  }

  // scatter rows (eta blank: no diversification parameter here)
  if (config.emit_scatter) {
    for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
      const auto& hs = personalization_sums[mi];
      double h = 0;
      for (double v : hs) h += v;
      if (!hs.empty()) h /= static_cast<double>(hs.size());
      out.scatter.row()
          .str(model_name(config.models[mi]))
          .str("")
          .num(h)
          .num(precision_sums[mi]);
    }
  }
  return out;
}

Table popularity_rank_profile(const ActivityLog& log, Activity activity,
                              std::int32_t shuffles, std::uint64_t seed) {
  const std::int32_t name_count = log.names().size();
  std::vector<std::int64_t> freq(static_cast<std::size_t>(name_count), 0);
  for (std::int32_t u = 0; u < log.user_count(); ++u)
    for (const auto& r : log.user_records(u))
      if (r.activity == activity) ++freq[static_cast<std::size_t>(r.name)];

  std::vector<std::int32_t> order(static_cast<std::size_t>(name_count));
  for (std::int32_t i = 0; i < name_count; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    if (freq[static_cast<std::size_t>(a)] != freq[static_cast<std::size_t>(b)])
      return freq[static_cast<std::size_t>(a)] > freq[static_cast<std::size_t>(b)];
    return a < b;
  });
  std::vector<std::int64_t> rank(static_cast<std::size_t>(name_count), 0);
  for (std::size_t i = 0; i < order.size(); ++i)
    rank[static_cast<std::size_t>(order[i])] = static_cast<std::int64_t>(i) + 1;

  std::vector<std::vector<std::int32_t>> histories;
  std::size_t max_len = 0;
  for (std::int32_t u = 0; u < log.user_count(); ++u) {
    auto h = log.history(u, activity);
    if (h.empty()) continue;
    max_len = std::max(max_len, h.size());
    histories.push_back(std::move(h));
  }

  std::vector<double> sum(max_len, 0.0), null_sum(max_len, 0.0);
  std::vector<std::int64_t> count(max_len, 0);
  for (const auto& h : histories)
    for (std::size_t p = 0; p < h.size(); ++p) {
      sum[p] += static_cast<double>(rank[static_cast<std::size_t>(h[p])]);
      ++count[p];
    }
  for (std::int32_t s = 0; s < shuffles; ++s) {
    for (std::size_t ui = 0; ui < histories.size(); ++ui) {
      auto h = histories[ui];
      Rng rng = Rng::derive(seed, 0x5aff, ui, static_cast<std::uint64_t>(s));
      rng.shuffle(h);
      for (std::size_t p = 0; p < h.size(); ++p)
        null_sum[p] += static_cast<double>(rank[static_cast<std::size_t>(h[p])]);
    }
  }

  Table t({"position", "mean_rank", "count", "null_mean"});
  for (std::size_t p = 0; p < max_len; ++p) {
    if (count[p] == 0) continue;
    auto row = t.row();
    row.num(static_cast<std::int64_t>(p) + 1)
        .num(sum[p] / static_cast<double>(count[p]))
        .num(count[p]);
    if (shuffles > 0)
      row.num(null_sum[p] / static_cast<double>(count[p] * shuffles));
    else
      row.empty();
  }
  return t;
}

Table diversify_experiment(const GraphStack& stack, const ActivityLog& log,
                           const EvalConfig& config,
                           std::span<const MultigraphMethod> methods,
                           std::span<const double> eta_grid,
                           double interlayer_weight) {
  Table out({"model", "eta", "personalization", "precision"});
  if (methods.empty() || eta_grid.empty())
    fail(Errc::invalid_argument, "need at least one method and one eta value");
  if (stack.layer_count() < 1) fail(Errc::invalid_argument, "empty stack");
  const std::int32_t L = stack.layer_count();
  const std::int32_t top_k = config.metric_ks.empty() ? 5 : config.metric_ks.front();

  // map log name ids into the stack universe
  const std::int32_t log_names = log.names().size();
  std::vector<std::int32_t> to_stack(static_cast<std::size_t>(log_names), -1);
  for (std::int32_t i = 0; i < log_names; ++i)
    to_stack[static_cast<std::size_t>(i)] = stack.names->id_of(log.names().name(i));

  struct UserCase {
    std::int32_t user;
    std::vector<std::int32_t> train_stack;  // sorted stack ids
    std::vector<std::int32_t> test_stack;   // sorted stack ids
    std::unordered_map<std::uint64_t, double> delta;  // layer-0 mask
  };
  std::vector<UserCase> cases;
  for (std::int32_t u = 0; u < log.user_count(); ++u) {
    auto history = log.history(u, config.activity);
    if (static_cast<std::int32_t>(history.size()) < config.plan.min_history)
      continue;
    Rng rng = Rng::derive(config.plan.seed, static_cast<std::uint64_t>(u), 0,
                          static_cast<std::uint64_t>(config.plan.k));
    auto maybe = split_history(history, config.plan, rng);
    if (!maybe) continue;
    UserCase c;
    c.user = u;
    // test = everything outside the training set (no trimming here)
    for (std::int32_t name : history) {
      const std::int32_t sid = to_stack[static_cast<std::size_t>(name)];
      if (sid < 0) continue;
      if (std::binary_search(maybe->train.begin(), maybe->train.end(), name))
        c.train_stack.push_back(sid);
      else
        c.test_stack.push_back(sid);
    }
    std::sort(c.train_stack.begin(), c.train_stack.end());
    std::sort(c.test_stack.begin(), c.test_stack.end());
    if (c.train_stack.empty() || c.test_stack.empty()) continue;
    // masking: drop u's co-affiliation pairs that touch a held-out name
    std::vector<std::int32_t> all_items(c.train_stack);
    all_items.insert(all_items.end(), c.test_stack.begin(), c.test_stack.end());
    std::sort(all_items.begin(), all_items.end());
    for (std::size_t i = 0; i < all_items.size(); ++i) {
      const bool i_test = std::binary_search(c.test_stack.begin(),
                                             c.test_stack.end(), all_items[i]);
      for (std::size_t j = i + 1; j < all_items.size(); ++j) {
        const bool j_test = std::binary_search(c.test_stack.begin(),
                                               c.test_stack.end(), all_items[j]);
        if (!i_test && !j_test) continue;
        c.delta[EdgeAccumulator::key(all_items[i], all_items[j])] -= 1.0;
      }
    }
    cases.push_back(std::move(c));
  }

  for (MultigraphMethod method : methods) {
    for (double eta_value : eta_grid) {
      EtaMatrix eta = method == MultigraphMethod::averank
                          ? EtaMatrix::vector_mix(L, eta_value)
                          : EtaMatrix::mix(L, eta_value);
      MultigraphOptions options;
      options.interlayer_weight = interlayer_weight;
      options.power = {config.alpha, config.tol, config.max_iter, 1, nullptr};

      std::vector<std::vector<std::int32_t>> tops(cases.size());
      std::vector<double> precisions(cases.size(), 0.0);
      const std::int64_t nc = static_cast<std::int64_t>(cases.size());
      parallel_blocks(nc, 1, config.threads, [&](std::int64_t, std::int64_t lo,
                                                 std::int64_t hi) {
        for (std::int64_t ci = lo; ci < hi; ++ci) {
          const UserCase& c = cases[static_cast<std::size_t>(ci)];
          GraphStack masked;
          masked.names = stack.names;
          masked.layer_names = stack.layer_names;
          masked.layers.reserve(stack.layers.size());
          masked.layers.push_back(patch_graph(stack.layers.front(), c.delta));
          for (std::size_t l = 1; l < stack.layers.size(); ++l)
            masked.layers.push_back(stack.layers[l]);

          RankVector rank =
              multigraph_rank(masked, method, eta, c.train_stack, options);
          RankedList ranking = build_ranking(stack.names->size(), c.train_stack,
                                             rank.scores);
          const auto hits = hit_positions(ranking, c.test_stack);
          precisions[static_cast<std::size_t>(ci)] =
              prefix_metrics(hits, static_cast<std::int64_t>(c.test_stack.size()),
                             top_k)
                  .precision;
          const std::size_t n_top = std::min<std::size_t>(
              static_cast<std::size_t>(top_k), ranking.order.size());
          tops[static_cast<std::size_t>(ci)].assign(
              ranking.order.begin(),
              ranking.order.begin() + static_cast<std::ptrdiff_t>(n_top));
        }
      });

      double h_sum = 0;
      std::int64_t h_pairs = 0;
      for (std::size_t a = 0; a < tops.size(); ++a)
        for (std::size_t b = a + 1; b < tops.size(); ++b) {
          if (tops[a].size() != tops[b].size() || tops[a].empty()) continue;
          h_sum += personalization_index(tops[a], tops[b]);
          ++h_pairs;
        }
      double prec = 0;
      for (double p : precisions) prec += p;
      if (!cases.empty()) prec /= static_cast<double>(cases.size());

      out.row()
          .str(multigraph_method_name(method))
          .num(eta_value)
          .num(h_pairs > 0 ? h_sum / static_cast<double>(h_pairs) : 0.0)
          .num(prec);
    }
  }
  return out;
}

}  // namespace ng
