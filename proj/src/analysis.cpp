#include "prefnet/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>

#include "prefnet/parallel.hpp"

namespace prefnet {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
};

MeanStderr mean_stderr(std::span<const double> values) {
  MeanStderr out;
  const auto n = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

std::ofstream create_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

}  // namespace

std::vector<ModelValidation> validate_models(const Network& net, int topics, int r,
                                             std::span<const SpreadModel> models,
                                             std::uint64_t seed, int threads) {
  const Rng base(seed);
  const int grid = max_raw_distance(r) + 1;
  const PermSpace* space = r <= 7 ? &PermSpace::get(r) : nullptr;

  std::vector<ModelValidation> out;
  for (const SpreadModel model : models) {
    const auto t0 = std::chrono::steady_clock::now();
    SpreadConfig cfg;
    cfg.model = model;
    cfg.topics = topics;
    cfg.r = r;
    cfg.seed = base.derive(spread_model_name(model)).key();
    cfg.threads = threads;
    const TopicProfiles profiles = simulate(net, cfg);

    const int m = net.edge_count();
    std::vector<double> kl(static_cast<std::size_t>(m));
    std::vector<double> emd_err(static_cast<std::size_t>(m));
    std::vector<double> mean_diff(static_cast<std::size_t>(m));
    std::vector<char> fail(static_cast<std::size_t>(m));
    parallel_for(static_cast<std::size_t>(m), threads, [&](std::size_t e) {
      const Edge& edge = net.edge(static_cast<int>(e));
      std::vector<double> hist(static_cast<std::size_t>(grid), 0.0);
      for (int t = 0; t < topics; ++t) {
        const std::uint16_t a = profiles.at(t, edge.u);
        const std::uint16_t b = profiles.at(t, edge.v);
        int d;
        if (space != nullptr) {
          d = space->distance(a, b);
        } else {
          Alt pa[8], pb[8];
          perm_unrank(r, a, pa);
          perm_unrank(r, b, pb);
          d = kendall_tau(Preference(std::vector<Alt>(pa, pa + r)),
                          Preference(std::vector<Alt>(pb, pb + r)));
        }
        hist[static_cast<std::size_t>(d)] += 1.0;
      }
      std::vector<double> pmf(hist);
      for (auto& v : pmf) v /= static_cast<double>(topics);
      const DiscreteDist empirical(r, std::move(pmf));
      const DiscreteDist model_dist = discretize(edge.params, r);
      kl[e] = kl_divergence(empirical, model_dist);
      emd_err[e] = emd(empirical, model_dist);
      mean_diff[e] = std::abs(empirical.mean() - model_dist.mean());
      fail[e] = !chi_square(hist, model_dist).pass;
    });

    ModelValidation row;
    row.model = model;
    double kl2 = 0.0, emd2 = 0.0, md2 = 0.0;
    long fails = 0;
    for (int e = 0; e < m; ++e) {
      kl2 += kl[static_cast<std::size_t>(e)] * kl[static_cast<std::size_t>(e)];
      emd2 += emd_err[static_cast<std::size_t>(e)] * emd_err[static_cast<std::size_t>(e)];
      md2 += mean_diff[static_cast<std::size_t>(e)] * mean_diff[static_cast<std::size_t>(e)];
      fails += fail[static_cast<std::size_t>(e)] != 0;
    }
    row.rms_kl = std::sqrt(kl2 / m);
    row.rms_emd = std::sqrt(emd2 / m);
    row.rms_mean_diff = std::sqrt(md2 / m);
    row.chi2_fail_fraction = static_cast<double>(fails) / m;
    row.wall_ms = elapsed_ms(t0);
    out.push_back(row);
  }
  return out;
}

void save_validation_csv(std::span<const ModelValidation> rows,
                         const std::filesystem::path& path, bool include_wall) {
  auto out = create_or_throw(path);
  out << (include_wall
              ? "model,rms_kl,rms_emd,rms_mean_diff,chi2_fail_fraction,wall_ms\n"
              : "model,rms_kl,rms_emd,rms_mean_diff,chi2_fail_fraction\n");
  char buf[160];
  for (const auto& row : rows) {
    if (include_wall)
      std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%.3f\n",
                    spread_model_name(row.model).c_str(), row.rms_kl, row.rms_emd,
                    row.rms_mean_diff, row.chi2_fail_fraction, row.wall_ms);
    else
      std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f\n",
                    spread_model_name(row.model).c_str(), row.rms_kl, row.rms_emd,
                    row.rms_mean_diff, row.chi2_fail_fraction);
    out << buf;
  }
}

WeakInsensitivityReport weak_insensitivity_test(const RuleSpec& rule,
                                                const PreferenceProfile& base,
                                                int samples, std::uint64_t seed,
                                                int threads) {
  check_profile(base);
  if (samples < 1) throw std::domain_error("sample count must be positive");
  const int r = base.front().r();
  const int c = max_raw_distance(r);
  const Rng base_rng(seed);

  const bool paired = rule.rule == Rule::random_dictatorship;
  AggregateSet agg_base;
  if (!paired) agg_base = aggregate(rule, base);

  struct Cell {
    double mu, sigma;
  };
  std::vector<Cell> cells;
  for (int k = 0; k <= c; ++k) {
    const double mu = static_cast<double>(k) / c;
    if (k == 0 || k == c) {
      cells.push_back({mu, 0.0});
      continue;
    }
    const double smax = sigma_max(mu);
    for (int f = 1; f <= 10; ++f) cells.push_back({mu, smax * f / 10.0});
  }

  // solve the per-cell draw parameters up front (shared solver cache)
  std::vector<DistSampler> samplers;
  samplers.reserve(cells.size());
  for (const auto& cell : cells)
    samplers.emplace_back(discretize(params_for_moments(cell.mu, cell.sigma, r), r));

  WeakInsensitivityReport report;
  report.rule = rule.name();
  report.cells.resize(cells.size());

  parallel_for(cells.size(), threads, [&](std::size_t idx) {
    Rng rng = base_rng.derive("wi-cell", idx);
    const auto& sampler = samplers[idx];
    PreferenceProfile perturbed;
    perturbed.reserve(base.size());
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < samples; ++s) {
      perturbed.clear();
      for (const auto& pref : base) {
        const int k = sampler.sample_index(rng);
        perturbed.push_back(sample_at_distance(pref, k, rng));
      }
      const double err = paired
                             ? expected_delta(rule, base, perturbed)
                             : delta(agg_base, aggregate(rule, perturbed));
      sum += err;
      sum2 += err * err;
    }
    const double mean = sum / samples;
    double se = 0.0;
    if (samples > 1) {
      const double var = std::max(0.0, (sum2 - sum * sum / samples) / (samples - 1));
      se = std::sqrt(var / samples);
    }
    WeakInsCell& out = report.cells[idx];
    out.mu_d = cells[idx].mu;
    out.sigma_d = cells[idx].sigma;
    out.estimate = mean;
    out.stderr_ = se;
    // the 1e-12 absorbs summation roundoff on degenerate (point-mass) cells
    out.pass = mean <= cells[idx].mu + 4.0 * se + 1e-12;
  });

  long passed = 0;
  for (const auto& cell : report.cells) passed += cell.pass;
  report.pass_fraction = static_cast<double>(passed) / static_cast<double>(report.cells.size());
  return report;
}

void save_weak_insensitivity_csv(std::span<const WeakInsensitivityReport> reports,
                                 const std::filesystem::path& path) {
  auto out = create_or_throw(path);
  out << "rule,mu_d,sigma_d,estimate,stderr,pass\n";
  char buf[160];
  for (const auto& report : reports)
    for (const auto& cell : report.cells) {
      std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%d\n",
                    report.rule.c_str(), cell.mu_d, cell.sigma_d, cell.estimate,
                    cell.stderr_, cell.pass ? 1 : 0);
      out << buf;
    }
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "greedy-sum") return Algorithm::greedy_sum;
  if (name == "greedy-min") return Algorithm::greedy_min;
  if (name == "greedy-orig") return Algorithm::greedy_orig;
  if (name == "between-cen") return Algorithm::between_cen;
  if (name == "degree-cen") return Algorithm::degree_cen;
  if (name == "random-poll") return Algorithm::random_poll;
  throw std::domain_error("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::greedy_sum: return "greedy-sum";
    case Algorithm::greedy_min: return "greedy-min";
    case Algorithm::greedy_orig: return "greedy-orig";
    case Algorithm::between_cen: return "between-cen";
    case Algorithm::degree_cen: return "degree-cen";
    case Algorithm::random_poll: return "random-poll";
  }
  return "?";
}

DistanceMatrix empirical_distance_matrix(const TopicProfiles& topics, int threads) {
  const int n = topics.nodes;
  const int r = topics.r;
  const int c = max_raw_distance(r);
  const PermSpace* space = r <= 7 ? &PermSpace::get(r) : nullptr;
  DistanceMatrix out(n);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t iu) {
    const int i = static_cast<int>(iu);
    for (int j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int t = 0; t < topics.topics; ++t) {
        const std::uint16_t a = topics.at(t, i);
        const std::uint16_t b = topics.at(t, j);
        int d;
        if (space != nullptr) {
          d = space->distance(a, b);
        } else {
          Alt pa[8], pb[8];
          perm_unrank(r, a, pa);
          perm_unrank(r, b, pb);
          d = kendall_tau(Preference(std::vector<Alt>(pa, pa + r)),
                          Preference(std::vector<Alt>(pb, pb + r)));
        }
        acc += d;
      }
      out.set_sym(i, j, acc / (static_cast<double>(topics.topics) * c));
    }
  });
  return out;
}

namespace {

// Shared evaluation state: per-topic population profiles and cached
// population aggregates per rule.
struct Evaluator {
  const ExperimentConfig& cfg;
  const TopicProfiles& topics;
  const DistanceMatrix& D;
  const PermSpace& space;
  std::vector<PreferenceProfile> population;
  std::map<std::string, std::vector<AggregateSet>> aggregates;

  Evaluator(const ExperimentConfig& c, const TopicProfiles& t, const DistanceMatrix& d)
      : cfg(c), topics(t), D(d), space(PermSpace::get(c.r)) {
    population.resize(static_cast<std::size_t>(topics.topics));
    parallel_for(population.size(), cfg.threads,
                 [&](std::size_t i) { population[i] = topics.profile(static_cast<int>(i)); });
  }

  double rank_distance(int t, int a, int b) const {
    const std::uint16_t ra = topics.at(t, a);
    const std::uint16_t rb = topics.at(t, b);
    if (space.has_distance_table())
      return static_cast<double>(space.distance(ra, rb)) / max_raw_distance(cfg.r);
    // r = 8 has no pairwise table; count inversions from the position arrays
    const int r = cfg.r;
    const Alt* ia = space.inverse(ra);
    const Alt* ib = space.inverse(rb);
    int inv = 0;
    for (int x = 0; x < r; ++x)
      for (int y = x + 1; y < r; ++y)
        inv += (ia[x] < ia[y]) != (ib[x] < ib[y]);
    return static_cast<double>(inv) / max_raw_distance(r);
  }

  const std::vector<AggregateSet>& population_aggregates(const RuleSpec& rule) {
    auto it = aggregates.find(rule.name());
    if (it != aggregates.end()) return it->second;
    std::vector<AggregateSet> agg(population.size());
    parallel_for(population.size(), cfg.threads, [&](std::size_t t) {
      agg[t] = aggregate(rule, population[t]);
    });
    return aggregates.emplace(rule.name(), std::move(agg)).first->second;
  }

  // nodes of S at minimal distance from v (the uniform tie draw is averaged
  // out exactly during evaluation)
  std::vector<int> nearest_members(std::span<const int> S, int v) const {
    double best = std::numeric_limits<double>::infinity();
    for (int j : S) {
      if (j == v) return {v};
      best = std::min(best, D.at(j, v));
    }
    std::vector<int> out;
    for (int j : S)
      if (D.at(j, v) == best) out.push_back(j);
    return out;
  }

  // the node with the largest expected distance to the set: the worst case
  // of the random dictator draw
  int worst_dictator(std::span<const int> M) const {
    int worst = 0;
    double worst_dist = -1.0;
    for (int v = 0; v < topics.nodes; ++v) {
      const double d = dist_set(M, v, D);
      if (d > worst_dist) {
        worst_dist = d;
        worst = v;
      }
    }
    return worst;
  }

  MeanStderr eval_weighted(const SelectionResult& result, const RuleSpec& rule) {
    std::vector<double> err(population.size());
    if (rule.rule == Rule::dictatorship) {
      const int d = rule.dictator;
      if (d < 0 || d >= topics.nodes) throw std::domain_error("dictator out of range");
      const int rep = result.assignment[static_cast<std::size_t>(d)];
      parallel_for(err.size(), cfg.threads, [&](std::size_t t) {
        err[t] = rank_distance(static_cast<int>(t), d, rep);
      });
    } else if (rule.rule == Rule::random_dictatorship &&
               cfg.rd_mode == DictatorMode::worst_case) {
      const int v = worst_dictator(result.representatives);
      const int rep = result.assignment[static_cast<std::size_t>(v)];
      parallel_for(err.size(), cfg.threads, [&](std::size_t t) {
        err[t] = rank_distance(static_cast<int>(t), v, rep);
      });
    } else if (rule.rule == Rule::random_dictatorship) {
      parallel_for(err.size(), cfg.threads, [&](std::size_t t) {
        double acc = 0.0;
        for (int v = 0; v < topics.nodes; ++v)
          acc += rank_distance(static_cast<int>(t), v,
                               result.assignment[static_cast<std::size_t>(v)]);
        err[t] = acc / topics.nodes;
      });
    } else {
      const auto& agg = population_aggregates(rule);
      parallel_for(err.size(), cfg.threads, [&](std::size_t t) {
        const PreferenceProfile q = weighted_profile(result, population[t]);
        err[t] = delta(agg[t], aggregate(rule, q));
      });
    }
    return mean_stderr(err);
  }

  MeanStderr eval_unweighted(std::span<const int> M, const RuleSpec& rule,
                             bool poll_semantics) {
    std::vector<double> err(population.size());
    if (rule.rule == Rule::dictatorship || rule.rule == Rule::random_dictatorship) {
      // per-dictator answers: the dictator's representative for set-based
      // algorithms; a uniform member (or the dictator itself) for polling
      std::vector<char> in_set(static_cast<std::size_t>(topics.nodes), 0);
      for (int j : M) in_set[static_cast<std::size_t>(j)] = 1;
      std::vector<std::vector<int>> reps;
      if (!poll_semantics) {
        reps.resize(static_cast<std::size_t>(topics.nodes));
        for (int v = 0; v < topics.nodes; ++v) reps[static_cast<std::size_t>(v)] = nearest_members(M, v);
      }
      auto dictator_error = [&](int t, int v) {
        if (poll_semantics) {
          if (in_set[static_cast<std::size_t>(v)]) return 0.0;
          double acc = 0.0;
          for (int u : M) acc += rank_distance(t, v, u);
          return acc / static_cast<double>(M.size());
        }
        double acc = 0.0;
        for (int u : reps[static_cast<std::size_t>(v)]) acc += rank_distance(t, v, u);
        return acc / static_cast<double>(reps[static_cast<std::size_t>(v)].size());
      };
      if (rule.rule == Rule::dictatorship) {
        const int d = rule.dictator;
        if (d < 0 || d >= topics.nodes) throw std::domain_error("dictator out of range");
        parallel_for(err.size(), cfg.threads, [&](std::size_t t) {
          err[t] = dictator_error(static_cast<int>(t), d);
        });
      } else if (cfg.rd_mode == DictatorMode::worst_case) {
        const int v = worst_dictator(M);
        parallel_for(err.size(), cfg.threads, [&](std::size_t t) {
          err[t] = dictator_error(static_cast<int>(t), v);
        });
      } else {
        parallel_for(err.size(), cfg.threads, [&](std::size_t t) {
          double acc = 0.0;
          for (int v = 0; v < topics.nodes; ++v)
            acc += dictator_error(static_cast<int>(t), v);
          err[t] = acc / topics.nodes;
        });
      }
      return mean_stderr(err);
    }

    const auto& agg = population_aggregates(rule);
    parallel_for(err.size(), cfg.threads, [&](std::size_t t) {
      PreferenceProfile q;
      q.reserve(M.size());
      for (int j : M) q.push_back(population[t][static_cast<std::size_t>(j)]);
      err[t] = delta(agg[t], aggregate(rule, q));
    });
    return mean_stderr(err);
  }
};

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.net == nullptr) throw std::domain_error("experiment needs a network");
  if (cfg.rules.empty() || cfg.algorithms.empty() || cfg.ks.empty())
    throw std::domain_error("experiment needs rules, algorithms, and k values");
  const Network& net = *cfg.net;
  for (int k : cfg.ks)
    if (k < 1 || k > net.node_count()) throw std::domain_error("k out of range");

  const Rng base(cfg.seed);

  SpreadConfig sim;
  sim.model = cfg.topic_model;
  sim.topics = cfg.topics;
  sim.r = cfg.r;
  sim.mode = cfg.neighbor_mode;
  sim.seed = base.derive("topics").key();
  sim.threads = cfg.threads;
  const TopicProfiles topics = simulate(net, sim);

  DistanceMatrix D =
      cfg.matrix == MatrixSource::msm_sp
          ? msm_sp(net, TrTable::load_or_build(cfg.r, cfg.tr_samples,
                                               base.derive("tr-table").key(),
                                               cfg.threads, cfg.cache_dir))
          : empirical_distance_matrix(topics, cfg.threads);

  Evaluator eval(cfg, topics, D);
  std::vector<ExperimentRow> rows;

  for (const Algorithm algorithm : cfg.algorithms) {
    for (const int k : cfg.ks) {
      const auto t0 = std::chrono::steady_clock::now();
      switch (algorithm) {
        case Algorithm::greedy_sum:
        case Algorithm::greedy_min: {
          Rng rng = base.derive("select-" + algorithm_name(algorithm),
                                static_cast<std::uint64_t>(k));
          const SelectionResult result =
              greedy_select(algorithm == Algorithm::greedy_sum
                                ? GreedyObjective::sum_similarity
                                : GreedyObjective::min_similarity,
                            D, k, rng);
          for (const auto& rule : cfg.rules) {
            try {
              const MeanStderr ms = eval.eval_weighted(result, rule);
              rows.push_back({algorithm_name(algorithm), rule.name(), k, ms.mean,
                              ms.se, ms.mean, elapsed_ms(t0)});
            } catch (const std::length_error&) {
              // cell exceeds a capacity cap; leave it missing
            }
          }
          break;
        }
        case Algorithm::greedy_orig: {
          for (const auto& rule : cfg.rules) {
            const auto tr0 = std::chrono::steady_clock::now();
            Rng rng = base.derive("select-greedy-orig-" + rule.name(),
                                  static_cast<std::uint64_t>(k));
            try {
              const SelectionResult result = greedy_orig(rule, topics, D, k, rng);
              const MeanStderr ms = eval.eval_weighted(result, rule);
              rows.push_back({algorithm_name(algorithm), rule.name(), k, ms.mean,
                              ms.se, ms.mean, elapsed_ms(tr0)});
            } catch (const std::length_error&) {
            }
          }
          break;
        }
        case Algorithm::between_cen:
        case Algorithm::degree_cen: {
          const std::vector<int> M =
              algorithm == Algorithm::between_cen
                  ? betweenness_ranking(net, k, cfg.threads)
                  : degree_centrality_ranking(net, k);
          for (const auto& rule : cfg.rules) {
            try {
              const MeanStderr ms = eval.eval_unweighted(M, rule, false);
              rows.push_back({algorithm_name(algorithm), rule.name(), k, ms.mean,
                              ms.se, ms.mean, elapsed_ms(t0)});
            } catch (const std::length_error&) {
            }
          }
          break;
        }
        case Algorithm::random_poll: {
          std::vector<std::vector<double>> run_means(
              cfg.rules.size(), std::vector<double>(static_cast<std::size_t>(
                                    cfg.random_poll_runs)));
          std::vector<char> dropped(cfg.rules.size(), 0);
          for (int run = 0; run < cfg.random_poll_runs; ++run) {
            Rng rng = base.derive("random-poll",
                                  (static_cast<std::uint64_t>(k) << 32) |
                                      static_cast<std::uint32_t>(run));
            const SelectionResult result = random_poll(net.node_count(), k, rng);
            for (std::size_t ri = 0; ri < cfg.rules.size(); ++ri) {
              if (dropped[ri]) continue;
              try {
                run_means[ri][static_cast<std::size_t>(run)] =
                    eval.eval_unweighted(result.representatives, cfg.rules[ri], true)
                        .mean;
              } catch (const std::length_error&) {
                dropped[ri] = 1;
              }
            }
          }
          for (std::size_t ri = 0; ri < cfg.rules.size(); ++ri) {
            if (dropped[ri]) continue;
            const MeanStderr ms = mean_stderr(run_means[ri]);
            const double worst =
                *std::max_element(run_means[ri].begin(), run_means[ri].end());
            rows.push_back({algorithm_name(algorithm), cfg.rules[ri].name(), k,
                            ms.mean, ms.se, worst, elapsed_ms(t0)});
          }
          break;
        }
      }
    }
  }

  std::sort(rows.begin(), rows.end(), [](const ExperimentRow& a, const ExperimentRow& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.rule != b.rule) return a.rule < b.rule;
    return a.k < b.k;
  });
  return rows;
}

void save_experiment_csv(std::span<const ExperimentRow> rows,
                         const std::filesystem::path& path, bool include_runtime) {
  auto out = create_or_throw(path);
  out << (include_runtime
              ? "algorithm,rule,k,mean_error,stderr,worst_error,runtime_ms\n"
              : "algorithm,rule,k,mean_error,stderr,worst_error\n");
  char buf[200];
  for (const auto& row : rows) {
    if (include_runtime)
      std::snprintf(buf, sizeof buf, "%s,%s,%d,%.6f,%.6f,%.6f,%.3f\n",
                    row.algorithm.c_str(), row.rule.c_str(), row.k, row.mean_error,
                    row.stderr_, row.worst_error, row.runtime_ms);
    else
      std::snprintf(buf, sizeof buf, "%s,%s,%d,%.6f,%.6f,%.6f\n",
                    row.algorithm.c_str(), row.rule.c_str(), row.k, row.mean_error,
                    row.stderr_, row.worst_error);
    out << buf;
  }
}

double social_centrality(std::span<const Preference> user_prefs,
                         std::span<const Preference> aggregate_prefs,
                         std::span<const double> topic_counts) {
  if (user_prefs.empty() || user_prefs.size() != aggregate_prefs.size() ||
      user_prefs.size() != topic_counts.size())
    throw std::domain_error("social centrality needs aligned, non-empty topics");
  double total_count = 0.0;
  for (double c : topic_counts) {
    if (!(c > 0.0)) throw std::domain_error("topic counts must be positive");
    total_count += c;
  }
  double score = 0.0;
  for (std::size_t t = 0; t < user_prefs.size(); ++t)
    score += topic_counts[t] / total_count *
             (1.0 - footrule(user_prefs[t], aggregate_prefs[t]));
  return std::max(0.0, 0.5 * std::ceil(20.0 * std::sqrt(score) - 1e-9));
}

double friend_similarity(std::span<const std::optional<Preference>> a,
                         std::span<const std::optional<Preference>> b) {
  if (a.empty() || a.size() != b.size())
    throw std::domain_error("friend similarity needs aligned, non-empty topics");
  double acc = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t)
    if (a[t].has_value() && b[t].has_value())
      acc += 1.0 - footrule(*a[t], *b[t]);
  return 100.0 * acc / static_cast<double>(a.size());
}

}  // namespace prefnet
