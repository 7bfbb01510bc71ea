// prefnet: preference-spread modeling, representative selection, and
// verification pipelines over social networks with distributional edges.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prefnet/analysis.hpp"
#include "prefnet/csvio.hpp"
#include "prefnet/kernels.hpp"
#include "prefnet/parallel.hpp"
#include "prefnet/network.hpp"
#include "prefnet/selection.hpp"
#include "prefnet/spread.hpp"
#include "prefnet/voting.hpp"

namespace {

using namespace prefnet;

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t next = std::min(csv.find(',', pos), csv.size());
    if (next > pos) out.push_back(csv.substr(pos, next - pos));
    if (next == csv.size()) break;
    pos = next + 1;
  }
  return out;
}

std::vector<RuleSpec> parse_rules(const std::string& csv) {
  std::vector<RuleSpec> out;
  for (const auto& name : split_list(csv)) out.push_back(RuleSpec::parse(name));
  if (out.empty()) throw std::domain_error("no rules given");
  return out;
}

struct GenNetArgs {
  SyntheticConfig cfg;
  std::string model = "ws";
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen_net(GenNetArgs& args) {
  args.cfg.model = parse_graph_model(args.model);
  const Network net = generate_synthetic(args.cfg, args.seed);
  save_network(net, args.out);
  std::fprintf(stderr, "wrote %s: n=%d m=%d\n", args.out.c_str(), net.node_count(),
               net.edge_count());
  return 0;
}

struct SimulateArgs {
  std::string net_path;
  bool giant = false;
  std::string model = "rpm-s";
  std::string mode = "random";
  SpreadConfig cfg;
  std::string out;
};

int run_simulate(SimulateArgs& args) {
  const Network net = load_network(args.net_path, args.giant);
  args.cfg.model = parse_spread_model(args.model);
  args.cfg.mode = parse_neighbor_mode(args.mode);
  const TopicProfiles profiles = simulate(net, args.cfg);
  save_profiles(profiles, args.out);
  std::fprintf(stderr, "wrote %s: %d topics x %d nodes (r=%d)\n", args.out.c_str(),
               profiles.topics, profiles.nodes, profiles.r);
  return 0;
}

struct MatrixArgs {
  std::string matrix = "msm-sp";
  int r = 5;
  int tr_samples = 10000;
  std::string cache_dir;
  std::string topics_file;
};

DistanceMatrix build_matrix(const Network& net, const MatrixArgs& args,
                            std::uint64_t seed, int threads,
                            const std::optional<TopicProfiles>& topics) {
  if (args.matrix == "msm-sp") {
    std::optional<std::filesystem::path> cache;
    if (!args.cache_dir.empty()) cache = args.cache_dir;
    const TrTable table =
        TrTable::load_or_build(args.r, args.tr_samples, seed, threads, cache);
    return msm_sp(net, table);
  }
  if (args.matrix == "empirical") {
    if (!topics) throw std::domain_error("empirical matrix needs --topics-file");
    return empirical_distance_matrix(*topics, threads);
  }
  throw std::domain_error("unknown matrix source: " + args.matrix);
}

struct SelectArgs {
  std::string net_path;
  bool giant = false;
  std::string algo = "greedy-sum";
  int k = 10;
  MatrixArgs matrix;
  std::string rule = "plurality";
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

int run_select(SelectArgs& args) {
  const Network net = load_network(args.net_path, args.giant);
  std::optional<TopicProfiles> topics;
  if (!args.matrix.topics_file.empty()) {
    topics = load_profiles(args.matrix.topics_file);
    args.matrix.r = topics->r;
  }
  const Rng base(args.seed);
  const Algorithm algorithm = parse_algorithm(args.algo);

  SelectionResult result;
  if (algorithm == Algorithm::random_poll) {
    Rng rng = base.derive("random-poll");
    result = random_poll(net.node_count(), args.k, rng);
  } else {
    const DistanceMatrix D = build_matrix(net, args.matrix,
                                          base.derive("tr-table").key(),
                                          resolve_threads(args.threads), topics);
    Rng rng = base.derive("select");
    switch (algorithm) {
      case Algorithm::greedy_sum:
        result = greedy_select(GreedyObjective::sum_similarity, D, args.k, rng);
        break;
      case Algorithm::greedy_min:
        result = greedy_select(GreedyObjective::min_similarity, D, args.k, rng);
        break;
      case Algorithm::greedy_orig: {
        if (!topics) throw std::domain_error("greedy-orig needs --topics-file");
        result = greedy_orig(RuleSpec::parse(args.rule), *topics, D, args.k, rng);
        break;
      }
      case Algorithm::between_cen:
        result = make_result(betweenness_ranking(net, args.k, resolve_threads(args.threads)),
                             D, rng);
        break;
      case Algorithm::degree_cen:
        result = make_result(degree_centrality_ranking(net, args.k), D, rng);
        break;
      default:
        throw std::domain_error("unsupported algorithm");
    }
  }
  save_selection(result, args.out);
  std::fprintf(stderr, "wrote %s: k=%zu\n", args.out.c_str(),
               result.representatives.size());
  return 0;
}

struct EvaluateArgs {
  std::string net_path;
  bool giant = false;
  std::string model = "rpm-s";
  std::string mode = "random";
  int topics = 1000;
  MatrixArgs matrix;
  std::string rules =
      "plurality,borda,veto,copeland,bucklin,minmax-po,kemeny,dictatorship:0,"
      "random-dictatorship,smith,schulze";
  std::string algos = "greedy-sum,greedy-min,degree-cen,between-cen,random-poll";
  std::string ks;
  int kmax = 50;
  int kstep = 5;
  std::string rd_mode = "average";
  int poll_runs = 100;
  std::uint64_t seed = 0;
  int threads = 0;
  bool no_runtime = false;
  std::string out;
};

int run_evaluate(EvaluateArgs& args) {
  const Network net = load_network(args.net_path, args.giant);
  ExperimentConfig cfg;
  cfg.net = &net;
  cfg.topic_model = parse_spread_model(args.model);
  cfg.neighbor_mode = parse_neighbor_mode(args.mode);
  cfg.topics = args.topics;
  cfg.r = args.matrix.r;
  cfg.matrix = args.matrix.matrix == "empirical" ? MatrixSource::empirical
                                                 : MatrixSource::msm_sp;
  cfg.tr_samples = args.matrix.tr_samples;
  if (!args.matrix.cache_dir.empty()) cfg.cache_dir = args.matrix.cache_dir;
  cfg.rules = parse_rules(args.rules);
  for (const auto& name : split_list(args.algos))
    cfg.algorithms.push_back(parse_algorithm(name));
  if (!args.ks.empty()) {
    for (const auto& tok : split_list(args.ks)) cfg.ks.push_back(std::stoi(tok));
  } else if (args.kmax > 0) {
    for (int k = 1; k <= args.kmax; k += args.kstep) cfg.ks.push_back(k);
  } else {
    throw std::domain_error("need --ks or --kmax");
  }
  cfg.rd_mode = args.rd_mode == "worst" ? DictatorMode::worst_case
                                        : DictatorMode::average;
  cfg.random_poll_runs = args.poll_runs;
  cfg.seed = args.seed;
  cfg.threads = resolve_threads(args.threads);

  const auto rows = run_experiment(cfg);
  save_experiment_csv(rows, args.out, !args.no_runtime);
  std::fprintf(stderr, "wrote %s: %zu rows\n", args.out.c_str(), rows.size());
  return 0;
}

struct VerifyArgs {
  std::string suite;
  int n = 6;
  int instances = 20;
  long trials = 10000;
  int samples = 200;
  int topics = 2000;
  std::string rules = "dictatorship:0,borda,plurality,veto";
  std::string net_path;
  int r = 5;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

int run_verify(VerifyArgs& args) {
  const int threads = resolve_threads(args.threads);
  const Rng base(args.seed);
  bool pass = true;

  if (args.suite == "tu") {
    for (int inst = 0; inst < args.instances; ++inst) {
      Rng rng = base.derive("tu", static_cast<std::uint64_t>(inst));
      const DistanceMatrix D = random_distance_matrix(args.n, rng);
      const TuCheckReport report = tu_checks(D);
      const bool ok = report.pass(1e-9);
      pass = pass && ok;
      std::printf("[%s] instance %d: shapley err %.3g, gately err %.3g, "
                  "lambda %.12f, tau err %.3g\n",
                  ok ? "PASS" : "FAIL", inst, report.max_shapley_err,
                  report.max_gately_err, report.lambda, report.max_tau_err);
    }
  } else if (args.suite == "submodularity") {
    Rng rng = base.derive("submodularity");
    const DistanceMatrix D = random_distance_matrix(std::max(args.n, 10), rng);
    const SubmodularityReport report = check_submodularity(D, args.trials, rng);
    const bool mono = report.rho_monotonicity_violations == 0 &&
                      report.psi_monotonicity_violations == 0;
    const bool psi_ok = report.psi_submodularity_violations == 0;
    std::printf("[%s] monotonicity: 0 violations required, rho=%ld psi=%ld\n",
                mono ? "PASS" : "FAIL", report.rho_monotonicity_violations,
                report.psi_monotonicity_violations);
    std::printf("[%s] psi submodularity: %ld violations in %ld trials\n",
                psi_ok ? "PASS" : "FAIL", report.psi_submodularity_violations,
                report.trials);
    std::printf("[info] rho submodularity: %ld violations in %ld trials "
                "(min-aggregation does not preserve submodularity)\n",
                report.rho_submodularity_violations, report.trials);
    pass = mono && psi_ok;
  } else if (args.suite == "insensitivity") {
    PreferenceProfile profile;
    Rng prng = base.derive("profile");
    for (int i = 0; i < std::max(args.n, 10); ++i) {
      std::vector<Alt> order(static_cast<std::size_t>(args.r));
      for (int j = 0; j < args.r; ++j) order[static_cast<std::size_t>(j)] = static_cast<Alt>(j);
      for (int j = 0; j < args.r; ++j) {
        const auto k = j + static_cast<int>(prng.below(static_cast<std::uint64_t>(args.r - j)));
        std::swap(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(k)]);
      }
      profile.push_back(Preference(order));
    }
    std::vector<WeakInsensitivityReport> reports;
    for (const auto& rule : parse_rules(args.rules)) {
      reports.push_back(weak_insensitivity_test(rule, profile, args.samples,
                                                base.derive(rule.name()).key(), threads));
      std::printf("[info] %s pass fraction %.3f\n", reports.back().rule.c_str(),
                  reports.back().pass_fraction);
    }
    if (!args.out.empty()) save_weak_insensitivity_csv(reports, args.out);
  } else if (args.suite == "models") {
    if (args.net_path.empty()) throw std::domain_error("--net is required");
    const Network net = load_network(args.net_path);
    const SpreadModel models[] = {SpreadModel::rpm_ic, SpreadModel::rpm_s,
                                  SpreadModel::rpm_d, SpreadModel::rpm_r};
    const auto report =
        validate_models(net, args.topics, args.r, models, args.seed, threads);
    for (const auto& row : report)
      std::printf("[info] %s: rms_kl=%.4f rms_emd=%.4f rms_mean_diff=%.4f "
                  "chi2_fail=%.4f wall_ms=%.0f\n",
                  spread_model_name(row.model).c_str(), row.rms_kl, row.rms_emd,
                  row.rms_mean_diff, row.chi2_fail_fraction, row.wall_ms);
    if (!args.out.empty()) save_validation_csv(report, args.out);
  } else {
    throw std::domain_error("unknown suite: " + args.suite);
  }
  std::printf("%s\n", pass ? "ALL CHECKS PASSED" : "CHECKS FAILED");
  return pass ? 0 : 1;
}

struct FitArgs {
  std::string histogram;
  std::string adjacency;
  std::string profiles;
  int r = 5;
  int min_topics = 6;
  double fallback_mu = 0.24;
  double fallback_sigma = 0.10;
  int threads = 0;
  std::string out;
};

int run_fit(FitArgs& args) {
  if (!args.histogram.empty()) {
    const auto hist = load_histogram(args.histogram, args.r);
    const EdgeDistribution fit = fit_mle(hist, args.r);
    std::printf("mu=%.6f sigma=%.6f\n", fit.mu, fit.sigma);
    return 0;
  }
  if (args.adjacency.empty() || args.profiles.empty() || args.out.empty())
    throw std::domain_error("fit needs --histogram, or --adjacency/--profiles/--out");
  const Network adjacency = load_network(args.adjacency);
  const TopicProfiles profiles = load_profiles(args.profiles);
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : adjacency.edges()) edges.emplace_back(e.u, e.v);
  const Network fitted = fit_edges_from_profiles(
      adjacency.node_count(), edges, profiles,
      {args.fallback_mu, args.fallback_sigma}, args.min_topics,
      resolve_threads(args.threads));
  save_network(fitted, args.out);
  std::fprintf(stderr, "wrote %s\n", args.out.c_str());
  return 0;
}

struct ScoreArgs {
  std::string profiles;
  int node = 0;
  int friend_node = -1;
  std::string rule = "borda";
};

int run_score(ScoreArgs& args) {
  const TopicProfiles topics = load_profiles(args.profiles);
  if (args.node < 0 || args.node >= topics.nodes)
    throw std::domain_error("node out of range");

  if (args.friend_node >= 0) {
    if (args.friend_node >= topics.nodes) throw std::domain_error("friend out of range");
    std::vector<std::optional<Preference>> a, b;
    for (int t = 0; t < topics.topics; ++t) {
      auto get = [&](int v) -> std::optional<Preference> {
        const std::uint16_t rk = topics.at(t, v);
        if (rk == TopicProfiles::kNoResponse) return std::nullopt;
        std::vector<Alt> order(static_cast<std::size_t>(topics.r));
        perm_unrank(topics.r, rk, order.data());
        return Preference(std::move(order));
      };
      a.push_back(get(args.node));
      b.push_back(get(args.friend_node));
    }
    std::printf("friend_similarity=%.2f\n", friend_similarity(a, b));
    return 0;
  }

  // social centrality: per-topic aggregate over respondents, weighted by
  // response counts
  const RuleSpec rule = RuleSpec::parse(args.rule);
  std::vector<Preference> user, aggregates;
  std::vector<double> counts;
  for (int t = 0; t < topics.topics; ++t) {
    const std::uint16_t rk = topics.at(t, args.node);
    if (rk == TopicProfiles::kNoResponse) continue;
    PreferenceProfile respondents;
    for (int v = 0; v < topics.nodes; ++v) {
      const std::uint16_t vr = topics.at(t, v);
      if (vr == TopicProfiles::kNoResponse) continue;
      std::vector<Alt> order(static_cast<std::size_t>(topics.r));
      perm_unrank(topics.r, vr, order.data());
      respondents.push_back(Preference(std::move(order)));
    }
    const AggregateSet set = aggregate(rule, respondents);
    std::vector<Alt> order(static_cast<std::size_t>(topics.r));
    perm_unrank(topics.r, rk, order.data());
    user.push_back(Preference(std::move(order)));
    aggregates.push_back(set.front());
    counts.push_back(static_cast<double>(respondents.size()));
  }
  std::printf("social_centrality=%.1f\n", social_centrality(user, aggregates, counts));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"preference spread and sampling-based aggregation toolkit"};
  app.require_subcommand(1);

  GenNetArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-net", "generate a synthetic network");
  gen_cmd->add_option("--model", gen.model, "ws | ba | er")->capture_default_str();
  gen_cmd->add_option("--n", gen.cfg.n, "node count")->check(CLI::Range(3, 1000000));
  gen_cmd->add_option("--ws-k", gen.cfg.ws_k, "ring neighbors (even)");
  gen_cmd->add_option("--ws-beta", gen.cfg.ws_beta, "rewiring probability");
  gen_cmd->add_option("--ba-m", gen.cfg.ba_m, "attachments per node");
  gen_cmd->add_option("--er-p", gen.cfg.er_p, "edge probability");
  gen_cmd->add_option("--preset", gen.cfg.preset,
                      "facebook-all | facebook-personal | facebook-social")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "rng seed")->required();
  gen_cmd->add_option("--out", gen.out, "output network csv")->required();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "run a preference-spread model");
  sim_cmd->add_option("--net", sim.net_path, "network csv")->required();
  sim_cmd->add_flag("--giant-component", sim.giant, "keep only the giant component");
  sim_cmd->add_option("--model", sim.model, "rpm-ic | rpm-s | rpm-d | rpm-r")
      ->capture_default_str();
  sim_cmd->add_option("--mode", sim.mode, "random | mu-based | sigma-based")
      ->capture_default_str();
  sim_cmd->add_option("--topics", sim.cfg.topics, "simulated topics")->required();
  sim_cmd->add_option("--r", sim.cfg.r, "alternatives")->capture_default_str();
  sim_cmd->add_option("--seed", sim.cfg.seed, "rng seed")->required();
  sim_cmd->add_option("--threads", sim.cfg.threads, "worker threads (0 = auto)");
  sim_cmd->add_option("--out", sim.out, "output profiles csv")->required();

  SelectArgs sel;
  auto* sel_cmd = app.add_subcommand("select", "choose a representative set");
  sel_cmd->add_option("--net", sel.net_path, "network csv")->required();
  sel_cmd->add_flag("--giant-component", sel.giant);
  sel_cmd->add_option("--algo", sel.algo,
                      "greedy-sum | greedy-min | greedy-orig | between-cen | "
                      "degree-cen | random-poll")
      ->capture_default_str();
  sel_cmd->add_option("--k", sel.k, "set size")->required();
  sel_cmd->add_option("--matrix", sel.matrix.matrix, "msm-sp | empirical")
      ->capture_default_str();
  sel_cmd->add_option("--r", sel.matrix.r, "alternatives")->capture_default_str();
  sel_cmd->add_option("--tr-samples", sel.matrix.tr_samples, "samples per table cell");
  sel_cmd->add_option("--cache-dir", sel.matrix.cache_dir, "table cache directory");
  sel_cmd->add_option("--topics-file", sel.matrix.topics_file,
                      "profiles csv (empirical matrix, greedy-orig)");
  sel_cmd->add_option("--rule", sel.rule, "rule for greedy-orig")->capture_default_str();
  sel_cmd->add_option("--seed", sel.seed, "rng seed")->required();
  sel_cmd->add_option("--threads", sel.threads, "worker threads (0 = auto)");
  sel_cmd->add_option("--out", sel.out, "output selection csv")->required();

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "full error-vs-k experiment");
  eval_cmd->add_option("--net", eval.net_path, "network csv")->required();
  eval_cmd->add_flag("--giant-component", eval.giant);
  eval_cmd->add_option("--model", eval.model, "topic generation model")
      ->capture_default_str();
  eval_cmd->add_option("--mode", eval.mode, "rpm-s neighbor mode")->capture_default_str();
  eval_cmd->add_option("--topics", eval.topics, "evaluation topics")->capture_default_str();
  eval_cmd->add_option("--r", eval.matrix.r, "alternatives")->capture_default_str();
  eval_cmd->add_option("--matrix", eval.matrix.matrix, "msm-sp | empirical")
      ->capture_default_str();
  eval_cmd->add_option("--tr-samples", eval.matrix.tr_samples, "samples per table cell");
  eval_cmd->add_option("--cache-dir", eval.matrix.cache_dir, "table cache directory");
  eval_cmd->add_option("--rules", eval.rules, "comma-separated rule list")
      ->capture_default_str();
  eval_cmd->add_option("--algos", eval.algos, "comma-separated algorithm list")
      ->capture_default_str();
  eval_cmd->add_option("--ks", eval.ks, "comma-separated k values");
  eval_cmd->add_option("--kmax", eval.kmax, "k range 1..kmax");
  eval_cmd->add_option("--kstep", eval.kstep, "k range step");
  eval_cmd->add_option("--rd-mode", eval.rd_mode, "average | worst")->capture_default_str();
  eval_cmd->add_option("--poll-runs", eval.poll_runs, "random-poll repetitions")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "rng seed")->required();
  eval_cmd->add_option("--threads", eval.threads, "worker threads (0 = auto)");
  eval_cmd->add_flag("--no-runtime-column", eval.no_runtime,
                     "omit the measured runtime column");
  eval_cmd->add_option("--out", eval.out, "output results csv")->required();

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "structural verification suites");
  ver_cmd->add_option("--suite", ver.suite, "tu | submodularity | insensitivity | models")
      ->required();
  ver_cmd->add_option("--n", ver.n, "instance size");
  ver_cmd->add_option("--instances", ver.instances, "instance count");
  ver_cmd->add_option("--trials", ver.trials, "sampled triples");
  ver_cmd->add_option("--samples", ver.samples, "Monte-Carlo samples per cell");
  ver_cmd->add_option("--topics", ver.topics, "simulated topics");
  ver_cmd->add_option("--rules", ver.rules, "rules for insensitivity");
  ver_cmd->add_option("--net", ver.net_path, "network csv for models suite");
  ver_cmd->add_option("--r", ver.r, "alternatives");
  ver_cmd->add_option("--seed", ver.seed, "rng seed")->required();
  ver_cmd->add_option("--threads", ver.threads, "worker threads (0 = auto)");
  ver_cmd->add_option("--out", ver.out, "optional report csv");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit edge distributions");
  fit_cmd->add_option("--histogram", fit.histogram, "grid histogram csv");
  fit_cmd->add_option("--adjacency", fit.adjacency, "network csv giving the topology");
  fit_cmd->add_option("--profiles", fit.profiles, "profiles csv");
  fit_cmd->add_option("--r", fit.r, "alternatives")->capture_default_str();
  fit_cmd->add_option("--min-topics", fit.min_topics, "common-topic threshold");
  fit_cmd->add_option("--fallback-mu", fit.fallback_mu, "fallback mu");
  fit_cmd->add_option("--fallback-sigma", fit.fallback_sigma, "fallback sigma");
  fit_cmd->add_option("--threads", fit.threads, "worker threads (0 = auto)");
  fit_cmd->add_option("--out", fit.out, "output network csv");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "app-style scores from profiles");
  score_cmd->add_option("--profiles", score.profiles, "profiles csv")->required();
  score_cmd->add_option("--node", score.node, "user node id")->required();
  score_cmd->add_option("--friend", score.friend_node, "friend node id");
  score_cmd->add_option("--rule", score.rule, "aggregate rule for centrality")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) return run_gen_net(gen);
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (sel_cmd->parsed()) return run_select(sel);
    if (eval_cmd->parsed()) return run_evaluate(eval);
    if (ver_cmd->parsed()) return run_verify(ver);
    if (fit_cmd->parsed()) return run_fit(fit);
    if (score_cmd->parsed()) return run_score(score);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
