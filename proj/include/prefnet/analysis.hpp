#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefnet/network.hpp"
#include "prefnet/prefmath.hpp"
#include "prefnet/selection.hpp"
#include "prefnet/spread.hpp"
#include "prefnet/voting.hpp"

namespace prefnet {

// ---- model validation (per-edge distance distributions vs the edge model) --

struct ModelValidation {
  SpreadModel model = SpreadModel::rpm_s;
  double rms_kl = 0.0;
  double rms_emd = 0.0;
  double rms_mean_diff = 0.0;
  double chi2_fail_fraction = 0.0;
  double wall_ms = 0.0;
};

// Simulates `topics` preference profiles per model and compares every edge's
// empirical distance histogram against its configured distribution.
std::vector<ModelValidation> validate_models(const Network& net, int topics, int r,
                                             std::span<const SpreadModel> models,
                                             std::uint64_t seed, int threads = 1);

// wall_ms is measured and non-reproducible; the writer orders and formats all
// other columns deterministically.
void save_validation_csv(std::span<const ModelValidation> rows,
                         const std::filesystem::path& path,
                         bool include_wall = true);

// ---- expected weak insensitivity ------------------------------------------

struct WeakInsCell {
  double mu_d = 0.0;
  double sigma_d = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  bool pass = false;
};

struct WeakInsensitivityReport {
  std::string rule;
  std::vector<WeakInsCell> cells;
  double pass_fraction = 0.0;
};

// Perturbs every voter by a draw from the distribution with mean mu_d and
// deviation sigma_d (the boundary case of the insensitivity criterion) and
// estimates the expected aggregate drift. The mu_d grid steps by 1/C(r,2) and
// sigma_d by 10% of the permissible maximum; a cell passes when the estimate
// is at most mu_d plus four standard errors.
WeakInsensitivityReport weak_insensitivity_test(const RuleSpec& rule,
                                                const PreferenceProfile& base,
                                                int samples, std::uint64_t seed,
                                                int threads = 1);

void save_weak_insensitivity_csv(std::span<const WeakInsensitivityReport> reports,
                                 const std::filesystem::path& path);

// ---- end-to-end experiments -------------------------------------------

enum class Algorithm {
  greedy_sum,
  greedy_min,
  greedy_orig,
  between_cen,
  degree_cen,
  random_poll,
};

Algorithm parse_algorithm(const std::string& name);
std::string algorithm_name(Algorithm algorithm);

enum class MatrixSource { msm_sp, empirical };

struct ExperimentConfig {
  const Network* net = nullptr;
  SpreadModel topic_model = SpreadModel::rpm_s;
  NeighborMode neighbor_mode = NeighborMode::random;
  int topics = 1000;
  int r = 5;
  MatrixSource matrix = MatrixSource::msm_sp;
  int tr_samples = 10000;
  std::optional<std::filesystem::path> cache_dir;
  std::vector<RuleSpec> rules;
  std::vector<Algorithm> algorithms;
  std::vector<int> ks;
  // worst_case scores random dictatorship through the node with the largest
  // expected distance to the selected set
  DictatorMode rd_mode = DictatorMode::average;
  int random_poll_runs = 100;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct ExperimentRow {
  std::string algorithm;
  std::string rule;
  int k = 0;
  double mean_error = 0.0;
  double stderr_ = 0.0;
  double worst_error = 0.0;  // worst run for random-poll, = mean otherwise
  double runtime_ms = 0.0;
};

// Full pipeline: simulate topics, build the distance matrix, select
// representative sets per algorithm and k, and score every rule's expected
// error against the population aggregate. Rows come back sorted by
// (algorithm, rule, k); cells that trip a capacity cap are left missing
// rather than aborting the run.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

// runtime_ms is measured and non-reproducible; all other columns are
// deterministic for a fixed (config, seed).
void save_experiment_csv(std::span<const ExperimentRow> rows,
                         const std::filesystem::path& path,
                         bool include_runtime = true);

// ---- app scores ------------------------------------------------------

// (1/2) * ceil(20 * sqrt(weighted mean Footrule similarity to the aggregate)),
// topics weighted by their response counts.
double social_centrality(std::span<const Preference> user_prefs,
                         std::span<const Preference> aggregate_prefs,
                         std::span<const double> topic_counts);

// Percentage similarity across aligned topic lists; a topic skipped by either
// side contributes zero similarity.
double friend_similarity(std::span<const std::optional<Preference>> a,
                         std::span<const std::optional<Preference>> b);

// Mean pairwise normalized Kendall-Tau distance across topics.
DistanceMatrix empirical_distance_matrix(const TopicProfiles& topics, int threads = 1);

}  // namespace prefnet
