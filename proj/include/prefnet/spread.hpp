#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "prefnet/distmodel.hpp"
#include "prefnet/network.hpp"
#include "prefnet/prefmath.hpp"
#include "prefnet/rng.hpp"

namespace prefnet {

enum class SpreadModel { rpm_ic, rpm_s, rpm_d, rpm_r };
enum class NeighborMode { random, mu_based, sigma_based };

SpreadModel parse_spread_model(const std::string& name);
std::string spread_model_name(SpreadModel model);
NeighborMode parse_neighbor_mode(const std::string& name);

struct SpreadConfig {
  SpreadModel model = SpreadModel::rpm_s;
  int topics = 1;
  int r = 5;
  NeighborMode mode = NeighborMode::random;  // RPM-S neighbor selection
  std::uint64_t seed = 0;
  int threads = 1;
  // Test hook: pins the RPM-D initializing-set size instead of drawing it
  // from U{1..ceil(sqrt(n))}.
  std::optional<int> force_init_size;
};

// Runs the configured preference-spread model for cfg.topics simulated
// topics. Topics are independent work units seeded per topic index, so the
// output is identical for any thread count. RPM-IC requires r <= 7 (it scores
// all r! candidate preferences); the other models allow r <= 8.
TopicProfiles simulate(const Network& net, const SpreadConfig& cfg);

// Expected distance between the endpoints of a two-hop connection, indexed by
// the two hop means on the 0.01 grid. Entries are stored in cents; the three
// reflection/symmetry identities hold exactly by construction, combining with
// a zero hop is the identity, and any cell with a coordinate at 0.5 is 0.5.
class TrTable {
 public:
  static constexpr int kGrid = 101;

  int r = 0;
  int samples_per_cell = 0;
  std::vector<std::uint8_t> cents;  // kGrid * kGrid

  int at_cents(int x_cents, int y_cents) const {
    return cents[static_cast<std::size_t>(x_cents) * kGrid + y_cents];
  }
  double at(double dx, double dy) const;  // snaps arguments to the grid

  // Monte-Carlo estimation of the base region (hop means up to 0.49), with
  // the per-draw deviation scale itself drawn uniformly up to the permissible
  // maximum for the hop mean; remaining cells come from the identities.
  static TrTable build(int r, int samples_per_cell, std::uint64_t seed,
                       int threads = 1);

  void save_csv(const std::filesystem::path& path) const;
  static TrTable load_csv(const std::filesystem::path& path);
  // Cache file tr_table_r{r}_s{samples}.csv under cache_dir (or the
  // PREFNET_CACHE_DIR environment variable when cache_dir is empty).
  static TrTable load_or_build(int r, int samples_per_cell, std::uint64_t seed,
                               int threads,
                               std::optional<std::filesystem::path> cache_dir);

  void verify_identities() const;  // throws std::logic_error on violation
};

// All-pairs expected distances: diagonal 0, edges at mu (snapped to 0.01),
// everything else deduced by repeated relaxation passes with the table
// combiner (max{dx,dy} when either hop exceeds 0.5). Converges in at most n
// passes since every relaxation strictly decreases a cell on the cent grid.
DistanceMatrix msm_sp(const Network& net, const TrTable& table);

namespace spread_detail {

// Log-scores over all r! candidate preferences for one node given its
// assigned neighbors (edge parameters + the neighbor's preference rank).
// score(q) = sum_i [ log pmf_i(d(p_i, q)) - log count_at_distance(d(p_i, q)) ].
std::vector<double> ic_log_scores(
    int r, std::span<const std::pair<EdgeDistribution, std::uint16_t>> assigned);

// RPM-S assigned-neighbor choice over the incident edge parameters.
int pick_neighbor(NeighborMode mode, std::span<const EdgeDistribution> edges,
                  Rng& rng);

// One full relaxation sweep over the cents matrix; returns whether anything
// changed. Exposed so tests can check the fixpoint property.
bool msm_relax_pass(std::vector<std::uint8_t>& cents, int n, const TrTable& table);

// Uniform preference rank at raw distance k from the given rank.
std::uint16_t sample_rank_at_distance(const PermSpace& space,
                                      const MahonianRows& rows,
                                      std::uint16_t from, int k, Rng& rng);

}  // namespace spread_detail

}  // namespace prefnet
