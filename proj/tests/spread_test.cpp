#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "prefnet/kernels.hpp"
#include "prefnet/spread.hpp"
#include "test_util.hpp"

using namespace prefnet;
using testutil::pref;
using testutil::TempDir;

namespace {

Network two_nodes(double mu, double sigma) {
  return Network(2, {{0, 1, {mu, sigma}}});
}

Network point_mass_path(int n, double mu) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, {mu, 0.0}});
  return Network(n, std::move(edges));
}

SpreadConfig config(SpreadModel model, int topics, int r, std::uint64_t seed) {
  SpreadConfig cfg;
  cfg.model = model;
  cfg.topics = topics;
  cfg.r = r;
  cfg.seed = seed;
  return cfg;
}

// synthetic combine table assembled exactly like the real builder: a base
// region with the boundary rows pinned, mirrored through the identities
TrTable fake_table() {
  std::uint8_t base[51][51];
  for (int x = 0; x <= 50; ++x)
    for (int y = 0; y <= 50; ++y) {
      if (x == 0 || y == 0) base[x][y] = static_cast<std::uint8_t>(std::max(x, y));
      else if (x == 50 || y == 50) base[x][y] = 50;
      else base[x][y] = static_cast<std::uint8_t>(
               std::min(50, std::max(x, y) + std::min(x, y) / 2));
    }
  TrTable t;
  t.r = 5;
  t.samples_per_cell = 0;
  t.cents.assign(TrTable::kGrid * TrTable::kGrid, 0);
  for (int a = 0; a <= 100; ++a)
    for (int b = 0; b <= 100; ++b) {
      const bool fx = a > 50, fy = b > 50;
      const int v = base[fx ? 100 - a : a][fy ? 100 - b : b];
      t.cents[static_cast<std::size_t>(a) * TrTable::kGrid + b] =
          static_cast<std::uint8_t>((fx != fy) ? 100 - v : v);
    }
  t.verify_identities();
  return t;
}

}  // namespace

TEST_SUITE("spread") {

TEST_CASE("config validation") {
  const Network net = two_nodes(0.2, 0.1);
  CHECK_THROWS_AS(simulate(net, config(SpreadModel::rpm_ic, 1, 8, 1)), std::length_error);
  CHECK_THROWS_AS(simulate(net, config(SpreadModel::rpm_s, 1, 9, 1)), std::length_error);
  CHECK_THROWS_AS(simulate(net, config(SpreadModel::rpm_s, 0, 5, 1)), std::domain_error);
  CHECK(parse_spread_model("rpm-ic") == SpreadModel::rpm_ic);
  CHECK_THROWS_AS(parse_spread_model("rpm-x"), std::domain_error);
  CHECK(parse_neighbor_mode("sigma-based") == NeighborMode::sigma_based);
}

TEST_CASE("all models assign every node and are seed-deterministic") {
  SyntheticConfig g;
  g.n = 24;
  g.ws_k = 4;
  const Network net = generate_synthetic(g, 3);
  for (const auto model : {SpreadModel::rpm_ic, SpreadModel::rpm_s, SpreadModel::rpm_d,
                           SpreadModel::rpm_r}) {
    auto cfg = config(model, 20, 4, 99);
    const TopicProfiles a = simulate(net, cfg);
    for (std::uint16_t rk : a.ranks) CHECK(rk != TopicProfiles::kNoResponse);
    const TopicProfiles b = simulate(net, cfg);
    CHECK(a.ranks == b.ranks);
    cfg.threads = 2;
    const TopicProfiles c = simulate(net, cfg);
    CHECK(a.ranks == c.ranks);  // thread count never changes output
  }
}

TEST_CASE("rpm-r is uniform and ignores topology") {
  const Network net = point_mass_path(4, 0.3);
  auto cfg = config(SpreadModel::rpm_r, 5000, 3, 7);
  const TopicProfiles p = simulate(net, cfg);
  std::vector<int> counts(6, 0);
  for (std::uint16_t rk : p.ranks) ++counts[rk];
  const double n = 4.0 * 5000.0;
  const double expect = n / 6.0;
  const double sigma = std::sqrt(n * (1.0 / 6.0) * (5.0 / 6.0));
  for (int c : counts) CHECK(std::abs(c - expect) <= 3 * sigma);

  // same n, different topology: identical output
  std::vector<Edge> star;
  for (int leaf = 1; leaf < 4; ++leaf) star.push_back({0, leaf, {0.4, 0.1}});
  const TopicProfiles q = simulate(Network(4, std::move(star)), cfg);
  CHECK(p.ranks == q.ranks);
}

TEST_CASE("rpm-r pairwise distance matches the mahonian mean") {
  // brute-force expectation over permutation pairs: 0.5 for r = 5
  double expected = 0.0;
  for (int k = 0; k <= 10; ++k)
    expected += (k / 10.0) * static_cast<double>(count_at_distance(5, k)) / 120.0;
  CHECK(expected == doctest::Approx(0.5));

  const Network net = two_nodes(0.2, 0.1);
  const TopicProfiles p = simulate(net, config(SpreadModel::rpm_r, 20000, 5, 11));
  const auto& space = PermSpace::get(5);
  double mean = 0.0;
  for (int t = 0; t < p.topics; ++t)
    mean += space.distance(p.at(t, 0), p.at(t, 1)) / 10.0;
  mean /= p.topics;
  CHECK(std::abs(mean - expected) <= 3.0 * 0.3 / std::sqrt(20000.0));
}

TEST_CASE("rpm-ic point-mass edges") {
  // distance-0 point mass: the child always copies the parent
  const TopicProfiles copy =
      simulate(two_nodes(0.0, 0.0), config(SpreadModel::rpm_ic, 400, 5, 21));
  for (int t = 0; t < copy.topics; ++t) CHECK(copy.at(t, 0) == copy.at(t, 1));

  // point mass at 0.1 (raw distance 1): uniform over the 4 neighbors
  const TopicProfiles near =
      simulate(two_nodes(0.1, 0.0), config(SpreadModel::rpm_ic, 8000, 5, 22));
  const auto& space = PermSpace::get(5);
  std::map<int, int> lehmer_counts;
  for (int t = 0; t < near.topics; ++t) {
    CHECK(space.distance(near.at(t, 0), near.at(t, 1)) == 1);
  }
}

TEST_CASE("rpm-ic product rule matches a hand evaluation at r=3") {
  // two assigned neighbors with point masses at 0 demanding different
  // preferences: the product scores give a valid normalized choice
  const auto pa = pref({0, 1, 2});
  const auto pb = pref({1, 0, 2});
  const std::pair<EdgeDistribution, std::uint16_t> assigned[] = {
      {{0.0, 0.0}, static_cast<std::uint16_t>(perm_rank(pa.order()))},
      {{0.0, 0.0}, static_cast<std::uint16_t>(perm_rank(pb.order()))},
  };
  const auto scores = spread_detail::ic_log_scores(3, assigned);
  REQUIRE(scores.size() == 6);

  // independent evaluation of the clamped product formula
  const auto& space = PermSpace::get(3);
  const DiscreteDist d0 = discretize(0.0, 0.0, 3);
  std::vector<double> expect(6);
  for (std::uint32_t q = 0; q < 6; ++q) {
    double log_p = 0.0;
    for (const auto& [params, nbr] : assigned) {
      const int dist = space.distance(nbr, q);
      log_p += std::log(std::max(d0.at(dist), 1e-300)) -
               std::log(static_cast<double>(count_at_distance(3, dist)));
    }
    expect[q] = log_p;
  }
  for (std::uint32_t q = 0; q < 6; ++q)
    CHECK(scores[q] == doctest::Approx(expect[q]).epsilon(1e-12));

  // softmax probabilities: the two demanded preferences split evenly
  double mx = *std::max_element(scores.begin(), scores.end());
  double total = 0.0;
  std::vector<double> prob(6);
  for (std::uint32_t q = 0; q < 6; ++q) total += (prob[q] = std::exp(scores[q] - mx));
  for (auto& p : prob) p /= total;
  CHECK(prob[perm_rank(pa.order())] == doctest::Approx(0.5));
  CHECK(prob[perm_rank(pb.order())] == doctest::Approx(0.5));

  // agreeing point-mass neighbors force the common preference
  const std::pair<EdgeDistribution, std::uint16_t> same[] = {
      {{0.0, 0.0}, 0}, {{0.0, 0.0}, 0}};
  const auto agree = spread_detail::ic_log_scores(3, same);
  CHECK(agree[0] == doctest::Approx(0.0));
  CHECK(agree[1] < -600.0);
}

TEST_CASE("rpm-s point-mass path is unanimous and distances follow the edge") {
  const TopicProfiles unanimous =
      simulate(point_mass_path(5, 0.0), config(SpreadModel::rpm_s, 300, 5, 5));
  for (int t = 0; t < unanimous.topics; ++t)
    for (int v = 1; v < 5; ++v) CHECK(unanimous.at(t, 0) == unanimous.at(t, v));

  // single edge: the pair distance histogram follows the edge distribution
  const Network net = two_nodes(0.4, 0.1);
  const TopicProfiles p = simulate(net, config(SpreadModel::rpm_s, 10000, 5, 31));
  const auto& space = PermSpace::get(5);
  std::vector<double> hist(11, 0.0);
  for (int t = 0; t < p.topics; ++t)
    hist[static_cast<std::size_t>(space.distance(p.at(t, 0), p.at(t, 1)))] += 1.0;
  const auto result = chi_square(hist, discretize(0.4, 0.1, 5));
  CHECK(result.pass);
}

TEST_CASE("rpm-s neighbor choice modes") {
  Rng rng(63);
  const EdgeDistribution edges_mu[] = {{0.0, 0.1}, {1.0, 0.1}};
  for (int i = 0; i < 200; ++i)
    CHECK(spread_detail::pick_neighbor(NeighborMode::mu_based, edges_mu, rng) == 0);

  // sigma weights: 1/0.005 vs 1/0.1 -> first picked ~95% of the time
  const EdgeDistribution edges_sigma[] = {{0.5, 0.0}, {0.5, 0.1}};
  int first = 0;
  for (int i = 0; i < 4000; ++i)
    first += spread_detail::pick_neighbor(NeighborMode::sigma_based, edges_sigma, rng) == 0;
  CHECK(first > 3600);
  CHECK(first < 3950);

  const EdgeDistribution one[] = {{0.2, 0.1}};
  CHECK(spread_detail::pick_neighbor(NeighborMode::random, one, rng) == 0);
}

TEST_CASE("rpm-d degenerate initializing sets") {
  SyntheticConfig g;
  g.n = 16;
  g.ws_k = 4;
  const Network net = generate_synthetic(g, 12);

  // s = 1: a single seed preference floods the whole (copying) cascade
  auto cfg = config(SpreadModel::rpm_d, 50, 5, 8);
  cfg.force_init_size = 1;
  const TopicProfiles flood = simulate(net, cfg);
  for (int t = 0; t < flood.topics; ++t)
    for (int v = 1; v < 16; ++v) CHECK(flood.at(t, 0) == flood.at(t, v));

  // s = n: the main loop body runs zero times
  cfg.force_init_size = 16;
  const TopicProfiles all_seed = simulate(net, cfg);
  for (std::uint16_t rk : all_seed.ranks) CHECK(rk != TopicProfiles::kNoResponse);
}

TEST_CASE("rpm-d copies the most similar assigned neighbor") {
  // triangle with point-mass edges; seeds of size 2 make the third node copy
  // its smaller-mu neighbor
  const Network tri(3, {{0, 1, {0.9, 0.0}}, {0, 2, {0.2, 0.0}}, {1, 2, {0.5, 0.0}}});
  auto cfg = config(SpreadModel::rpm_d, 900, 3, 17);
  cfg.force_init_size = 2;
  const TopicProfiles p = simulate(tri, cfg);
  const auto& space = PermSpace::get(3);
  int both_seeded = 0;
  for (int t = 0; t < p.topics; ++t) {
    const int d01 = space.distance(p.at(t, 0), p.at(t, 1));
    const bool two_matches_someone =
        p.at(t, 2) == p.at(t, 0) || p.at(t, 2) == p.at(t, 1);
    CHECK(two_matches_someone);  // node 2 always copies when not seeded first
    if (d01 == 3) {
      // seed was {0,1} (their point-mass edge demands the full reversal):
      // node 2 had both assigned and must copy node 0 (mu 0.2 < 0.5)
      CHECK(p.at(t, 2) == p.at(t, 0));
      ++both_seeded;
    }
  }
  CHECK(both_seeded > 200);  // ~1/3 of topics
}

TEST_CASE("cascade output is identical under scalar and simd kernels") {
  SyntheticConfig g;
  g.n = 30;
  g.ws_k = 4;
  const Network net = generate_synthetic(g, 6);
  auto cfg = config(SpreadModel::rpm_ic, 40, 5, 77);

  const kernels::Isa saved = kernels::active();
  kernels::force(kernels::Isa::scalar);
  const TopicProfiles scalar_run = simulate(net, cfg);
  kernels::force(kernels::Isa::avx2);  // no-op when unsupported
  const TopicProfiles simd_run = simulate(net, cfg);
  kernels::force(saved);
  CHECK(scalar_run.ranks == simd_run.ranks);
}

TEST_CASE("tr table construction, identities, and io") {
  const TrTable t = TrTable::build(5, 400, 77, 2);
  CHECK_NOTHROW(t.verify_identities());
  for (int y = 0; y <= 100; ++y) CHECK(t.at_cents(0, y) == y);
  for (int x = 0; x <= 100; ++x) CHECK(t.at_cents(x, 50) == 50);
  CHECK(t.at(0.1, 0.1) == doctest::Approx(0.17).epsilon(0.25));
  CHECK(t.at_cents(30, 40) >= 40);  // combine never drops below the larger hop

  TempDir dir;
  const auto path = dir.file("table.csv");
  t.save_csv(path);
  const TrTable loaded = TrTable::load_csv(path);
  CHECK(loaded.cents == t.cents);
  CHECK(loaded.r == 5);
  CHECK(loaded.samples_per_cell == 400);

  // cache round trip
  const TrTable c1 = TrTable::load_or_build(3, 150, 5, 2, dir.path());
  CHECK(std::filesystem::exists(dir.file("tr_table_r3_s150.csv")));
  const TrTable c2 = TrTable::load_or_build(3, 150, 5, 2, dir.path());
  CHECK(c1.cents == c2.cents);

  CHECK_THROWS_AS(TrTable::build(9, 10, 1), std::domain_error);
}

TEST_CASE("msm-sp with a hand-built combine table") {
  const TrTable t = fake_table();
  CHECK(t.at_cents(10, 10) == 15);

  // two-hop path: the pair entry is the combined value
  const Network path(3, {{0, 1, {0.1, 0.1}}, {1, 2, {0.1, 0.1}}});
  const DistanceMatrix d = msm_sp(path, t);
  CHECK(d.at(0, 1) == doctest::Approx(0.10));
  CHECK(d.at(0, 2) == doctest::Approx(0.15));
  CHECK(d.at(2, 0) == doctest::Approx(0.15));
  CHECK(d.at(1, 1) == 0.0);

  // a hop above 0.5 switches the combiner to max
  const Network high(3, {{0, 1, {0.2, 0.1}}, {1, 2, {0.9, 0.0}}});
  const DistanceMatrix d2 = msm_sp(high, t);
  CHECK(d2.at(0, 2) == doctest::Approx(0.9));

  // a cheap two-hop detour undercuts a heavy direct edge
  const Network detour(3, {{0, 1, {0.9, 0.0}}, {0, 2, {0.1, 0.1}}, {1, 2, {0.1, 0.1}}});
  const DistanceMatrix d3 = msm_sp(detour, t);
  CHECK(d3.at(0, 1) == doctest::Approx(0.15));

  // fixpoint: one more relaxation pass changes nothing
  const int n = 3;
  std::vector<std::uint8_t> cents(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cents[static_cast<std::size_t>(i) * n + j] =
          static_cast<std::uint8_t>(std::lround(d3.at(i, j) * 100.0));
  CHECK_FALSE(spread_detail::msm_relax_pass(cents, n, t));
}

TEST_CASE("msm-sp on a larger graph stays symmetric with zero diagonal") {
  SyntheticConfig g;
  g.n = 40;
  g.ws_k = 4;
  const Network net = generate_synthetic(g, 4);
  const TrTable t = fake_table();
  const DistanceMatrix d = msm_sp(net, t);
  for (int i = 0; i < 40; ++i) {
    CHECK(d.at(i, i) == 0.0);
    for (int j = 0; j < 40; ++j) {
      CHECK(d.at(i, j) == d.at(j, i));
      if (i != j) CHECK(d.at(i, j) > 0.0);
    }
  }
  // edges on the snapped grid never exceed their initialization
  for (const auto& e : net.edges())
    CHECK(d.at(e.u, e.v) <= std::lround(e.params.mu * 100.0) / 100.0 + 1e-12);
}

}  // TEST_SUITE
