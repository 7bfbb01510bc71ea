#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unistd.h>

#include "doctest.h"
#include "prefnet/network.hpp"
#include "prefnet/spread.hpp"
#include "test_util.hpp"

using namespace prefnet;
using testutil::TempDir;
using testutil::write_file;

namespace {

Network triangle(double mu = 0.2, double sigma = 0.1) {
  return Network(3, {{0, 1, {mu, sigma}}, {1, 2, {mu, sigma}}, {0, 2, {mu, sigma}}});
}

// all-simple-paths betweenness oracle (ordered pairs, like the Brandes
// accumulation)
std::vector<double> brute_betweenness(const Network& net) {
  const int n = net.node_count();
  std::vector<double> score(static_cast<std::size_t>(n), 0.0);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      std::vector<std::vector<int>> paths;
      std::vector<double> lengths;
      std::vector<int> current{s};
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      used[static_cast<std::size_t>(s)] = 1;
      auto dfs = [&](auto&& self, int v, double len) -> void {
        if (v == t) {
          paths.push_back(current);
          lengths.push_back(len);
          return;
        }
        for (const auto& [w, e] : net.neighbors(v)) {
          if (used[static_cast<std::size_t>(w)]) continue;
          used[static_cast<std::size_t>(w)] = 1;
          current.push_back(w);
          self(self, w, len + net.edge(e).params.mu);
          current.pop_back();
          used[static_cast<std::size_t>(w)] = 0;
        }
      };
      dfs(dfs, s, 0.0);
      double best = 1e300;
      for (double len : lengths) best = std::min(best, len);
      double count = 0;
      std::vector<double> through(static_cast<std::size_t>(n), 0.0);
      for (std::size_t p = 0; p < paths.size(); ++p) {
        if (lengths[p] > best + 1e-12) continue;
        count += 1.0;
        for (std::size_t i = 1; i + 1 < paths[p].size(); ++i)
          through[static_cast<std::size_t>(paths[p][i])] += 1.0;
      }
      for (int v = 0; v < n; ++v)
        if (v != s && v != t)
          score[static_cast<std::size_t>(v)] +=
              through[static_cast<std::size_t>(v)] / count;
    }
  return score;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("network construction validates its invariants") {
  const Network tri = triangle();
  CHECK(tri.node_count() == 3);
  CHECK(tri.edge_count() == 3);
  CHECK(tri.degree(0) == 2);

  CHECK_THROWS_AS(Network(3, {{0, 0, {0.2, 0.1}}, {0, 1, {0.2, 0.1}}, {1, 2, {0.2, 0.1}}}),
                  std::domain_error);  // self-loop
  CHECK_THROWS_AS(Network(3, {{0, 1, {0.2, 0.1}}, {1, 0, {0.2, 0.1}}, {1, 2, {0.2, 0.1}}}),
                  std::domain_error);  // duplicate
  CHECK_THROWS_AS(Network(4, {{0, 1, {0.2, 0.1}}, {2, 3, {0.2, 0.1}}}),
                  std::domain_error);  // disconnected
  CHECK_THROWS_AS(Network(3, {{0, 1, {0.2, 0.35}}, {1, 2, {0.2, 0.1}}, {0, 2, {0.2, 0.1}}}),
                  std::domain_error);  // sigma out of range
}

TEST_CASE("network file io") {
  TempDir dir;
  const auto path = write_file(dir, "tri.csv",
                               "u,v,mu,sigma\n0,1,0.2,0.1\n1,2,0.3,0.05\n0,2,0.25,0.12\n");
  const Network net = load_network(path);
  CHECK(net.node_count() == 3);
  CHECK(net.edge_count() == 3);

  const auto out = dir.file("round.csv");
  save_network(net, out);
  const Network again = load_network(out);
  CHECK(again.edge_count() == net.edge_count());
  for (int e = 0; e < net.edge_count(); ++e) {
    CHECK(again.edge(e).u == net.edge(e).u);
    CHECK(again.edge(e).v == net.edge(e).v);
    CHECK(again.edge(e).params.mu == doctest::Approx(net.edge(e).params.mu));
  }

  const auto selfloop = write_file(dir, "loop.csv", "u,v,mu,sigma\n0,0,0.2,0.1\n0,1,0.2,0.1\n");
  CHECK_THROWS(load_network(selfloop));
  const auto disco = write_file(dir, "disco.csv",
                                "u,v,mu,sigma\n0,1,0.2,0.1\n2,3,0.2,0.1\n");
  CHECK_THROWS_AS(load_network(disco), std::domain_error);

  // giant-component extraction keeps the larger component, relabeled
  const auto giant = write_file(
      dir, "giant.csv", "u,v,mu,sigma\n0,1,0.2,0.1\n1,2,0.2,0.1\n3,4,0.2,0.1\n");
  const Network g = load_network(giant, true);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);

  const auto badhdr = write_file(dir, "bad.csv", "a,b,c\n");
  CHECK_THROWS(load_network(badhdr));
}

TEST_CASE("synthetic generation is connected, seeded, and preset-bounded") {
  for (const auto model : {GraphModel::watts_strogatz, GraphModel::barabasi_albert,
                           GraphModel::erdos_renyi_giant}) {
    SyntheticConfig cfg;
    cfg.model = model;
    cfg.n = 60;
    cfg.ws_k = 4;
    cfg.ba_m = 2;
    cfg.er_p = 0.08;
    const Network a = generate_synthetic(cfg, 7);
    const Network b = generate_synthetic(cfg, 7);
    CHECK(a.node_count() >= 3);
    CHECK(a.edge_count() == b.edge_count());
    for (int e = 0; e < a.edge_count(); ++e) {
      CHECK(a.edge(e).u == b.edge(e).u);
      CHECK(a.edge(e).params.mu == b.edge(e).params.mu);
    }
    const EdgeParamPreset preset = edge_preset(cfg.preset);
    for (const auto& edge : a.edges()) {
      CHECK(edge.params.mu >= preset.mu_lo);
      CHECK(edge.params.mu <= preset.mu_hi);
      CHECK(edge.params.sigma >= 0.05);
      CHECK(edge.params.sigma <= 0.15);
    }
    const Network c = generate_synthetic(cfg, 8);
    bool differs = c.edge_count() != a.edge_count();
    for (int e = 0; !differs && e < a.edge_count(); ++e)
      differs = a.edge(e).params.mu != c.edge(e).params.mu;
    CHECK(differs);
  }
  CHECK_THROWS_AS(edge_preset("nope"), std::domain_error);
  CHECK_THROWS_AS(parse_graph_model("nope"), std::domain_error);
}

TEST_CASE("edge fitting from profiles") {
  // two nodes always at raw distance 1 (normalized 0.1)
  const std::pair<int, int> adj[] = {{0, 1}};
  TopicProfiles constant(5, 2, 10);
  const auto base = testutil::pref({0, 1, 2, 3, 4});
  const auto swapped = testutil::pref({1, 0, 2, 3, 4});
  for (int t = 0; t < 10; ++t) {
    constant.at(t, 0) = static_cast<std::uint16_t>(perm_rank(base.order()));
    constant.at(t, 1) = static_cast<std::uint16_t>(perm_rank(swapped.order()));
  }
  const Network fitted = fit_edges_from_profiles(2, adj, constant);
  CHECK(fitted.edge(0).params.mu == doctest::Approx(0.1));
  CHECK(fitted.edge(0).params.sigma == doctest::Approx(0.005));

  // distances sampled from a known distribution are recovered near the truth
  Rng rng(99);
  const DiscreteDist truth = discretize(0.30, 0.10, 5);
  const DistSampler sampler(truth);
  const auto& space = PermSpace::get(5);
  const auto& rows = mahonian_rows_for(5);
  TopicProfiles sampled(5, 2, 10000);
  for (int t = 0; t < 10000; ++t) {
    sampled.at(t, 0) = static_cast<std::uint16_t>(perm_rank(base.order()));
    sampled.at(t, 1) = spread_detail::sample_rank_at_distance(
        space, rows, sampled.at(t, 0), sampler.sample_index(rng), rng);
  }
  const Network recovered = fit_edges_from_profiles(2, adj, sampled);
  CHECK(std::abs(recovered.edge(0).params.mu - 0.30) <= 0.02);
  CHECK(std::abs(recovered.edge(0).params.sigma - 0.10) <= 0.01);

  // too few common topics falls back
  TopicProfiles sparse(5, 2, 3);
  for (int t = 0; t < 3; ++t) {
    sparse.at(t, 0) = static_cast<std::uint16_t>(perm_rank(base.order()));
    sparse.at(t, 1) = static_cast<std::uint16_t>(perm_rank(base.order()));
  }
  const Network fallback = fit_edges_from_profiles(2, adj, sparse, {0.24, 0.10});
  CHECK(fallback.edge(0).params.mu == doctest::Approx(0.24));
  CHECK(fallback.edge(0).params.sigma == doctest::Approx(0.10));
}

TEST_CASE("degree centrality ranking") {
  // star: center 0 linked to 1..4 with equal weights
  std::vector<Edge> edges;
  for (int leaf = 1; leaf <= 4; ++leaf) edges.push_back({0, leaf, {0.2, 0.1}});
  const Network star(5, std::move(edges));
  CHECK(degree_centrality_ranking(star, 1) == std::vector<int>{0});
  const auto all = degree_centrality_ranking(star, 5);
  CHECK(all.size() == 5);
  CHECK(all[0] == 0);
  CHECK(all[1] == 1);  // leaves tie, lower id first

  // path with distinct mus: weighted degrees 0.9, 1.5, 1.4, 1.35, 0.55
  const Network path(
      5, {{0, 1, {0.10, 0.1}}, {1, 2, {0.40, 0.1}}, {2, 3, {0.20, 0.1}}, {3, 4, {0.45, 0.1}}});
  CHECK(degree_centrality_ranking(path, 5) == std::vector<int>{1, 2, 3, 0, 4});
  CHECK_THROWS_AS(degree_centrality_ranking(path, 0), std::domain_error);
  CHECK_THROWS_AS(degree_centrality_ranking(path, 6), std::domain_error);
}

TEST_CASE("betweenness ranking on simple shapes") {
  const Network path(3, {{0, 1, {0.2, 0.1}}, {1, 2, {0.2, 0.1}}});
  const auto scores = betweenness_scores(path);
  CHECK(scores[0] == 0.0);
  CHECK(scores[2] == 0.0);
  CHECK(scores[1] == doctest::Approx(2.0));  // ordered pairs (0,2) and (2,0)
  CHECK(betweenness_ranking(path, 1) == std::vector<int>{1});

  // complete graph with uniform weights: all scores equal, ids win ties
  std::vector<Edge> kedges;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) kedges.push_back({i, j, {0.3, 0.1}});
  const Network complete(5, std::move(kedges));
  CHECK(betweenness_ranking(complete, 3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("betweenness matches the all-paths oracle") {
  for (int trial = 0; trial < 12; ++trial) {
    SyntheticConfig cfg;
    cfg.model = GraphModel::erdos_renyi_giant;
    cfg.n = 7;
    cfg.er_p = 0.5;
    const Network net = generate_synthetic(cfg, 100 + static_cast<std::uint64_t>(trial));
    const auto fast = betweenness_scores(net, 2);
    const auto brute = brute_betweenness(net);
    for (int v = 0; v < net.node_count(); ++v)
      CHECK(fast[static_cast<std::size_t>(v)] ==
            doctest::Approx(brute[static_cast<std::size_t>(v)]).epsilon(1e-9));
  }
}

}  // TEST_SUITE
