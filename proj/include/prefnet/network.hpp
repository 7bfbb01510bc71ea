#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prefnet/distmodel.hpp"
#include "prefnet/prefmath.hpp"
#include "prefnet/rng.hpp"

namespace prefnet {

struct Edge {
  int u = 0;
  int v = 0;
  EdgeDistribution params;
};

// Undirected social graph with a distance distribution on every edge.
// Invariants: contiguous ids 0..n-1, no self-loops or duplicates, connected,
// edge parameters within bounds.
class Network {
 public:
  Network(int n, std::vector<Edge> edges);

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int idx) const { return edges_[static_cast<std::size_t>(idx)]; }

  // (neighbor id, edge index) pairs
  std::span<const std::pair<int, int>> neighbors(int node) const {
    return {adj_.data() + offsets_[node], adj_.data() + offsets_[node + 1]};
  }
  int degree(int node) const { return offsets_[node + 1] - offsets_[node]; }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_;
  std::vector<std::pair<int, int>> adj_;
};

// Expected pairwise distances d(i,j) in [0,1]; symmetric with zero diagonal.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(int n, double fill = 1.0);

  int n() const { return n_; }
  double at(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
  void set_sym(int i, int j, double value) {
    d_[static_cast<std::size_t>(i) * n_ + j] = value;
    d_[static_cast<std::size_t>(j) * n_ + i] = value;
  }
  std::span<const double> row(int i) const {
    return {d_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }

 private:
  int n_ = 0;
  std::vector<double> d_;
};

// CSV with header "u,v,mu,sigma", one undirected edge per row. Disconnected
// inputs are rejected unless giant_component is set, which keeps the largest
// component and relabels its nodes contiguously.
Network load_network(const std::filesystem::path& path, bool giant_component = false);
void save_network(const Network& net, const std::filesystem::path& path);

enum class GraphModel { watts_strogatz, barabasi_albert, erdos_renyi_giant };

GraphModel parse_graph_model(const std::string& name);

// Per-edge mu drawn from a clipped normal around the preset's connected-pair
// mean; sigma uniform in [0.05, 0.15].
struct EdgeParamPreset {
  double mu_mean = 0.24;
  double mu_sd = 0.05;
  double mu_lo = 0.02;
  double mu_hi = 0.60;
};

// "facebook-all", "facebook-personal", "facebook-social"
EdgeParamPreset edge_preset(const std::string& name);

struct SyntheticConfig {
  GraphModel model = GraphModel::watts_strogatz;
  int n = 500;
  int ws_k = 10;         // ring-lattice neighbors (even)
  double ws_beta = 0.1;  // rewiring probability
  int ba_m = 3;          // attachments per new node
  double er_p = 0.02;    // edge probability
  std::string preset = "facebook-all";
};

// Always returns a connected graph; Erdos-Renyi keeps the giant component
// (node count may shrink), the other models regenerate until connected.
Network generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed);

// MLE-fits every edge's parameters from the per-pair histogram of normalized
// Kendall-Tau distances across topics. Pairs with fewer than min_topics
// common responses keep the fallback parameters.
Network fit_edges_from_profiles(int n, std::span<const std::pair<int, int>> adjacency,
                                const TopicProfiles& profiles,
                                EdgeDistribution fallback = {0.24, 0.10},
                                int min_topics = 6, int threads = 1);

// Top-k nodes by weighted degree, weight 1 - mu; ties to the lower id.
std::vector<int> degree_centrality_ranking(const Network& net, int k);

// Top-k by Freeman betweenness with edge length mu (Brandes over sources,
// ordered-pair accumulation); ties to the lower id.
std::vector<int> betweenness_ranking(const Network& net, int k, int threads = 1);
std::vector<double> betweenness_scores(const Network& net, int threads = 1);

}  // namespace prefnet
