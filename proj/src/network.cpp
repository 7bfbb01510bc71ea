#include "prefnet/network.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_set>

#include "prefnet/parallel.hpp"

namespace prefnet {

namespace {

std::uint64_t edge_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

std::vector<int> component_labels(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& e : edges) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    stack.push_back(s);
    label[static_cast<std::size_t>(s)] = next;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<std::size_t>(v)])
        if (label[static_cast<std::size_t>(w)] < 0) {
          label[static_cast<std::size_t>(w)] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return label;
}

}  // namespace

Network::Network(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) throw std::domain_error("network needs at least 2 nodes");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges_.size() * 2);
  for (auto& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_)
      throw std::domain_error("edge endpoint out of range");
    if (e.u == e.v) throw std::domain_error("self-loop edge");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (!seen.insert(edge_key(e.u, e.v)).second)
      throw std::domain_error("duplicate edge");
    validate_edge_distribution(e.params);
  }

  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[static_cast<std::size_t>(e.u) + 1];
    ++offsets_[static_cast<std::size_t>(e.v) + 1];
  }
  for (int i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
  adj_.resize(static_cast<std::size_t>(offsets_[n_]));
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (int idx = 0; idx < edge_count(); ++idx) {
    const auto& e = edges_[static_cast<std::size_t>(idx)];
    adj_[static_cast<std::size_t>(cursor[e.u]++)] = {e.v, idx};
    adj_[static_cast<std::size_t>(cursor[e.v]++)] = {e.u, idx};
  }

  const auto label = component_labels(n_, edges_);
  for (int v = 0; v < n_; ++v)
    if (label[static_cast<std::size_t>(v)] != 0)
      throw std::domain_error("network is disconnected");
}

DistanceMatrix::DistanceMatrix(int n, double fill)
    : n_(n), d_(static_cast<std::size_t>(n) * n, fill) {
  for (int i = 0; i < n_; ++i) d_[static_cast<std::size_t>(i) * n_ + i] = 0.0;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(',', pos);
    if (next == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed number: '" + s + "'");
  }
}

int parse_int(const std::string& s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::runtime_error("malformed integer: '" + s + "'");
  return v;
}

}  // namespace

Network load_network(const std::filesystem::path& path, bool giant_component) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"u", "v", "mu", "sigma"})
    throw std::runtime_error("network file must start with header u,v,mu,sigma");

  int max_node = -1;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) throw std::runtime_error("network row needs 4 fields");
    Edge e;
    e.u = parse_int(f[0]);
    e.v = parse_int(f[1]);
    e.params = {parse_double(f[2]), parse_double(f[3])};
    max_node = std::max({max_node, e.u, e.v});
    edges.push_back(e);
  }
  if (edges.empty()) throw std::runtime_error("network file has no edges");
  const int n = max_node + 1;

  if (giant_component) {
    const auto label = component_labels(n, edges);
    std::vector<int> size(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v) ++size[static_cast<std::size_t>(label[v])];
    const int giant = static_cast<int>(
        std::max_element(size.begin(), size.end()) - size.begin());
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int v = 0; v < n; ++v)
      if (label[static_cast<std::size_t>(v)] == giant) remap[v] = next++;
    std::vector<Edge> kept;
    for (const auto& e : edges)
      if (remap[static_cast<std::size_t>(e.u)] >= 0 && remap[static_cast<std::size_t>(e.v)] >= 0)
        kept.push_back({remap[static_cast<std::size_t>(e.u)], remap[static_cast<std::size_t>(e.v)], e.params});
    return Network(next, std::move(kept));
  }
  return Network(n, std::move(edges));
}

void save_network(const Network& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write network file: " + path.string());
  out << "u,v,mu,sigma\n";
  char buf[96];
  for (const auto& e : net.edges()) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f\n", e.u, e.v, e.params.mu,
                  e.params.sigma);
    out << buf;
  }
}

GraphModel parse_graph_model(const std::string& name) {
  if (name == "ws" || name == "watts-strogatz") return GraphModel::watts_strogatz;
  if (name == "ba" || name == "barabasi-albert") return GraphModel::barabasi_albert;
  if (name == "er" || name == "erdos-renyi-giant") return GraphModel::erdos_renyi_giant;
  throw std::domain_error("unknown graph model: " + name);
}

EdgeParamPreset edge_preset(const std::string& name) {
  // connected-pair means scaled from the all-topics value by the published
  // per-type population means; spreads follow the population deviations
  if (name == "facebook-all") return {0.24, 0.12, 0.02, 0.60};
  if (name == "facebook-personal") return {0.27, 0.07, 0.02, 0.70};
  if (name == "facebook-social") return {0.21, 0.04, 0.02, 0.60};
  throw std::domain_error("unknown edge preset: " + name);
}

namespace {

std::vector<std::pair<int, int>> topology_ws(int n, int k, double beta, Rng& rng) {
  if (k < 2 || k % 2 != 0 || k >= n)
    throw std::domain_error("watts-strogatz needs even k with 2 <= k < n");
  std::unordered_set<std::uint64_t> present;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 1; j <= k / 2; ++j) {
      const int v = (i + j) % n;
      edges.emplace_back(i, v);
      present.insert(edge_key(i, v));
    }
  for (auto& [u, v] : edges) {
    if (rng.uniform01() >= beta) continue;
    for (int tries = 0; tries < 64; ++tries) {
      const int w = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (w == u || w == v || present.count(edge_key(u, w))) continue;
      present.erase(edge_key(u, v));
      present.insert(edge_key(u, w));
      v = w;
      break;
    }
  }
  return edges;
}

std::vector<std::pair<int, int>> topology_ba(int n, int m, Rng& rng) {
  if (m < 1 || m + 1 > n) throw std::domain_error("barabasi-albert needs 1 <= m < n");
  std::vector<std::pair<int, int>> edges;
  std::vector<int> endpoint_pool;
  for (int i = 0; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) {
      edges.emplace_back(i, j);
      endpoint_pool.push_back(i);
      endpoint_pool.push_back(j);
    }
  std::unordered_set<int> chosen;
  for (int v = m + 1; v < n; ++v) {
    chosen.clear();
    while (static_cast<int>(chosen.size()) < m) {
      const int t = endpoint_pool[rng.below(endpoint_pool.size())];
      chosen.insert(t);
    }
    for (int t : chosen) {
      edges.emplace_back(t, v);
      endpoint_pool.push_back(t);
      endpoint_pool.push_back(v);
    }
  }
  return edges;
}

std::vector<std::pair<int, int>> topology_er(int n, double p, Rng& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("erdos-renyi needs p in (0,1]");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform01() < p) edges.emplace_back(i, j);
  return edges;
}

bool is_connected(int n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> tmp;
  tmp.reserve(pairs.size());
  for (auto [u, v] : pairs) tmp.push_back({u, v, {0.5, 0.0}});
  const auto label = component_labels(n, tmp);
  return std::all_of(label.begin(), label.end(), [](int l) { return l == 0; });
}

}  // namespace

Network generate_synthetic(const SyntheticConfig& cfg, std::uint64_t seed) {
  if (cfg.n < 3) throw std::domain_error("synthetic network needs n >= 3");
  const EdgeParamPreset preset = edge_preset(cfg.preset);
  const Rng base(seed);

  std::vector<std::pair<int, int>> pairs;
  int n = cfg.n;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 256) throw std::runtime_error("could not generate a connected graph");
    Rng rng = base.derive("topology", static_cast<std::uint64_t>(attempt));
    switch (cfg.model) {
      case GraphModel::watts_strogatz:
        pairs = topology_ws(cfg.n, cfg.ws_k, cfg.ws_beta, rng);
        break;
      case GraphModel::barabasi_albert:
        pairs = topology_ba(cfg.n, cfg.ba_m, rng);
        break;
      case GraphModel::erdos_renyi_giant: {
        pairs = topology_er(cfg.n, cfg.er_p, rng);
        // keep the giant component, relabeled
        std::vector<Edge> tmp;
        for (auto [u, v] : pairs) tmp.push_back({u, v, {0.5, 0.0}});
        const auto label = component_labels(cfg.n, tmp);
        std::vector<int> size(static_cast<std::size_t>(cfg.n), 0);
        for (int v = 0; v < cfg.n; ++v) ++size[static_cast<std::size_t>(label[v])];
        const int giant = static_cast<int>(
            std::max_element(size.begin(), size.end()) - size.begin());
        if (size[static_cast<std::size_t>(giant)] < 3) continue;
        std::vector<int> remap(static_cast<std::size_t>(cfg.n), -1);
        int next = 0;
        for (int v = 0; v < cfg.n; ++v)
          if (label[static_cast<std::size_t>(v)] == giant) remap[v] = next++;
        std::vector<std::pair<int, int>> kept;
        for (auto [u, v] : pairs)
          if (remap[static_cast<std::size_t>(u)] >= 0 && remap[static_cast<std::size_t>(v)] >= 0)
            kept.emplace_back(remap[static_cast<std::size_t>(u)], remap[static_cast<std::size_t>(v)]);
        pairs = std::move(kept);
        n = next;
        break;
      }
    }
    if (cfg.model == GraphModel::erdos_renyi_giant || is_connected(cfg.n, pairs)) break;
  }

  for (auto& [u, v] : pairs)
    if (u > v) std::swap(u, v);
  std::sort(pairs.begin(), pairs.end());

  Rng prng = base.derive("edge-params");
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    Edge e;
    e.u = u;
    e.v = v;
    e.params.mu = std::clamp(preset.mu_mean + preset.mu_sd * prng.normal(),
                             preset.mu_lo, preset.mu_hi);
    e.params.sigma = prng.uniform(0.05, 0.15);
    edges.push_back(e);
  }
  return Network(n, std::move(edges));
}

Network fit_edges_from_profiles(int n, std::span<const std::pair<int, int>> adjacency,
                                const TopicProfiles& profiles,
                                EdgeDistribution fallback, int min_topics,
                                int threads) {
  validate_edge_distribution(fallback);
  if (profiles.nodes != n) throw std::domain_error("profile node count mismatch");
  const int r = profiles.r;
  const int grid = max_raw_distance(r) + 1;
  const PermSpace* space = r <= 7 ? &PermSpace::get(r) : nullptr;

  std::vector<Edge> edges(adjacency.size());
  std::vector<char> skipped(adjacency.size(), 0);
  parallel_for(adjacency.size(), threads, [&](std::size_t idx) {
    const auto [u, v] = adjacency[idx];
    std::vector<double> hist(static_cast<std::size_t>(grid), 0.0);
    int count = 0;
    for (int t = 0; t < profiles.topics; ++t) {
      const std::uint16_t a = profiles.at(t, u);
      const std::uint16_t b = profiles.at(t, v);
      if (a == TopicProfiles::kNoResponse || b == TopicProfiles::kNoResponse)
        continue;
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
      ++count;
    }
    Edge e;
    e.u = u;
    e.v = v;
    e.params = count >= min_topics ? fit_mle(hist, r) : fallback;
    skipped[idx] = count < min_topics;
    edges[idx] = e;
  });
  long skipped_total = 0;
  for (char s : skipped) skipped_total += s;
  if (skipped_total > 0)
    std::fprintf(stderr,
                 "fit_edges_from_profiles: %ld of %zu pairs below the %d-topic "
                 "threshold, kept fallback parameters\n",
                 skipped_total, adjacency.size(), min_topics);
  return Network(n, std::move(edges));
}

namespace {

std::vector<int> top_k_by_score(const std::vector<double>& score, int k) {
  const int n = static_cast<int>(score.size());
  if (k < 1 || k > n) throw std::domain_error("k out of range");
  std::vector<int> ids(score.size());
  for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (score[static_cast<std::size_t>(a)] != score[static_cast<std::size_t>(b)])
      return score[static_cast<std::size_t>(a)] > score[static_cast<std::size_t>(b)];
    return a < b;
  });
  ids.resize(static_cast<std::size_t>(k));
  return ids;
}

}  // namespace

std::vector<int> degree_centrality_ranking(const Network& net, int k) {
  std::vector<double> score(static_cast<std::size_t>(net.node_count()), 0.0);
  for (const auto& e : net.edges()) {
    const double w = 1.0 - e.params.mu;
    score[static_cast<std::size_t>(e.u)] += w;
    score[static_cast<std::size_t>(e.v)] += w;
  }
  return top_k_by_score(score, k);
}

std::vector<double> betweenness_scores(const Network& net, int threads) {
  const int n = net.node_count();
  constexpr double kEps = 1e-12;
  constexpr int kBlock = 32;
  const int blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> partial(
      static_cast<std::size_t>(blocks),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));

  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t blk) {
    auto& acc = partial[blk];
    std::vector<double> dist(static_cast<std::size_t>(n));
    std::vector<double> sigma(static_cast<std::size_t>(n));
    std::vector<double> delta(static_cast<std::size_t>(n));
    std::vector<char> settled(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));

    const int s_lo = static_cast<int>(blk) * kBlock;
    const int s_hi = std::min(n, s_lo + kBlock);
    for (int s = s_lo; s < s_hi; ++s) {
      std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
      std::fill(sigma.begin(), sigma.end(), 0.0);
      std::fill(delta.begin(), delta.end(), 0.0);
      std::fill(settled.begin(), settled.end(), 0);
      for (auto& p : preds) p.clear();
      order.clear();

      using Item = std::pair<double, int>;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      dist[static_cast<std::size_t>(s)] = 0.0;
      sigma[static_cast<std::size_t>(s)] = 1.0;
      heap.emplace(0.0, s);
      while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (settled[static_cast<std::size_t>(v)]) continue;
        settled[static_cast<std::size_t>(v)] = 1;
        order.push_back(v);
        for (const auto& [w, eidx] : net.neighbors(v)) {
          const double nd = d + net.edge(eidx).params.mu;
          if (nd < dist[static_cast<std::size_t>(w)] - kEps) {
            dist[static_cast<std::size_t>(w)] = nd;
            sigma[static_cast<std::size_t>(w)] = sigma[static_cast<std::size_t>(v)];
            preds[static_cast<std::size_t>(w)].assign(1, v);
            heap.emplace(nd, w);
          } else if (std::abs(nd - dist[static_cast<std::size_t>(w)]) <= kEps &&
                     !settled[static_cast<std::size_t>(w)]) {
            sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
            preds[static_cast<std::size_t>(w)].push_back(v);
          }
        }
      }
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int w = *it;
        for (int v : preds[static_cast<std::size_t>(w)])
          delta[static_cast<std::size_t>(v)] +=
              sigma[static_cast<std::size_t>(v)] / sigma[static_cast<std::size_t>(w)] *
              (1.0 + delta[static_cast<std::size_t>(w)]);
        if (w != s) acc[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
      }
    }
  });

  std::vector<double> score(static_cast<std::size_t>(n), 0.0);
  for (const auto& acc : partial)
    for (int v = 0; v < n; ++v) score[static_cast<std::size_t>(v)] += acc[static_cast<std::size_t>(v)];
  return score;
}

std::vector<int> betweenness_ranking(const Network& net, int k, int threads) {
  return top_k_by_score(betweenness_scores(net, threads), k);
}

}  // namespace prefnet
