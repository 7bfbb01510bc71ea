#include "prefnet/spread.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "prefnet/kernels.hpp"
#include "prefnet/parallel.hpp"

namespace prefnet {

SpreadModel parse_spread_model(const std::string& name) {
  if (name == "rpm-ic") return SpreadModel::rpm_ic;
  if (name == "rpm-s") return SpreadModel::rpm_s;
  if (name == "rpm-d") return SpreadModel::rpm_d;
  if (name == "rpm-r") return SpreadModel::rpm_r;
  throw std::domain_error("unknown spread model: " + name);
}

std::string spread_model_name(SpreadModel model) {
  switch (model) {
    case SpreadModel::rpm_ic: return "rpm-ic";
    case SpreadModel::rpm_s: return "rpm-s";
    case SpreadModel::rpm_d: return "rpm-d";
    case SpreadModel::rpm_r: return "rpm-r";
  }
  return "?";
}

NeighborMode parse_neighbor_mode(const std::string& name) {
  if (name == "random") return NeighborMode::random;
  if (name == "mu" || name == "mu-based") return NeighborMode::mu_based;
  if (name == "sigma" || name == "sigma-based") return NeighborMode::sigma_based;
  throw std::domain_error("unknown neighbor mode: " + name);
}

namespace spread_detail {

std::uint16_t sample_rank_at_distance(const PermSpace& space,
                                      const MahonianRows& rows,
                                      std::uint16_t from, int k, Rng& rng) {
  const int r = space.r();
  int lehmer[8] = {0};
  int rem = k;
  for (int i = 0; i < r - 1; ++i) {
    const int n = r - i;
    const auto& sub = rows[static_cast<std::size_t>(n - 1)];
    const int sub_kmax = static_cast<int>(sub.size()) - 1;
    const int dmax = std::min(rem, n - 1);
    std::uint64_t total = 0;
    for (int d = 0; d <= dmax; ++d)
      if (rem - d <= sub_kmax) total += sub[static_cast<std::size_t>(rem - d)];
    std::uint64_t u = rng.below(total);
    int digit = dmax;
    for (int d = 0; d <= dmax; ++d) {
      if (rem - d > sub_kmax) continue;
      if (u < sub[static_cast<std::size_t>(rem - d)]) {
        digit = d;
        break;
      }
      u -= sub[static_cast<std::size_t>(rem - d)];
    }
    lehmer[i] = digit;
    rem -= digit;
  }

  Alt avail[8];
  const Alt* base = space.perm(from);
  for (int i = 0; i < r; ++i) avail[i] = base[i];
  Alt out[8];
  int navail = r;
  for (int i = 0; i < r; ++i) {
    const int d = lehmer[i];
    out[i] = avail[d];
    for (int j = d; j + 1 < navail; ++j) avail[j] = avail[j + 1];
    --navail;
  }
  return static_cast<std::uint16_t>(perm_rank({out, static_cast<std::size_t>(r)}));
}

int pick_neighbor(NeighborMode mode, std::span<const EdgeDistribution> edges,
                  Rng& rng) {
  const std::size_t m = edges.size();
  if (m == 1 || mode == NeighborMode::random)
    return static_cast<int>(rng.below(m));
  double cum[64];
  std::vector<double> heap_cum;
  double* c = m <= 64 ? cum : (heap_cum.resize(m), heap_cum.data());
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double w = mode == NeighborMode::mu_based
                         ? 1.0 - edges[i].mu
                         : 1.0 / std::max(edges[i].sigma, kMinFitSigma);
    acc += std::max(0.0, w);
    c[i] = acc;
  }
  if (acc <= 0.0) return static_cast<int>(rng.below(m));
  return static_cast<int>(rng.pick_cumulative({c, m}));
}

}  // namespace spread_detail

namespace {

constexpr double kLogPmfFloor = 1e-300;

// per-edge log( pmf / count_at_distance ) over the raw-distance grid
std::vector<double> build_ic_weights(const Network& net, int r) {
  const int grid = max_raw_distance(r) + 1;
  const auto& rows = mahonian_rows_for(r);
  std::vector<double> log_mah(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k)
    log_mah[static_cast<std::size_t>(k)] =
        std::log(static_cast<double>(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)]));
  std::vector<double> logw(static_cast<std::size_t>(net.edge_count()) * grid);
  for (int e = 0; e < net.edge_count(); ++e) {
    const DiscreteDist dist = discretize(net.edge(e).params, r);
    for (int k = 0; k < grid; ++k)
      logw[static_cast<std::size_t>(e) * grid + k] =
          std::log(std::max(dist.at(k), kLogPmfFloor)) - log_mah[static_cast<std::size_t>(k)];
  }
  return logw;
}

void add_ic_neighbor(const PermSpace& space, std::span<const double> logw_edge,
                     std::uint16_t neighbor_rank, std::span<double> scores) {
  const std::uint32_t count = space.count();
  if (space.has_distance_table()) {
    kernels::gather_add(scores, {space.distance_row(neighbor_rank), count},
                        logw_edge);
    return;
  }
  // r = 8: no precomputed table, count inversions per candidate
  const int r = space.r();
  const Alt* pa = space.inverse(neighbor_rank);
  for (std::uint32_t q = 0; q < count; ++q) {
    const Alt* pb = space.inverse(q);
    int d = 0;
    for (int x = 0; x < r; ++x)
      for (int y = x + 1; y < r; ++y)
        d += (pa[x] < pa[y]) != (pb[x] < pb[y]);
    scores[q] += logw_edge[static_cast<std::size_t>(d)];
  }
}

// multinomial draw from softmax of the scores
std::uint16_t draw_from_scores(std::span<double> scores, std::vector<double>& buf,
                               Rng& rng) {
  const double m = kernels::max_value(scores);
  buf.resize(scores.size());
  double total = 0.0;
  for (std::size_t q = 0; q < scores.size(); ++q) {
    total += std::exp(scores[q] - m);
    buf[q] = total;
  }
  const double u = rng.uniform01() * total;
  std::size_t lo = 0, hi = buf.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (buf[mid] <= u)
      lo = mid + 1;
    else
      hi = mid;
  }
  return static_cast<std::uint16_t>(lo);
}

struct Frontier {
  std::vector<int> items;
  std::vector<int> pos;  // position in items, -1 if absent

  void reset(int n) {
    items.clear();
    pos.assign(static_cast<std::size_t>(n), -1);
  }
  bool contains(int v) const { return pos[static_cast<std::size_t>(v)] >= 0; }
  void push(int v) {
    pos[static_cast<std::size_t>(v)] = static_cast<int>(items.size());
    items.push_back(v);
  }
  void remove(int v) {
    const int at = pos[static_cast<std::size_t>(v)];
    const int last = items.back();
    items[static_cast<std::size_t>(at)] = last;
    pos[static_cast<std::size_t>(last)] = at;
    items.pop_back();
    pos[static_cast<std::size_t>(v)] = -1;
  }
  int pick(Rng& rng) { return items[rng.below(items.size())]; }
  bool empty() const { return items.empty(); }
};

struct CascadeTables {
  const PermSpace* space = nullptr;
  const MahonianRows* rows = nullptr;
  std::vector<double> ic_logw;          // edge-major, IC and D seeding
  std::vector<DistSampler> samplers;    // RPM-S
  int grid = 0;
};

struct TopicWorker {
  const Network& net;
  const SpreadConfig& cfg;
  const CascadeTables& tables;
  Frontier frontier;
  std::vector<std::uint16_t> rank;  // per node, kNoResponse = unassigned
  std::vector<double> scores;
  std::vector<double> buf;
  std::vector<std::pair<int, int>> assigned_nbrs;  // (neighbor, edge idx)

  explicit TopicWorker(const Network& n, const SpreadConfig& c,
                       const CascadeTables& t)
      : net(n), cfg(c), tables(t) {}

  void assign(int u, std::uint16_t value) {
    if (frontier.contains(u)) frontier.remove(u);
    rank[static_cast<std::size_t>(u)] = value;
    for (const auto& [w, e] : net.neighbors(u)) {
      (void)e;
      if (rank[static_cast<std::size_t>(w)] == TopicProfiles::kNoResponse &&
          !frontier.contains(w))
        frontier.push(w);
    }
  }

  void collect_assigned(int u) {
    assigned_nbrs.clear();
    for (const auto& [w, e] : net.neighbors(u))
      if (rank[static_cast<std::size_t>(w)] != TopicProfiles::kNoResponse)
        assigned_nbrs.emplace_back(w, e);
  }

  std::uint16_t ic_draw(int u, Rng& rng) {
    collect_assigned(u);
    scores.assign(tables.space->count(), 0.0);
    for (const auto& [w, e] : assigned_nbrs)
      add_ic_neighbor(*tables.space,
                      {tables.ic_logw.data() + static_cast<std::size_t>(e) * tables.grid,
                       static_cast<std::size_t>(tables.grid)},
                      rank[static_cast<std::size_t>(w)], scores);
    return draw_from_scores(scores, buf, rng);
  }

  void run(int topic, Rng rng, TopicProfiles& out) {
    const int n = net.node_count();
    rank.assign(static_cast<std::size_t>(n), TopicProfiles::kNoResponse);
    frontier.reset(n);

    if (cfg.model == SpreadModel::rpm_d) {
      // connected random-growth initializing set, seeded by the IC rule
      const int cap = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
      int s = cfg.force_init_size
                  ? *cfg.force_init_size
                  : 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cap)));
      s = std::clamp(s, 1, n);
      const int first = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      assign(first, ic_draw(first, rng));
      for (int grown = 1; grown < s; ++grown) {
        const int u = frontier.pick(rng);
        assign(u, ic_draw(u, rng));
      }
    } else {
      const int first = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      const auto value = static_cast<std::uint16_t>(rng.below(tables.space->count()));
      assign(first, value);
    }

    while (!frontier.empty()) {
      const int u = frontier.pick(rng);
      std::uint16_t value = 0;
      switch (cfg.model) {
        case SpreadModel::rpm_ic:
          value = ic_draw(u, rng);
          break;
        case SpreadModel::rpm_s: {
          collect_assigned(u);
          EdgeDistribution params[64];
          std::vector<EdgeDistribution> heap_params;
          EdgeDistribution* ep = assigned_nbrs.size() <= 64
                                     ? params
                                     : (heap_params.resize(assigned_nbrs.size()),
                                        heap_params.data());
          for (std::size_t i = 0; i < assigned_nbrs.size(); ++i)
            ep[i] = net.edge(assigned_nbrs[i].second).params;
          const int pick = spread_detail::pick_neighbor(
              cfg.mode, {ep, assigned_nbrs.size()}, rng);
          const auto [w, e] = assigned_nbrs[static_cast<std::size_t>(pick)];
          const int k = tables.samplers[static_cast<std::size_t>(e)].sample_index(rng);
          value = spread_detail::sample_rank_at_distance(
              *tables.space, *tables.rows, rank[static_cast<std::size_t>(w)], k, rng);
          break;
        }
        case SpreadModel::rpm_d: {
          collect_assigned(u);
          double best = std::numeric_limits<double>::infinity();
          int ties = 0;
          int chosen = -1;
          for (const auto& [w, e] : assigned_nbrs) {
            const double mu = net.edge(e).params.mu;
            if (mu < best) {
              best = mu;
              ties = 1;
              chosen = w;
            } else if (mu == best) {
              // reservoir pick among exact ties
              ++ties;
              if (rng.below(static_cast<std::uint64_t>(ties)) == 0) chosen = w;
            }
          }
          value = rank[static_cast<std::size_t>(chosen)];
          break;
        }
        case SpreadModel::rpm_r:
          break;  // handled outside
      }
      assign(u, value);
    }

    for (int v = 0; v < n; ++v) out.at(topic, v) = rank[static_cast<std::size_t>(v)];
  }
};

}  // namespace

namespace spread_detail {

std::vector<double> ic_log_scores(
    int r, std::span<const std::pair<EdgeDistribution, std::uint16_t>> assigned) {
  const PermSpace& space = PermSpace::get(r);
  const auto& rows = mahonian_rows_for(r);
  const int grid = max_raw_distance(r) + 1;
  std::vector<double> logw(static_cast<std::size_t>(grid));
  std::vector<double> scores(space.count(), 0.0);
  for (const auto& [params, nbr_rank] : assigned) {
    const DiscreteDist dist = discretize(params, r);
    for (int k = 0; k < grid; ++k)
      logw[static_cast<std::size_t>(k)] =
          std::log(std::max(dist.at(k), kLogPmfFloor)) -
          std::log(static_cast<double>(rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)]));
    add_ic_neighbor(space, logw, nbr_rank, scores);
  }
  return scores;
}

}  // namespace spread_detail

TopicProfiles simulate(const Network& net, const SpreadConfig& cfg) {
  if (cfg.topics < 1) throw std::domain_error("topic count must be positive");
  if (cfg.r < 2) throw std::domain_error("alternative count out of range");
  if (cfg.model == SpreadModel::rpm_ic) {
    if (cfg.r > 7)
      throw std::length_error("rpm-ic scores all r! candidates and is capped at r = 7");
  } else if (cfg.r > 8) {
    throw std::length_error("spread models are capped at r = 8");
  }

  TopicProfiles out(cfg.r, net.node_count(), cfg.topics);
  const Rng base(cfg.seed);

  if (cfg.model == SpreadModel::rpm_r) {
    const std::uint32_t count = factorial(cfg.r);
    parallel_for(static_cast<std::size_t>(cfg.topics), cfg.threads, [&](std::size_t t) {
      Rng rng = base.derive("topic", t);
      for (int v = 0; v < net.node_count(); ++v)
        out.at(static_cast<int>(t), v) = static_cast<std::uint16_t>(rng.below(count));
    });
    return out;
  }

  CascadeTables tables;
  tables.space = &PermSpace::get(cfg.r);
  tables.rows = &mahonian_rows_for(cfg.r);
  tables.grid = max_raw_distance(cfg.r) + 1;
  if (cfg.model == SpreadModel::rpm_ic || cfg.model == SpreadModel::rpm_d)
    tables.ic_logw = build_ic_weights(net, cfg.r);
  if (cfg.model == SpreadModel::rpm_s) {
    tables.samplers.reserve(static_cast<std::size_t>(net.edge_count()));
    for (int e = 0; e < net.edge_count(); ++e)
      tables.samplers.emplace_back(discretize(net.edge(e).params, cfg.r));
  }

  parallel_for(static_cast<std::size_t>(cfg.topics), cfg.threads, [&](std::size_t t) {
    TopicWorker worker(net, cfg, tables);
    worker.run(static_cast<int>(t), base.derive("topic", t), out);
  });
  return out;
}

double TrTable::at(double dx, double dy) const {
  const int x = std::clamp(static_cast<int>(std::lround(dx * 100.0)), 0, 100);
  const int y = std::clamp(static_cast<int>(std::lround(dy * 100.0)), 0, 100);
  return at_cents(x, y) / 100.0;
}

TrTable TrTable::build(int r, int samples_per_cell, std::uint64_t seed, int threads) {
  if (r < 2 || r > 7) throw std::domain_error("T_r table supports r in [2,7]");
  if (samples_per_cell < 1) throw std::domain_error("samples per cell must be positive");

  const PermSpace& space = PermSpace::get(r);
  const auto& rows = mahonian_rows_for(r);
  const int c = max_raw_distance(r);
  const Rng base(seed);

  // Per hop-mean samplers over a quantized deviation range (0, sigma_max(d)].
  // The hop mean is the parent location of the drawn distribution.
  constexpr int kSigmaLevels = 32;
  std::vector<std::vector<DistSampler>> pool(50);
  parallel_for(49, threads, [&](std::size_t i) {
    const int d = static_cast<int>(i) + 1;
    const double mean = d / 100.0;
    const double smax = sigma_max(mean);
    auto& samplers = pool[static_cast<std::size_t>(d)];
    samplers.reserve(kSigmaLevels);
    for (int j = 0; j < kSigmaLevels; ++j) {
      const double sd = smax * (j + 0.5) / kSigmaLevels;
      samplers.emplace_back(discretize(mean, sd, r));
    }
  });

  // Monte-Carlo estimate of the canonical region (1..49 x 1..49, x <= y)
  std::vector<std::pair<int, int>> cells;
  for (int x = 1; x <= 49; ++x)
    for (int y = x; y <= 49; ++y) cells.emplace_back(x, y);
  std::vector<std::uint8_t> base_region(51 * 51, 0);

  parallel_for(cells.size(), threads, [&](std::size_t idx) {
    const auto [x, y] = cells[idx];
    Rng rng = base.derive("tr-cell", static_cast<std::uint64_t>(x) * 101 + y);
    const auto& pool_x = pool[static_cast<std::size_t>(x)];
    const auto& pool_y = pool[static_cast<std::size_t>(y)];
    std::uint64_t acc = 0;
    for (int s = 0; s < samples_per_cell; ++s) {
      const auto& sx = pool_x[rng.below(kSigmaLevels)];
      const auto& sy = pool_y[rng.below(kSigmaLevels)];
      const int kx = sx.sample_index(rng);
      const int ky = sy.sample_index(rng);
      const std::uint16_t pi =
          spread_detail::sample_rank_at_distance(space, rows, 0, kx, rng);
      const std::uint16_t pj =
          spread_detail::sample_rank_at_distance(space, rows, 0, ky, rng);
      acc += static_cast<std::uint64_t>(space.distance(pi, pj));
    }
    const double mean = static_cast<double>(acc) /
                        (static_cast<double>(samples_per_cell) * c);
    int cents_val = static_cast<int>(std::lround(mean * 100.0));
    cents_val = std::clamp(cents_val, std::max(x, y), 100);
    base_region[static_cast<std::size_t>(x) * 51 + y] = static_cast<std::uint8_t>(cents_val);
    base_region[static_cast<std::size_t>(y) * 51 + x] = static_cast<std::uint8_t>(cents_val);
  });

  // exact boundary rows: combining with a zero hop is the identity, and any
  // 0.5 hop pins the cell at 0.5
  for (int y = 0; y <= 50; ++y) {
    base_region[static_cast<std::size_t>(0) * 51 + y] = static_cast<std::uint8_t>(y);
    base_region[static_cast<std::size_t>(y) * 51 + 0] = static_cast<std::uint8_t>(y);
    base_region[static_cast<std::size_t>(50) * 51 + y] = 50;
    base_region[static_cast<std::size_t>(y) * 51 + 50] = 50;
  }

  TrTable table;
  table.r = r;
  table.samples_per_cell = samples_per_cell;
  table.cents.assign(static_cast<std::size_t>(kGrid) * kGrid, 0);
  for (int a = 0; a <= 100; ++a)
    for (int b = 0; b <= 100; ++b) {
      const bool fx = a > 50, fy = b > 50;
      const int ca = fx ? 100 - a : a;
      const int cb = fy ? 100 - b : b;
      const int v = base_region[static_cast<std::size_t>(ca) * 51 + cb];
      table.cents[static_cast<std::size_t>(a) * kGrid + b] =
          static_cast<std::uint8_t>((fx != fy) ? 100 - v : v);
    }
  table.verify_identities();
  return table;
}

void TrTable::verify_identities() const {
  for (int a = 0; a <= 100; ++a)
    for (int b = 0; b <= 100; ++b) {
      const int t = at_cents(a, b);
      if (t != at_cents(b, a)) throw std::logic_error("T_r symmetry violated");
      if (at_cents(100 - a, b) != 100 - t)
        throw std::logic_error("T_r reflection identity violated");
      if (at_cents(100 - a, 100 - b) != t)
        throw std::logic_error("T_r double-reflection identity violated");
    }
  for (int b = 0; b <= 100; ++b)
    if (at_cents(0, b) != b) throw std::logic_error("T_r zero-hop row violated");
}

void TrTable::save_csv(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write table file: " + path.string());
  out << "r,samples,dx_cents,dy_cents,t_cents\n";
  for (int x = 0; x <= 50; ++x)
    for (int y = x; y <= 50; ++y)
      out << r << ',' << samples_per_cell << ',' << x << ',' << y << ','
          << at_cents(x, y) << '\n';
}

TrTable TrTable::load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "r,samples,dx_cents,dy_cents,t_cents")
    throw std::runtime_error("bad table file header");

  TrTable table;
  std::vector<std::uint8_t> base_region(51 * 51, 0);
  std::vector<char> seen(51 * 51, 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int rr, samples, x, y, t;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%d", &rr, &samples, &x, &y, &t) != 5)
      throw std::runtime_error("bad table row: " + line);
    if (x < 0 || x > 50 || y < x || y > 50 || t < 0 || t > 100)
      throw std::runtime_error("table cell out of range");
    if (table.r == 0) {
      table.r = rr;
      table.samples_per_cell = samples;
    } else if (table.r != rr || table.samples_per_cell != samples) {
      throw std::runtime_error("inconsistent table metadata");
    }
    base_region[static_cast<std::size_t>(x) * 51 + y] = static_cast<std::uint8_t>(t);
    base_region[static_cast<std::size_t>(y) * 51 + x] = static_cast<std::uint8_t>(t);
    seen[static_cast<std::size_t>(x) * 51 + y] = 1;
    seen[static_cast<std::size_t>(y) * 51 + x] = 1;
  }
  for (int i = 0; i < 51 * 51; ++i)
    if (!seen[static_cast<std::size_t>(i)])
      throw std::runtime_error("table file is missing cells");

  table.cents.assign(static_cast<std::size_t>(kGrid) * kGrid, 0);
  for (int a = 0; a <= 100; ++a)
    for (int b = 0; b <= 100; ++b) {
      const bool fx = a > 50, fy = b > 50;
      const int ca = fx ? 100 - a : a;
      const int cb = fy ? 100 - b : b;
      const int v = base_region[static_cast<std::size_t>(ca) * 51 + cb];
      table.cents[static_cast<std::size_t>(a) * kGrid + b] =
          static_cast<std::uint8_t>((fx != fy) ? 100 - v : v);
    }
  table.verify_identities();
  return table;
}

TrTable TrTable::load_or_build(int r, int samples_per_cell, std::uint64_t seed,
                               int threads,
                               std::optional<std::filesystem::path> cache_dir) {
  std::optional<std::filesystem::path> dir = cache_dir;
  if (!dir) {
    if (const char* env = std::getenv("PREFNET_CACHE_DIR")) dir = env;
  }
  if (!dir) return build(r, samples_per_cell, seed, threads);

  const std::filesystem::path file =
      *dir / ("tr_table_r" + std::to_string(r) + "_s" +
              std::to_string(samples_per_cell) + ".csv");
  if (std::filesystem::exists(file)) {
    TrTable table = load_csv(file);
    if (table.r == r && table.samples_per_cell == samples_per_cell) return table;
  }
  TrTable table = build(r, samples_per_cell, seed, threads);
  std::filesystem::create_directories(*dir);
  table.save_csv(file);
  return table;
}

namespace spread_detail {

bool msm_relax_pass(std::vector<std::uint8_t>& cents, int n, const TrTable& table) {
  bool changed = false;
  for (int v = 0; v < n; ++v) {
    const std::uint8_t* row_v = cents.data() + static_cast<std::size_t>(v) * n;
    for (int i = 0; i < n; ++i) {
      if (i == v) continue;
      const int a = row_v[i];
      if (a == 100) continue;
      const std::uint8_t* trow =
          a <= 50 ? table.cents.data() + static_cast<std::size_t>(a) * TrTable::kGrid
                  : nullptr;
      for (int j = i + 1; j < n; ++j) {
        if (j == v) continue;
        const int b = row_v[j];
        const int via = (trow != nullptr && b <= 50)
                            ? trow[b]
                            : std::max(a, b);
        if (via < cents[static_cast<std::size_t>(i) * n + j]) {
          cents[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(via);
          cents[static_cast<std::size_t>(j) * n + i] = static_cast<std::uint8_t>(via);
          changed = true;
        }
      }
    }
  }
  return changed;
}

}  // namespace spread_detail

DistanceMatrix msm_sp(const Network& net, const TrTable& table) {
  const int n = net.node_count();
  std::vector<std::uint8_t> cents(static_cast<std::size_t>(n) * n, 100);
  for (int i = 0; i < n; ++i) cents[static_cast<std::size_t>(i) * n + i] = 0;
  for (const auto& e : net.edges()) {
    const auto v = static_cast<std::uint8_t>(
        std::clamp<long>(std::lround(e.params.mu * 100.0), 0, 100));
    cents[static_cast<std::size_t>(e.u) * n + e.v] = v;
    cents[static_cast<std::size_t>(e.v) * n + e.u] = v;
  }
  for (int pass = 0; pass < n; ++pass)
    if (!spread_detail::msm_relax_pass(cents, n, table)) break;

  DistanceMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out.set_sym(i, j, cents[static_cast<std::size_t>(i) * n + j] / 100.0);
  return out;
}

}  // namespace prefnet
