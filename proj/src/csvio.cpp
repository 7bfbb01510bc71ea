#include "prefnet/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace prefnet {

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  return in;
}

std::ofstream create_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

}  // namespace

void save_profiles(const TopicProfiles& profiles, const std::filesystem::path& path) {
  auto out = create_or_throw(path);
  out << "topic,node,ranking\n";
  Alt order[8];
  for (int t = 0; t < profiles.topics; ++t)
    for (int v = 0; v < profiles.nodes; ++v) {
      const std::uint16_t rk = profiles.at(t, v);
      if (rk == TopicProfiles::kNoResponse) continue;
      perm_unrank(profiles.r, rk, order);
      out << t << ',' << v << ',';
      for (int i = 0; i < profiles.r; ++i) {
        if (i) out << '>';
        out << static_cast<int>(order[i]);
      }
      out << '\n';
    }
}

TopicProfiles load_profiles(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line) || line != "topic,node,ranking")
    throw std::runtime_error("profile file must start with header topic,node,ranking");

  struct Row {
    int topic, node;
    std::uint16_t rank;
  };
  std::vector<Row> rows;
  int max_topic = -1, max_node = -1, r = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("profile row needs 3 fields: " + line);
    const int topic = std::stoi(line.substr(0, c1));
    const int node = std::stoi(line.substr(c1 + 1, c2 - c1 - 1));
    const Preference pref = Preference::from_string(line.substr(c2 + 1));
    if (r == 0)
      r = pref.r();
    else if (r != pref.r())
      throw std::runtime_error("profile file mixes alternative counts");
    if (topic < 0 || node < 0) throw std::runtime_error("negative topic or node id");
    max_topic = std::max(max_topic, topic);
    max_node = std::max(max_node, node);
    rows.push_back({topic, node,
                    static_cast<std::uint16_t>(perm_rank(pref.order()))});
  }
  if (rows.empty()) throw std::runtime_error("profile file has no rows");

  TopicProfiles out(r, max_node + 1, max_topic + 1);
  for (const auto& row : rows) out.at(row.topic, row.node) = row.rank;
  return out;
}

void save_selection(const SelectionResult& result, const std::filesystem::path& path) {
  auto out = create_or_throw(path);
  out << "rank,node,weight\n";
  for (std::size_t i = 0; i < result.representatives.size(); ++i) {
    const int w = result.weighted ? result.weights[i] : 1;
    out << i << ',' << result.representatives[i] << ',' << w << '\n';
  }
}

void save_histogram(std::span<const double> histogram, int r,
                    const std::filesystem::path& path) {
  const int c = max_raw_distance(r);
  if (static_cast<int>(histogram.size()) != c + 1)
    throw std::domain_error("histogram size does not match the distance grid");
  auto out = create_or_throw(path);
  out << "grid_value,count\n";
  char buf[64];
  for (int k = 0; k <= c; ++k) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", static_cast<double>(k) / c,
                  histogram[static_cast<std::size_t>(k)]);
    out << buf;
  }
}

std::vector<double> load_histogram(const std::filesystem::path& path, int r) {
  auto in = open_or_throw(path);
  std::string line;
  if (!std::getline(in, line) || line != "grid_value,count")
    throw std::runtime_error("histogram file must start with header grid_value,count");
  const int c = max_raw_distance(r);
  std::vector<double> hist(static_cast<std::size_t>(c) + 1, 0.0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("bad histogram row");
    const double grid_value = std::stod(line.substr(0, comma));
    const double count = std::stod(line.substr(comma + 1));
    const int k = static_cast<int>(std::lround(grid_value * c));
    if (k < 0 || k > c || std::abs(grid_value - static_cast<double>(k) / c) > 1e-6)
      throw std::runtime_error("histogram grid value off the distance grid");
    hist[static_cast<std::size_t>(k)] += count;
  }
  return hist;
}

}  // namespace prefnet
