#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefnet/rng.hpp"

namespace prefnet {

using Alt = std::uint8_t;  // alternative id, 0..r-1

// A strict total order over r alternatives; position 0 holds the most
// preferred alternative. Text form joins ids with '>', e.g. "2>0>1".
class Preference {
 public:
  explicit Preference(std::vector<Alt> order);
  static Preference from_string(std::string_view text);

  int r() const { return static_cast<int>(order_.size()); }
  const std::vector<Alt>& order() const { return order_; }
  Alt at(int position) const { return order_[static_cast<std::size_t>(position)]; }

  // positions()[a] = 0-based position of alternative a
  std::vector<int> positions() const;

  std::string to_string() const;

  auto operator<=>(const Preference&) const = default;

 private:
  std::vector<Alt> order_;
};

// One preference per voter; duplicates permitted, entry order is meaningful
// (dictatorship indexes into it by node id).
using PreferenceProfile = std::vector<Preference>;

// Throws std::domain_error unless the profile is non-empty with a common r.
void check_profile(const PreferenceProfile& profile);

int max_raw_distance(int r);  // C(r,2)

// Number of pairs of alternatives ordered oppositely in p and q.
int kendall_tau(const Preference& p, const Preference& q);

// kendall_tau / C(r,2), in [0,1]
double norm_kt(const Preference& p, const Preference& q);

// Spearman Footrule distance over 1-based positions, normalized by the
// maximum 2*ceil(r/2)*floor(r/2); in [0,1].
double footrule(const Preference& p, const Preference& q);

// Mahonian number: permutations of r elements at Kendall-Tau distance exactly
// k from any fixed permutation. r in [2,20], 0 <= k <= C(r,2).
std::uint64_t count_at_distance(int r, int k);

// mahonian_rows_for(r)[n][k] = permutations of n elements with k inversions,
// for n = 1..r. Cached; the returned reference stays valid.
using MahonianRows = std::vector<std::vector<std::uint64_t>>;
const MahonianRows& mahonian_rows_for(int r);

// Uniform draw among the count_at_distance(r,k) preferences at raw distance k
// from p, by unranking a uniform inversion table.
Preference sample_at_distance(const Preference& p, int k, Rng& rng);

// All r! preferences in lexicographic order; r in [2,8].
std::vector<Preference> all_preferences(int r);

// Lexicographic rank of a permutation / its inverse. r <= 8.
std::uint32_t perm_rank(std::span<const Alt> order);
void perm_unrank(int r, std::uint32_t rank, Alt* out);

std::uint32_t factorial(int r);

// Cached per-r permutation tables: the lex-ordered permutation list, and for
// r <= 7 the full pairwise Kendall-Tau distance table used by the cascade
// models and the validation suite.
class PermSpace {
 public:
  static const PermSpace& get(int r);  // r in [2,8]

  int r() const { return r_; }
  std::uint32_t count() const { return count_; }
  const Alt* perm(std::uint32_t rank) const { return perms_.data() + rank * r_; }
  const Alt* inverse(std::uint32_t rank) const {
    return inverses_.data() + rank * r_;
  }

  bool has_distance_table() const { return !dist_.empty(); }
  // row of Kendall-Tau distances from permutation `rank` to every permutation
  const std::uint8_t* distance_row(std::uint32_t rank) const {
    return dist_.data() + static_cast<std::size_t>(rank) * count_;
  }
  int distance(std::uint32_t a, std::uint32_t b) const {
    return distance_row(a)[b];
  }

 private:
  explicit PermSpace(int r);
  int r_ = 0;
  std::uint32_t count_ = 0;
  std::vector<Alt> perms_;
  std::vector<Alt> inverses_;
  std::vector<std::uint8_t> dist_;  // empty for r = 8
};

// Compact storage for simulated preference profiles: one lex rank per
// (topic, node). kNoResponse marks nodes that skipped a topic.
struct TopicProfiles {
  static constexpr std::uint16_t kNoResponse = 0xffff;

  int r = 0;
  int nodes = 0;
  int topics = 0;
  std::vector<std::uint16_t> ranks;  // topic-major, topics * nodes

  TopicProfiles() = default;
  TopicProfiles(int r_, int nodes_, int topics_)
      : r(r_), nodes(nodes_), topics(topics_),
        ranks(static_cast<std::size_t>(nodes_) * topics_, kNoResponse) {}

  std::uint16_t at(int topic, int node) const {
    return ranks[static_cast<std::size_t>(topic) * nodes + node];
  }
  std::uint16_t& at(int topic, int node) {
    return ranks[static_cast<std::size_t>(topic) * nodes + node];
  }
  std::span<const std::uint16_t> topic_row(int topic) const {
    return {ranks.data() + static_cast<std::size_t>(topic) * nodes,
            static_cast<std::size_t>(nodes)};
  }

  // Requires every node to have responded to the topic.
  PreferenceProfile profile(int topic) const;
};

}  // namespace prefnet
