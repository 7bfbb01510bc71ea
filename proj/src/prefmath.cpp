#include "prefnet/prefmath.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace prefnet {

Preference::Preference(std::vector<Alt> order) : order_(std::move(order)) {
  const std::size_t r = order_.size();
  if (r < 2) throw std::domain_error("preference needs at least 2 alternatives");
  if (r > 64) throw std::domain_error("preference too long");
  std::uint64_t seen = 0;
  for (Alt a : order_) {
    if (a >= r || (seen >> a) & 1)
      throw std::domain_error("preference is not a permutation of 0..r-1");
    seen |= 1ULL << a;
  }
}

Preference Preference::from_string(std::string_view text) {
  std::vector<Alt> order;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find('>', pos), text.size());
    const std::string_view tok = text.substr(pos, next - pos);
    if (tok.empty()) throw std::domain_error("malformed preference string");
    unsigned value = 0;
    for (char c : tok) {
      if (c < '0' || c > '9') throw std::domain_error("malformed preference string");
      value = value * 10 + static_cast<unsigned>(c - '0');
      if (value > 255) throw std::domain_error("alternative id out of range");
    }
    order.push_back(static_cast<Alt>(value));
    if (next == text.size()) break;
    pos = next + 1;
  }
  return Preference(std::move(order));
}

std::string Preference::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (i) out.push_back('>');
    out += std::to_string(static_cast<int>(order_[i]));
  }
  return out;
}

std::vector<int> Preference::positions() const {
  std::vector<int> pos(order_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i]] = static_cast<int>(i);
  return pos;
}

void check_profile(const PreferenceProfile& profile) {
  if (profile.empty()) throw std::domain_error("empty preference profile");
  const int r = profile.front().r();
  for (const auto& p : profile)
    if (p.r() != r) throw std::domain_error("profile mixes alternative sets");
}

int max_raw_distance(int r) { return r * (r - 1) / 2; }

int kendall_tau(const Preference& p, const Preference& q) {
  if (p.r() != q.r()) throw std::domain_error("preferences over different alternative sets");
  const auto pp = p.positions();
  const auto pq = q.positions();
  const int r = p.r();
  int inv = 0;
  for (int x = 0; x < r; ++x)
    for (int y = x + 1; y < r; ++y)
      inv += (pp[x] < pp[y]) != (pq[x] < pq[y]);
  return inv;
}

double norm_kt(const Preference& p, const Preference& q) {
  return static_cast<double>(kendall_tau(p, q)) / max_raw_distance(p.r());
}

double footrule(const Preference& p, const Preference& q) {
  if (p.r() != q.r()) throw std::domain_error("preferences over different alternative sets");
  const auto pp = p.positions();
  const auto pq = q.positions();
  const int r = p.r();
  int total = 0;
  for (int a = 0; a < r; ++a) total += std::abs(pp[a] - pq[a]);
  const int denom = 2 * ((r + 1) / 2) * (r / 2);
  return static_cast<double>(total) / denom;
}

const MahonianRows& mahonian_rows_for(int r) {
  if (r < 2 || r > 20) throw std::domain_error("alternative count out of range");
  static std::mutex mu;
  static std::map<int, MahonianRows> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(r);
  if (it != cache.end()) return it->second;

  std::vector<std::vector<std::uint64_t>> rows(r + 1);
  rows[1] = {1};
  for (int n = 2; n <= r; ++n) {
    const int kmax = n * (n - 1) / 2;
    rows[n].assign(kmax + 1, 0);
    // prefix-sum recurrence over the previous row with a sliding window
    const auto& prev = rows[n - 1];
    const int prev_kmax = static_cast<int>(prev.size()) - 1;
    for (int k = 0; k <= kmax; ++k) {
      std::uint64_t total = 0;
      const int jlo = std::max(0, k - prev_kmax);
      const int jhi = std::min(k, n - 1);
      for (int j = jlo; j <= jhi; ++j) total += prev[k - j];
      rows[n][k] = total;
    }
  }
  return cache.emplace(r, std::move(rows)).first->second;
}

std::uint64_t count_at_distance(int r, int k) {
  if (k < 0 || k > max_raw_distance(r)) throw std::domain_error("distance out of range");
  return mahonian_rows_for(r)[r][k];
}

Preference sample_at_distance(const Preference& p, int k, Rng& rng) {
  const int r = p.r();
  if (k < 0 || k > max_raw_distance(r)) throw std::domain_error("distance out of range");
  const auto& rows = mahonian_rows_for(r);

  // Draw a Lehmer code uniformly among those summing to k, then decode it
  // into a word w; q = p composed with w has Kendall-Tau distance exactly k.
  std::vector<int> lehmer(r, 0);
  int rem = k;
  for (int i = 0; i < r - 1; ++i) {
    const int n = r - i;  // elements remaining at this level
    const auto& sub = rows[n - 1];
    const int sub_kmax = static_cast<int>(sub.size()) - 1;
    const int dmax = std::min(rem, n - 1);
    std::uint64_t total = 0;
    for (int d = 0; d <= dmax; ++d)
      if (rem - d <= sub_kmax) total += sub[rem - d];
    std::uint64_t u = rng.below(total);
    int digit = dmax;
    for (int d = 0; d <= dmax; ++d) {
      if (rem - d > sub_kmax) continue;
      if (u < sub[rem - d]) {
        digit = d;
        break;
      }
      u -= sub[rem - d];
    }
    lehmer[i] = digit;
    rem -= digit;
  }

  std::vector<Alt> avail(p.order());
  std::vector<Alt> out;
  out.reserve(r);
  for (int i = 0; i < r; ++i) {
    const int d = lehmer[i];
    out.push_back(avail[d]);
    avail.erase(avail.begin() + d);
  }
  return Preference(std::move(out));
}

std::uint32_t factorial(int r) {
  std::uint32_t f = 1;
  for (int i = 2; i <= r; ++i) f *= static_cast<std::uint32_t>(i);
  return f;
}

std::vector<Preference> all_preferences(int r) {
  if (r < 2) throw std::domain_error("alternative count out of range");
  if (r > 8) throw std::length_error("permutation enumeration capped at r=8");
  std::vector<Alt> order(r);
  for (int i = 0; i < r; ++i) order[i] = static_cast<Alt>(i);
  std::vector<Preference> out;
  out.reserve(factorial(r));
  do {
    out.push_back(Preference(order));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

std::uint32_t perm_rank(std::span<const Alt> order) {
  const int r = static_cast<int>(order.size());
  std::uint32_t rank = 0;
  for (int i = 0; i < r; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < r; ++j) smaller += order[j] < order[i];
    rank = rank * static_cast<std::uint32_t>(r - i) + static_cast<std::uint32_t>(smaller);
  }
  return rank;
}

void perm_unrank(int r, std::uint32_t rank, Alt* out) {
  Alt avail[8];
  for (int i = 0; i < r; ++i) avail[i] = static_cast<Alt>(i);
  std::uint32_t radix = factorial(r);
  int navail = r;
  for (int i = 0; i < r; ++i) {
    radix /= static_cast<std::uint32_t>(r - i);
    const int d = static_cast<int>(rank / radix);
    rank %= radix;
    out[i] = avail[d];
    for (int j = d; j + 1 < navail; ++j) avail[j] = avail[j + 1];
    --navail;
  }
}

PermSpace::PermSpace(int r) : r_(r), count_(factorial(r)) {
  perms_.resize(static_cast<std::size_t>(count_) * r_);
  inverses_.resize(static_cast<std::size_t>(count_) * r_);
  std::vector<Alt> order(r_);
  for (int i = 0; i < r_; ++i) order[i] = static_cast<Alt>(i);
  std::uint32_t idx = 0;
  do {
    Alt* dst = perms_.data() + static_cast<std::size_t>(idx) * r_;
    Alt* inv = inverses_.data() + static_cast<std::size_t>(idx) * r_;
    for (int i = 0; i < r_; ++i) {
      dst[i] = order[i];
      inv[order[i]] = static_cast<Alt>(i);
    }
    ++idx;
  } while (std::next_permutation(order.begin(), order.end()));

  if (r_ <= 7) {
    dist_.assign(static_cast<std::size_t>(count_) * count_, 0);
    for (std::uint32_t a = 0; a < count_; ++a) {
      const Alt* pa = inverse(a);
      for (std::uint32_t b = a + 1; b < count_; ++b) {
        const Alt* pb = inverse(b);
        int inv_count = 0;
        for (int x = 0; x < r_; ++x)
          for (int y = x + 1; y < r_; ++y)
            inv_count += (pa[x] < pa[y]) != (pb[x] < pb[y]);
        dist_[static_cast<std::size_t>(a) * count_ + b] = static_cast<std::uint8_t>(inv_count);
        dist_[static_cast<std::size_t>(b) * count_ + a] = static_cast<std::uint8_t>(inv_count);
      }
    }
  }
}

const PermSpace& PermSpace::get(int r) {
  if (r < 2 || r > 8) throw std::length_error("PermSpace supports r in [2,8]");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PermSpace>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(r);
  if (it == cache.end())
    it = cache.emplace(r, std::unique_ptr<PermSpace>(new PermSpace(r))).first;
  return *it->second;
}

PreferenceProfile TopicProfiles::profile(int topic) const {
  PreferenceProfile out;
  out.reserve(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) {
    const std::uint16_t rk = at(topic, i);
    if (rk == kNoResponse) throw std::domain_error("topic has missing responses");
    std::vector<Alt> order(static_cast<std::size_t>(r));
    perm_unrank(r, rk, order.data());
    out.push_back(Preference(std::move(order)));
  }
  return out;
}

}  // namespace prefnet
