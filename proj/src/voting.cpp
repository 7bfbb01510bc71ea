#include "prefnet/voting.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <stdexcept>

namespace prefnet {

RuleSpec RuleSpec::parse(std::string_view text) {
  RuleSpec spec;
  std::string_view name = text;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    const std::string_view arg = text.substr(colon + 1);
    int d = 0;
    for (char c : arg) {
      if (c < '0' || c > '9' || d > 100000000)
        throw std::domain_error("bad dictator id");
      d = d * 10 + (c - '0');
    }
    spec.dictator = d;
  }
  if (name == "bucklin") spec.rule = Rule::bucklin;
  else if (name == "smith") spec.rule = Rule::smith;
  else if (name == "borda") spec.rule = Rule::borda;
  else if (name == "veto") spec.rule = Rule::veto;
  else if (name == "minmax-po") spec.rule = Rule::minmax_po;
  else if (name == "dictatorship") spec.rule = Rule::dictatorship;
  else if (name == "random-dictatorship") spec.rule = Rule::random_dictatorship;
  else if (name == "schulze") spec.rule = Rule::schulze;
  else if (name == "plurality") spec.rule = Rule::plurality;
  else if (name == "kemeny") spec.rule = Rule::kemeny;
  else if (name == "copeland") spec.rule = Rule::copeland;
  else throw std::domain_error("unknown rule: " + std::string(name));
  return spec;
}

std::string RuleSpec::name() const {
  switch (rule) {
    case Rule::bucklin: return "bucklin";
    case Rule::smith: return "smith";
    case Rule::borda: return "borda";
    case Rule::veto: return "veto";
    case Rule::minmax_po: return "minmax-po";
    case Rule::dictatorship: return "dictatorship:" + std::to_string(dictator);
    case Rule::random_dictatorship: return "random-dictatorship";
    case Rule::schulze: return "schulze";
    case Rule::plurality: return "plurality";
    case Rule::kemeny: return "kemeny";
    case Rule::copeland: return "copeland";
  }
  return "?";
}

namespace {

// positions[voter][alt] = 0-based rank of alt for that voter
std::vector<std::vector<int>> all_positions(const PreferenceProfile& profile) {
  std::vector<std::vector<int>> pos;
  pos.reserve(profile.size());
  for (const auto& p : profile) pos.push_back(p.positions());
  return pos;
}

// maj[a][b] = number of voters ranking a above b
std::vector<std::vector<long long>> majority_matrix(
    const std::vector<std::vector<int>>& pos, int r) {
  std::vector<std::vector<long long>> maj(
      static_cast<std::size_t>(r), std::vector<long long>(static_cast<std::size_t>(r), 0));
  for (const auto& p : pos)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        if (a != b && p[static_cast<std::size_t>(a)] < p[static_cast<std::size_t>(b)])
          ++maj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  return maj;
}

// Strict precedence relation on alternatives: before[a][b] means a must be
// ranked above b. All rules that output a weak or partial order funnel into
// this; the output set is every linear extension.
struct Precedence {
  int r = 0;
  std::array<std::uint8_t, 64> bits{};  // row-major, r <= 8
  bool at(int a, int b) const { return (bits[static_cast<std::size_t>(a * r + b)] != 0); }
  void set(int a, int b) { bits[static_cast<std::size_t>(a * r + b)] = 1; }
};

std::uint64_t count_extensions(const Precedence& pre) {
  const int r = pre.r;
  // preds[x] = mask of alternatives that must precede x
  std::array<std::uint32_t, 8> preds{};
  for (int x = 0; x < r; ++x)
    for (int a = 0; a < r; ++a)
      if (a != x && pre.at(a, x)) preds[static_cast<std::size_t>(x)] |= 1u << a;

  const std::uint32_t full = (1u << r) - 1;
  std::vector<std::uint64_t> ways(static_cast<std::size_t>(full) + 1, 0);
  ways[full] = 1;  // everything placed
  for (std::uint32_t placed = full; placed-- > 0;) {
    std::uint64_t total = 0;
    for (int x = 0; x < r; ++x) {
      if ((placed >> x) & 1) continue;
      if ((preds[static_cast<std::size_t>(x)] & ~placed) != 0) continue;
      total += ways[placed | (1u << x)];
    }
    ways[placed] = total;
  }
  return ways[0];
}

void enumerate_extensions(const Precedence& pre, std::size_t cap,
                          AggregateSet& out) {
  const std::uint64_t total = count_extensions(pre);
  if (total > cap)
    throw std::length_error("aggregate has " + std::to_string(total) +
                            " linear extensions, above the cap");
  const int r = pre.r;
  std::array<std::uint32_t, 8> preds{};
  for (int x = 0; x < r; ++x)
    for (int a = 0; a < r; ++a)
      if (a != x && pre.at(a, x)) preds[static_cast<std::size_t>(x)] |= 1u << a;

  std::vector<Alt> current;
  current.reserve(static_cast<std::size_t>(r));
  std::uint32_t placed = 0;
  auto dfs = [&](auto&& self) -> void {
    if (static_cast<int>(current.size()) == r) {
      out.push_back(Preference(current));
      return;
    }
    for (int x = 0; x < r; ++x) {
      if ((placed >> x) & 1) continue;
      if ((preds[static_cast<std::size_t>(x)] & ~placed) != 0) continue;
      placed |= 1u << x;
      current.push_back(static_cast<Alt>(x));
      self(self);
      current.pop_back();
      placed &= ~(1u << x);
    }
  };
  dfs(dfs);
}

// weak order given by integer keys: higher key ranks above; equal keys tie
template <class Key>
Precedence precedence_from_keys(const std::vector<Key>& key) {
  Precedence pre;
  pre.r = static_cast<int>(key.size());
  for (int a = 0; a < pre.r; ++a)
    for (int b = 0; b < pre.r; ++b)
      if (a != b && key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)])
        pre.set(a, b);
  return pre;
}

AggregateSet finish(AggregateSet set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

AggregateSet smith_aggregate(const std::vector<std::vector<long long>>& maj, int r,
                             std::size_t cap) {
  // iterated Smith decomposition: peel off the minimal dominant set of the
  // remaining alternatives as the next tier
  auto beats = [&](int a, int b) {
    return maj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] >
           maj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
  };
  std::vector<int> tier_of(static_cast<std::size_t>(r), -1);
  std::uint32_t remaining = (1u << r) - 1;
  int tier = 0;
  while (remaining != 0) {
    std::uint32_t best = remaining;
    // smallest subset S of remaining with every member beating every outsider
    for (std::uint32_t s = remaining;; s = (s - 1) & remaining) {
      if (s != 0) {
        bool dominant = true;
        for (int a = 0; a < r && dominant; ++a) {
          if (!((s >> a) & 1)) continue;
          for (int b = 0; b < r && dominant; ++b)
            if (((remaining & ~s) >> b) & 1)
              if (!beats(a, b)) dominant = false;
        }
        if (dominant && std::popcount(s) < std::popcount(best)) best = s;
      }
      if (s == 0) break;
    }
    for (int a = 0; a < r; ++a)
      if ((best >> a) & 1) tier_of[static_cast<std::size_t>(a)] = tier;
    remaining &= ~best;
    ++tier;
  }
  // lower tier index ranks above
  std::vector<int> key(static_cast<std::size_t>(r));
  for (int a = 0; a < r; ++a) key[static_cast<std::size_t>(a)] = -tier_of[static_cast<std::size_t>(a)];
  AggregateSet out;
  enumerate_extensions(precedence_from_keys(key), cap, out);
  return finish(std::move(out));
}

AggregateSet schulze_aggregate(const std::vector<std::vector<long long>>& maj, int r,
                               std::size_t cap) {
  // beatpath strengths: widest path where an edge's width is the winning
  // pairwise support (0 for non-wins)
  std::vector<std::vector<long long>> p(static_cast<std::size_t>(r),
                                        std::vector<long long>(static_cast<std::size_t>(r), 0));
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      if (a != b && maj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] >
                        maj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)])
        p[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
            maj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  for (int k = 0; k < r; ++k)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b)
        if (a != b && a != k && b != k)
          p[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = std::max(
              p[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)],
              std::min(p[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)],
                       p[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)]));
  Precedence pre;
  pre.r = r;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      if (a != b && p[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] >
                        p[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)])
        pre.set(a, b);
  AggregateSet out;
  enumerate_extensions(pre, cap, out);
  return finish(std::move(out));
}

AggregateSet kemeny_aggregate(const std::vector<std::vector<long long>>& maj, int r,
                              std::size_t cap) {
  if (r > 7) throw std::length_error("exact Kemeny is capped at r = 7");
  const PermSpace& space = PermSpace::get(r);
  long long best = std::numeric_limits<long long>::max();
  std::vector<std::uint32_t> argmin;
  for (std::uint32_t idx = 0; idx < space.count(); ++idx) {
    const Alt* perm = space.perm(idx);
    long long cost = 0;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        cost += maj[static_cast<std::size_t>(perm[j])][static_cast<std::size_t>(perm[i])];
    if (cost < best) {
      best = cost;
      argmin.clear();
    }
    if (cost == best) argmin.push_back(idx);
  }
  if (argmin.size() > cap) throw std::length_error("Kemeny tie set above the cap");
  AggregateSet out;
  out.reserve(argmin.size());
  for (std::uint32_t idx : argmin) {
    const Alt* perm = space.perm(idx);
    out.push_back(Preference(std::vector<Alt>(perm, perm + r)));
  }
  return finish(std::move(out));
}

}  // namespace

AggregateSet aggregate(const RuleSpec& spec, const PreferenceProfile& profile) {
  check_profile(profile);
  const int r = profile.front().r();
  if (r > 8) throw std::length_error("aggregation rules are capped at r = 8");
  const long long n = static_cast<long long>(profile.size());

  switch (spec.rule) {
    case Rule::dictatorship: {
      if (spec.dictator < 0 || spec.dictator >= static_cast<int>(profile.size()))
        throw std::domain_error("dictator index out of range");
      return {profile[static_cast<std::size_t>(spec.dictator)]};
    }
    case Rule::random_dictatorship:
      return finish(AggregateSet(profile.begin(), profile.end()));
    default:
      break;
  }

  const auto pos = all_positions(profile);

  if (spec.rule == Rule::plurality || spec.rule == Rule::borda ||
      spec.rule == Rule::veto) {
    std::vector<long long> score(static_cast<std::size_t>(r), 0);
    for (const auto& p : pos)
      for (int a = 0; a < r; ++a) {
        const int rank = p[static_cast<std::size_t>(a)];
        if (spec.rule == Rule::plurality) score[static_cast<std::size_t>(a)] += rank == 0;
        else if (spec.rule == Rule::borda) score[static_cast<std::size_t>(a)] += r - 1 - rank;
        else score[static_cast<std::size_t>(a)] += rank != r - 1;
      }
    AggregateSet out;
    enumerate_extensions(precedence_from_keys(score), spec.extension_cap, out);
    return finish(std::move(out));
  }

  if (spec.rule == Rule::bucklin) {
    // key: majority depth ascending, then votes within that depth descending
    std::vector<std::pair<long long, long long>> inv_key(static_cast<std::size_t>(r));
    for (int a = 0; a < r; ++a) {
      long long cum = 0;
      int depth = r;
      for (int t = 0; t < r; ++t) {
        long long at_depth = 0;
        for (const auto& p : pos) at_depth += p[static_cast<std::size_t>(a)] == t;
        cum += at_depth;
        if (2 * cum > n) {
          depth = t + 1;
          break;
        }
      }
      inv_key[static_cast<std::size_t>(a)] = {-static_cast<long long>(depth), cum};
    }
    AggregateSet out;
    enumerate_extensions(precedence_from_keys(inv_key), spec.extension_cap, out);
    return finish(std::move(out));
  }

  const auto maj = majority_matrix(pos, r);

  switch (spec.rule) {
    case Rule::copeland: {
      std::vector<long long> score(static_cast<std::size_t>(r), 0);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) {
          if (a == b) continue;
          const long long ab = maj[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          const long long ba = maj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
          score[static_cast<std::size_t>(a)] += (ab > ba) - (ab < ba);
        }
      AggregateSet out;
      enumerate_extensions(precedence_from_keys(score), spec.extension_cap, out);
      return finish(std::move(out));
    }
    case Rule::minmax_po: {
      // pairwise opposition: worst count of voters preferring someone else
      std::vector<long long> opposition(static_cast<std::size_t>(r), 0);
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
          if (a != b)
            opposition[static_cast<std::size_t>(a)] =
                std::max(opposition[static_cast<std::size_t>(a)],
                         maj[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
      std::vector<long long> key(static_cast<std::size_t>(r));
      for (int a = 0; a < r; ++a) key[static_cast<std::size_t>(a)] = -opposition[static_cast<std::size_t>(a)];
      AggregateSet out;
      enumerate_extensions(precedence_from_keys(key), spec.extension_cap, out);
      return finish(std::move(out));
    }
    case Rule::smith:
      return smith_aggregate(maj, r, spec.extension_cap);
    case Rule::schulze:
      return schulze_aggregate(maj, r, spec.extension_cap);
    case Rule::kemeny:
      return kemeny_aggregate(maj, r, spec.extension_cap);
    default:
      throw std::domain_error("unhandled rule");
  }
}

double delta(const AggregateSet& fP, const AggregateSet& fR) {
  if (fP.empty() || fR.empty()) throw std::domain_error("empty aggregate set");
  double total = 0.0;
  for (const auto& y : fR) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : fP) best = std::min(best, norm_kt(x, y));
    total += best;
  }
  return total / static_cast<double>(fR.size());
}

namespace {

double random_dictatorship_delta(const PreferenceProfile& P,
                                 const PreferenceProfile& R, Rng* rng,
                                 int samples, DictatorMode mode) {
  const bool aligned = P.size() == R.size();
  auto error_for = [&](std::size_t v) {
    if (aligned) return norm_kt(P[v], R[v]);
    double acc = 0.0;
    for (const auto& u : R) acc += norm_kt(P[v], u);
    return acc / static_cast<double>(R.size());
  };

  if (mode == DictatorMode::worst_case) {
    double worst = 0.0;
    for (std::size_t v = 0; v < P.size(); ++v) worst = std::max(worst, error_for(v));
    return worst;
  }
  if (samples > 0 && rng != nullptr) {
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
      const std::size_t v = static_cast<std::size_t>(rng->below(P.size()));
      if (aligned) {
        acc += norm_kt(P[v], R[v]);
      } else {
        const std::size_t u = static_cast<std::size_t>(rng->below(R.size()));
        acc += norm_kt(P[v], R[u]);
      }
    }
    return acc / samples;
  }
  double acc = 0.0;
  for (std::size_t v = 0; v < P.size(); ++v) acc += error_for(v);
  return acc / static_cast<double>(P.size());
}

}  // namespace

double expected_delta(const RuleSpec& spec, const PreferenceProfile& P,
                      const PreferenceProfile& R, Rng* rng, int samples,
                      DictatorMode mode) {
  check_profile(P);
  check_profile(R);
  if (P.front().r() != R.front().r())
    throw std::domain_error("profiles over different alternative sets");
  if (spec.rule == Rule::random_dictatorship)
    return random_dictatorship_delta(P, R, rng, samples, mode);
  return delta(aggregate(spec, P), aggregate(spec, R));
}

}  // namespace prefnet
