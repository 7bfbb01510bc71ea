#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prefnet/prefmath.hpp"
#include "prefnet/rng.hpp"

namespace prefnet {

enum class Rule {
  bucklin,
  smith,
  borda,
  veto,
  minmax_po,
  dictatorship,
  random_dictatorship,
  schulze,
  plurality,
  kemeny,
  copeland,
};

struct RuleSpec {
  Rule rule = Rule::plurality;
  int dictator = 0;                  // node index, dictatorship only
  std::size_t extension_cap = 10000; // max linear extensions to enumerate

  // "plurality", "minmax-po", "dictatorship:3", ...
  static RuleSpec parse(std::string_view text);
  std::string name() const;
};

// Deduplicated, lexicographically sorted set of aggregate preferences. Rules
// are correspondences: score ties surface as multiple linear extensions
// instead of being broken.
using AggregateSet = std::vector<Preference>;

// Applies the rule to a profile. Kemeny requires r <= 7; enumerating more
// linear extensions than the cap raises std::length_error.
AggregateSet aggregate(const RuleSpec& spec, const PreferenceProfile& profile);

// f(P) Delta f(R): mean over y in fR of the distance from y to the nearest
// member of fP. Asymmetric.
double delta(const AggregateSet& fP, const AggregateSet& fR);

enum class DictatorMode { average, worst_case };

// Expected error of using R's aggregate in place of P's. Deterministic rules
// evaluate delta(aggregate(P), aggregate(R)) exactly. Random dictatorship
// pairs the dictator draw across the two profiles: with |P| == |R| the
// profiles are taken node-aligned and the error is the mean (or worst-case
// max) over nodes v of d(P[v], R[v]); otherwise each population dictator is
// answered by a uniform member of R. samples > 0 switches to a Monte-Carlo
// estimate over dictator draws.
double expected_delta(const RuleSpec& spec, const PreferenceProfile& P,
                      const PreferenceProfile& R, Rng* rng = nullptr,
                      int samples = 0, DictatorMode mode = DictatorMode::average);

}  // namespace prefnet
