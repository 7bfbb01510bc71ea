#include "prefnet/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "prefnet/kernels.hpp"

namespace prefnet {

double dist_set(std::span<const int> S, int i, const DistanceMatrix& D) {
  if (S.empty()) throw std::domain_error("empty representative set");
  double best = std::numeric_limits<double>::infinity();
  for (int j : S) best = std::min(best, D.at(j, i));
  return best;
}

int representative(std::span<const int> S, int i, const DistanceMatrix& D,
                   Rng& rng) {
  if (S.empty()) throw std::domain_error("empty representative set");
  double best = std::numeric_limits<double>::infinity();
  for (int j : S) {
    if (j == i) return i;  // d(i,i) = 0 beats everything
    best = std::min(best, D.at(j, i));
  }
  int ties = 0;
  int chosen = -1;
  for (int j : S)
    if (D.at(j, i) == best) {
      ++ties;
      if (rng.below(static_cast<std::uint64_t>(ties)) == 0) chosen = j;
    }
  return chosen;
}

namespace {

std::vector<double> dist_vector(std::span<const int> S, const DistanceMatrix& D) {
  std::vector<double> best(static_cast<std::size_t>(D.n()), 1.0);
  for (int j : S) kernels::min_inplace(best, D.row(j));
  return best;
}

}  // namespace

double rho(std::span<const int> S, const DistanceMatrix& D) {
  if (S.empty()) throw std::domain_error("empty representative set");
  const auto best = dist_vector(S, D);
  return 1.0 - kernels::max_value(best);
}

double psi(std::span<const int> S, const DistanceMatrix& D) {
  if (S.empty()) throw std::domain_error("empty representative set");
  const auto best = dist_vector(S, D);
  return static_cast<double>(D.n()) - kernels::sum(best);
}

SelectionResult make_result(std::vector<int> representatives,
                            const DistanceMatrix& D, Rng& rng) {
  SelectionResult out;
  out.representatives = std::move(representatives);
  out.weighted = true;
  const int n = D.n();
  out.assignment.resize(static_cast<std::size_t>(n));
  out.weights.assign(out.representatives.size(), 0);
  for (int i = 0; i < n; ++i)
    out.assignment[static_cast<std::size_t>(i)] =
        representative(out.representatives, i, D, rng);
  for (int i = 0; i < n; ++i) {
    const int rep = out.assignment[static_cast<std::size_t>(i)];
    const auto it = std::find(out.representatives.begin(),
                              out.representatives.end(), rep);
    ++out.weights[static_cast<std::size_t>(it - out.representatives.begin())];
  }
  return out;
}

SelectionResult greedy_select(GreedyObjective objective, const DistanceMatrix& D,
                              int k, Rng& rng) {
  const int n = D.n();
  if (k < 1 || k > n) throw std::domain_error("k out of range");

  std::vector<double> best(static_cast<std::size_t>(n), 1.0);  // d(M, i)
  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  std::vector<int> picked;
  picked.reserve(static_cast<std::size_t>(k));

  for (int round = 0; round < k; ++round) {
    double best_score = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (int j = 0; j < n; ++j) {
      if (in_set[static_cast<std::size_t>(j)]) continue;
      // minimizing the updated distance aggregate maximizes the objective
      const double score = objective == GreedyObjective::sum_similarity
                               ? kernels::sum_min(best, D.row(j))
                               : kernels::max_min(best, D.row(j));
      if (score < best_score) {
        best_score = score;
        best_j = j;
      }
    }
    in_set[static_cast<std::size_t>(best_j)] = 1;
    picked.push_back(best_j);
    kernels::min_inplace(best, D.row(best_j));
  }
  return make_result(std::move(picked), D, rng);
}

namespace {

// profile for topic t with every node's entry replaced by its representative's
PreferenceProfile replaced_profile(const TopicProfiles& topics, int t,
                                   std::span<const int> assignment) {
  PreferenceProfile out;
  out.reserve(static_cast<std::size_t>(topics.nodes));
  for (int i = 0; i < topics.nodes; ++i) {
    const std::uint16_t rk = topics.at(t, assignment[static_cast<std::size_t>(i)]);
    std::vector<Alt> order(static_cast<std::size_t>(topics.r));
    perm_unrank(topics.r, rk, order.data());
    out.push_back(Preference(std::move(order)));
  }
  return out;
}

}  // namespace

SelectionResult greedy_orig(const RuleSpec& rule, const TopicProfiles& topics,
                            const DistanceMatrix& D, int k, Rng& rng) {
  const int n = D.n();
  if (k < 1 || k > n) throw std::domain_error("k out of range");
  if (topics.nodes != n) throw std::domain_error("profile node count mismatch");

  // population-side aggregates, shared by every candidate evaluation
  std::vector<PreferenceProfile> base_profiles;
  std::vector<AggregateSet> base_aggregates;
  base_profiles.reserve(static_cast<std::size_t>(topics.topics));
  for (int t = 0; t < topics.topics; ++t)
    base_profiles.push_back(topics.profile(t));
  if (rule.rule != Rule::random_dictatorship)
    for (const auto& p : base_profiles) base_aggregates.push_back(aggregate(rule, p));

  std::vector<double> best_dist(static_cast<std::size_t>(n),
                                std::numeric_limits<double>::infinity());
  std::vector<int> best_rep(static_cast<std::size_t>(n), -1);
  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  std::vector<int> picked;

  std::vector<int> cand_rep(static_cast<std::size_t>(n));
  for (int round = 0; round < k; ++round) {
    double best_err = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (int j = 0; j < n; ++j) {
      if (in_set[static_cast<std::size_t>(j)]) continue;
      // deterministic lowest-id assignment for the objective evaluation
      for (int i = 0; i < n; ++i) {
        const double dj = D.at(j, i);
        if (dj < best_dist[static_cast<std::size_t>(i)])
          cand_rep[static_cast<std::size_t>(i)] = j;
        else if (dj == best_dist[static_cast<std::size_t>(i)])
          cand_rep[static_cast<std::size_t>(i)] =
              std::min(best_rep[static_cast<std::size_t>(i)], j);
        else
          cand_rep[static_cast<std::size_t>(i)] = best_rep[static_cast<std::size_t>(i)];
      }
      double err = 0.0;
      for (int t = 0; t < topics.topics; ++t) {
        const PreferenceProfile q = replaced_profile(topics, t, cand_rep);
        if (rule.rule == Rule::random_dictatorship)
          err += expected_delta(rule, base_profiles[static_cast<std::size_t>(t)], q);
        else
          err += delta(base_aggregates[static_cast<std::size_t>(t)], aggregate(rule, q));
      }
      err /= static_cast<double>(topics.topics);
      if (err < best_err) {
        best_err = err;
        best_j = j;
      }
    }
    in_set[static_cast<std::size_t>(best_j)] = 1;
    picked.push_back(best_j);
    for (int i = 0; i < n; ++i) {
      const double dj = D.at(best_j, i);
      if (dj < best_dist[static_cast<std::size_t>(i)]) {
        best_dist[static_cast<std::size_t>(i)] = dj;
        best_rep[static_cast<std::size_t>(i)] = best_j;
      } else if (dj == best_dist[static_cast<std::size_t>(i)]) {
        best_rep[static_cast<std::size_t>(i)] =
            std::min(best_rep[static_cast<std::size_t>(i)], best_j);
      }
    }
  }
  return make_result(std::move(picked), D, rng);
}

SelectionResult random_poll(int n, int k, Rng& rng) {
  if (k < 1 || k > n) throw std::domain_error("k out of range");
  std::vector<int> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
  }
  SelectionResult out;
  out.representatives.assign(ids.begin(), ids.begin() + k);
  out.weighted = false;
  return out;
}

PreferenceProfile weighted_profile(const SelectionResult& result,
                                   const PreferenceProfile& P) {
  check_profile(P);
  if (!result.weighted || result.assignment.size() != P.size())
    throw std::domain_error("selection has no assignment covering the profile");
  PreferenceProfile out;
  out.reserve(P.size());
  for (std::size_t i = 0; i < P.size(); ++i)
    out.push_back(P[static_cast<std::size_t>(result.assignment[i])]);
  return out;
}

std::vector<double> shapley_closed(const DistanceMatrix& D) {
  const int n = D.n();
  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      if (i != j) acc += 1.0 - D.at(i, j);
    phi[static_cast<std::size_t>(j)] = 0.5 * acc;
  }
  return phi;
}

bool TuCheckReport::pass(double tol) const {
  bool gately_ok = true;
  for (double g : gately_propensity) gately_ok = gately_ok && std::abs(g - 1.0) <= tol;
  return max_shapley_err <= tol && max_tau_err <= tol && gately_ok &&
         std::abs(lambda - 0.5) <= tol && efficiency_err <= tol;
}

TuCheckReport tu_checks(const DistanceMatrix& D) {
  const int n = D.n();
  if (n > 8) throw std::length_error("brute-force Shapley is capped at n = 8");

  TuCheckReport report;
  report.closed_form = shapley_closed(D);

  auto c = [&](int i, int j) { return 1.0 - D.at(i, j); };
  double nu_n = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) nu_n += c(i, j);
  report.coalition_value = nu_n;

  // average marginal contribution over all n! arrival orders
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  std::uint64_t orders = 0;
  do {
    for (int pos = 0; pos < n; ++pos) {
      const int j = order[static_cast<std::size_t>(pos)];
      double marginal = 0.0;
      for (int prev = 0; prev < pos; ++prev)
        marginal += c(order[static_cast<std::size_t>(prev)], j);
      acc[static_cast<std::size_t>(j)] += marginal;
    }
    ++orders;
  } while (std::next_permutation(order.begin(), order.end()));
  report.brute_force.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    report.brute_force[static_cast<std::size_t>(j)] =
        acc[static_cast<std::size_t>(j)] / static_cast<double>(orders);

  // Gately propensity to disrupt under the closed-form allocation
  report.gately_propensity.resize(static_cast<std::size_t>(n));
  double phi_total = 0.0;
  for (double p : report.closed_form) phi_total += p;
  for (int i = 0; i < n; ++i) {
    const double phi_i = report.closed_form[static_cast<std::size_t>(i)];
    const double nu_without = nu_n - 2.0 * phi_i;
    report.gately_propensity[static_cast<std::size_t>(i)] =
        (phi_total - phi_i - nu_without) / phi_i;
  }

  // tau-value: M_i = nu(N) - nu(N \ {i}), m_i = 0, lambda from efficiency
  std::vector<double> big_m(static_cast<std::size_t>(n));
  double m_total = 0.0;
  for (int i = 0; i < n; ++i) {
    big_m[static_cast<std::size_t>(i)] =
        2.0 * report.closed_form[static_cast<std::size_t>(i)];
    m_total += big_m[static_cast<std::size_t>(i)];
  }
  report.lambda = nu_n / m_total;
  report.tau.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    report.tau[static_cast<std::size_t>(i)] =
        report.lambda * big_m[static_cast<std::size_t>(i)];

  for (int i = 0; i < n; ++i) {
    report.max_shapley_err =
        std::max(report.max_shapley_err,
                 std::abs(report.brute_force[static_cast<std::size_t>(i)] -
                          report.closed_form[static_cast<std::size_t>(i)]));
    report.max_tau_err =
        std::max(report.max_tau_err,
                 std::abs(report.tau[static_cast<std::size_t>(i)] -
                          report.closed_form[static_cast<std::size_t>(i)]));
    report.max_gately_err =
        std::max(report.max_gately_err,
                 std::abs(report.gately_propensity[static_cast<std::size_t>(i)] - 1.0));
  }
  report.efficiency_err = std::abs(phi_total - nu_n);
  return report;
}

DistanceMatrix random_distance_matrix(int n, Rng& rng) {
  DistanceMatrix D(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) D.set_sym(i, j, rng.uniform01());
  return D;
}

SubmodularityReport check_submodularity(const DistanceMatrix& D, long trials,
                                        Rng& rng) {
  const int n = D.n();
  if (n < 3) throw std::domain_error("need at least 3 nodes");
  SubmodularityReport report;
  report.trials = trials;

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> best_s(static_cast<std::size_t>(n));
  std::vector<double> best_t(static_cast<std::size_t>(n));

  for (long trial = 0; trial < trials; ++trial) {
    // random chain S subset T (proper) and v outside T
    for (int i = 0; i < n; ++i) {
      const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    const int t_size = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 2)));
    const int s_size = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(t_size - 1)));
    const int v = perm[static_cast<std::size_t>(t_size)];

    std::fill(best_s.begin(), best_s.end(), 1.0);
    for (int idx = 0; idx < s_size; ++idx)
      for (int i = 0; i < n; ++i)
        best_s[static_cast<std::size_t>(i)] = std::min(
            best_s[static_cast<std::size_t>(i)],
            D.at(perm[static_cast<std::size_t>(idx)], i));
    best_t = best_s;
    for (int idx = s_size; idx < t_size; ++idx)
      for (int i = 0; i < n; ++i)
        best_t[static_cast<std::size_t>(i)] = std::min(
            best_t[static_cast<std::size_t>(i)],
            D.at(perm[static_cast<std::size_t>(idx)], i));

    // monotonicity: pointwise best_t <= best_s makes these exact
    double sum_s = 0.0, sum_t = 0.0, max_s = 0.0, max_t = 0.0;
    for (int i = 0; i < n; ++i) {
      sum_s += best_s[static_cast<std::size_t>(i)];
      sum_t += best_t[static_cast<std::size_t>(i)];
      max_s = std::max(max_s, best_s[static_cast<std::size_t>(i)]);
      max_t = std::max(max_t, best_t[static_cast<std::size_t>(i)]);
    }
    if (max_t > max_s) ++report.rho_monotonicity_violations;
    if (sum_t > sum_s) ++report.psi_monotonicity_violations;

    // psi marginal as a sum of per-node non-negative terms; the terms for S
    // dominate those for T pointwise, so the comparison is exact
    double gain_s = 0.0, gain_t = 0.0, maxv_s = 0.0, maxv_t = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dv = D.at(v, i);
      gain_s += std::max(0.0, best_s[static_cast<std::size_t>(i)] - dv);
      gain_t += std::max(0.0, best_t[static_cast<std::size_t>(i)] - dv);
      maxv_s = std::max(maxv_s, std::min(best_s[static_cast<std::size_t>(i)], dv));
      maxv_t = std::max(maxv_t, std::min(best_t[static_cast<std::size_t>(i)], dv));
    }
    if (gain_s < gain_t) ++report.psi_submodularity_violations;
    if (max_s - maxv_s < max_t - maxv_t) ++report.rho_submodularity_violations;
  }
  return report;
}

}  // namespace prefnet
