#pragma once

#include <span>
#include <vector>

#include "prefnet/network.hpp"
#include "prefnet/prefmath.hpp"
#include "prefnet/rng.hpp"
#include "prefnet/voting.hpp"

namespace prefnet {

// Representative set with, for weighted algorithms, each node's assigned
// representative and the resulting multiplicities.
struct SelectionResult {
  std::vector<int> representatives;  // insertion order
  std::vector<int> assignment;       // node -> representative node id
  std::vector<int> weights;          // aligned with representatives
  bool weighted = true;
};

// d(S,i) = min over j in S of D[j][i]
double dist_set(std::span<const int> S, int i, const DistanceMatrix& D);

// Uniform draw from the representatives of i nearest in expected distance;
// members represent themselves.
int representative(std::span<const int> S, int i, const DistanceMatrix& D, Rng& rng);

// rho(S) = min_i (1 - d(S,i)); psi(S) = sum_i (1 - d(S,i)).
double rho(std::span<const int> S, const DistanceMatrix& D);
double psi(std::span<const int> S, const DistanceMatrix& D);

enum class GreedyObjective { min_similarity, sum_similarity };

// Greedy hill-climbing on rho (min_similarity) or psi (sum_similarity);
// marginal ties go to the lower node id.
SelectionResult greedy_select(GreedyObjective objective, const DistanceMatrix& D,
                              int k, Rng& rng);

// Greedy hill-climbing directly on the mean expected error over the given
// topics, rebuilding the weighted profile for every candidate. Exact but
// slow; intended for desk-scale instances.
SelectionResult greedy_orig(const RuleSpec& rule, const TopicProfiles& topics,
                            const DistanceMatrix& D, int k, Rng& rng);

// Uniform k-subset; evaluated unweighted (R = Q).
SelectionResult random_poll(int n, int k, Rng& rng);

// Assignment + weights for an externally chosen representative set.
SelectionResult make_result(std::vector<int> representatives,
                            const DistanceMatrix& D, Rng& rng);

// Q': every node's preference replaced by its representative's.
PreferenceProfile weighted_profile(const SelectionResult& result,
                                   const PreferenceProfile& P);

// Shapley value of the pairwise-similarity coalition game,
// phi_j = 1/2 sum_{i != j} c(i,j).
std::vector<double> shapley_closed(const DistanceMatrix& D);

// Brute-force cross-checks of the cooperative-game coincidences: Shapley by
// averaging marginal contributions over all n! orders, the Gately propensity
// to disrupt (= 1 for every player), and the tau-value (lambda = 1/2,
// tau = Shapley). n <= 8.
struct TuCheckReport {
  std::vector<double> closed_form;
  std::vector<double> brute_force;
  std::vector<double> tau;
  std::vector<double> gately_propensity;
  double lambda = 0.0;
  double coalition_value = 0.0;  // nu(N)
  double max_shapley_err = 0.0;
  double max_tau_err = 0.0;
  double max_gately_err = 0.0;
  double efficiency_err = 0.0;  // |sum phi - nu(N)|
  bool pass(double tol = 1e-9) const;
};

TuCheckReport tu_checks(const DistanceMatrix& D);

// Property sampler shared by the test suites: random chains S subset T and
// outside node v, checking monotonicity and the diminishing-marginal
// inequality for both objectives. Marginals are evaluated in a form that
// makes the inequalities exact in floating point, so any violation is real.
struct SubmodularityReport {
  long trials = 0;
  long rho_monotonicity_violations = 0;
  long psi_monotonicity_violations = 0;
  long rho_submodularity_violations = 0;
  long psi_submodularity_violations = 0;
  bool pass() const {
    return rho_monotonicity_violations == 0 && psi_monotonicity_violations == 0 &&
           rho_submodularity_violations == 0 && psi_submodularity_violations == 0;
  }
};

SubmodularityReport check_submodularity(const DistanceMatrix& D, long trials,
                                        Rng& rng);

// Random symmetric distance matrix with zero diagonal, entries in [0,1].
DistanceMatrix random_distance_matrix(int n, Rng& rng);

}  // namespace prefnet
