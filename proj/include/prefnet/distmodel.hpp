#pragma once

#include <span>
#include <vector>

#include "prefnet/rng.hpp"

namespace prefnet {

// Parameters of the parent (pre-truncation) Gaussian behind the discrete
// distribution over the normalized-distance grid. Edge parameters carry the
// [0,1] x [0, 0.29] bounds below; internal solver output may fall outside
// them and is validated only where the edge contract applies.
struct EdgeDistribution {
  double mu = 0.0;
  double sigma = 0.0;
};

inline constexpr double kMaxEdgeSigma = 0.29;
inline constexpr double kMinFitSigma = 0.005;
inline constexpr double kPmfFloor = 1e-12;

// Throws std::domain_error unless mu in [0,1] and sigma in [0, 0.29].
void validate_edge_distribution(const EdgeDistribution& e);

// Probability mass function over the grid {0, 1/C, ..., 1}, C = C(r,2).
class DiscreteDist {
 public:
  DiscreteDist(int r, std::vector<double> pmf);

  int r() const { return r_; }
  int grid_size() const { return static_cast<int>(pmf_.size()); }
  const std::vector<double>& pmf() const { return pmf_; }
  double at(int k) const { return pmf_[static_cast<std::size_t>(k)]; }
  double grid_value(int k) const;

  double mean() const;
  double stddev() const;
  std::vector<double> cumulative() const;

 private:
  int r_;
  std::vector<double> pmf_;
};

// pmf(x) = F(min{x + 1/(r(r-1)), 1}) - F(max{x - 1/(r(r-1)), 0}) where F is
// the CDF of the parent Gaussian truncated to [0,1]. sigma = 0 collapses to a
// point mass at the grid point nearest mu. mu may lie outside [0,1].
DiscreteDist discretize(double mu, double sigma, int r);
DiscreteDist discretize(const EdgeDistribution& params, int r);

// Multinomial draw over the grid; returns the grid index (distance * C).
struct DistSampler {
  explicit DistSampler(const DiscreteDist& dist);
  int sample_index(Rng& rng) const;
  double sample(Rng& rng) const;
  int r = 0;
  std::vector<double> cum;
};

int sample_index(const DiscreteDist& dist, Rng& rng);
double sample(const DiscreteDist& dist, Rng& rng);

// Exhaustive grid-search MLE over mu in {0, 0.01, ..., 1} and sigma in
// {0.005, ..., 0.29}; ties prefer smaller sigma, then smaller mu. The
// histogram holds one (possibly fractional) count per grid point.
EdgeDistribution fit_mle(std::span<const double> histogram, int r);

// sum emp * log(emp / model), 0 log 0 := 0, model clamped below at 1e-12
double kl_divergence(const DiscreteDist& empirical, const DiscreteDist& model);

// 1-D Wasserstein distance on the grid
double emd(const DiscreteDist& a, const DiscreteDist& b);

struct ChiSquareResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool pass = false;
};

// Goodness-of-fit statistic of observed counts against N * pmf, with the
// model pmf clamped at 1e-12; df = grid size - 1, significance 0.05.
ChiSquareResult chi_square(std::span<const double> observed,
                           const DiscreteDist& model);
double chi_square_critical(int df);

// Supremum of the standard deviation of a [0,1]-truncated Gaussian whose
// truncated mean equals mu_d. Zero at the endpoints, peaks at 1/sqrt(12) for
// mu_d = 0.5, symmetric about 0.5 by construction. Memoized.
double sigma_max(double mu_d);

// Parent parameters whose *discretized* distribution has the given mean
// (exactly, within solver tolerance) and a standard deviation as close to
// `stddev` as the grid permits. Used wherever a draw is specified by the
// moments of the distribution rather than by parent parameters.
EdgeDistribution params_for_moments(double mean, double stddev, int r);

}  // namespace prefnet
