#include "prefnet/distmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "prefnet/prefmath.hpp"

namespace prefnet {

namespace {

double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Simpson integration of exp(q(x)) * {1, x, x^2} over [0,1] with the exponent
// shifted by its maximum, so strongly tilted parents stay representable.
struct RawMoments {
  double mass = 0.0, mean = 0.0, second = 0.0;
};

RawMoments truncated_moments(double m, double s, int intervals = 1200) {
  const double inv2s2 = 1.0 / (2.0 * s * s);
  const double xstar = std::clamp(m, 0.0, 1.0);
  const double qmax = -(xstar - m) * (xstar - m) * inv2s2;
  const double h = 1.0 / intervals;
  double w0 = 0.0, w1 = 0.0, w2 = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double x = i * h;
    const double q = -(x - m) * (x - m) * inv2s2 - qmax;
    const double g = q < -745.0 ? 0.0 : std::exp(q);
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    w0 += w * g;
    w1 += w * g * x;
    w2 += w * g * x * x;
  }
  RawMoments out;
  out.mass = w0;
  out.mean = w0 > 0.0 ? w1 / w0 : xstar;
  out.second = w0 > 0.0 ? w2 / w0 : xstar * xstar;
  return out;
}

double truncated_mean(double m, double s) { return truncated_moments(m, s).mean; }

double truncated_std(double m, double s) {
  const RawMoments mo = truncated_moments(m, s);
  return std::sqrt(std::max(0.0, mo.second - mo.mean * mo.mean));
}

std::vector<double> point_mass_pmf(double mu, int grid) {
  const int c = grid - 1;
  const double clamped = std::clamp(mu, 0.0, 1.0);
  const int k = static_cast<int>(std::lround(clamped * c));
  std::vector<double> pmf(static_cast<std::size_t>(grid), 0.0);
  pmf[static_cast<std::size_t>(std::clamp(k, 0, c))] = 1.0;
  return pmf;
}

// Cell masses by per-cell Simpson rule on the shifted log-density. Handles
// parents far outside [0,1] where the erf route cancels to 0/0.
std::vector<double> pmf_by_quadrature(double mu, double sigma, int r) {
  const int c = max_raw_distance(r);
  const int grid = c + 1;
  const double half = 1.0 / (2.0 * c);
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  const double xstar = std::clamp(mu, 0.0, 1.0);
  const double qmax = -(xstar - mu) * (xstar - mu) * inv2s2;

  std::vector<double> raw(static_cast<std::size_t>(grid), 0.0);
  constexpr int kCellIntervals = 64;
  double total = 0.0;
  for (int k = 0; k <= c; ++k) {
    const double lo = std::max(0.0, static_cast<double>(k) / c - half);
    const double hi = std::min(1.0, static_cast<double>(k) / c + half);
    const double h = (hi - lo) / kCellIntervals;
    double acc = 0.0;
    for (int i = 0; i <= kCellIntervals; ++i) {
      const double x = lo + i * h;
      const double q = -(x - mu) * (x - mu) * inv2s2 - qmax;
      const double g = q < -745.0 ? 0.0 : std::exp(q);
      const double w = (i == 0 || i == kCellIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * g;
    }
    raw[static_cast<std::size_t>(k)] = acc * h;
    total += acc * h;
  }
  if (total <= 0.0) return point_mass_pmf(mu < 0.5 ? 0.0 : 1.0, grid);
  for (auto& v : raw) v /= total;
  return raw;
}

}  // namespace

void validate_edge_distribution(const EdgeDistribution& e) {
  if (!(e.mu >= 0.0 && e.mu <= 1.0))
    throw std::domain_error("edge mu outside [0,1]");
  if (!(e.sigma >= 0.0 && e.sigma <= kMaxEdgeSigma))
    throw std::domain_error("edge sigma outside [0, 0.29]");
}

DiscreteDist::DiscreteDist(int r, std::vector<double> pmf)
    : r_(r), pmf_(std::move(pmf)) {
  if (r_ < 2) throw std::domain_error("alternative count out of range");
  if (static_cast<int>(pmf_.size()) != max_raw_distance(r_) + 1)
    throw std::domain_error("pmf size does not match the distance grid");
  double total = 0.0;
  for (double v : pmf_) {
    if (!(v >= 0.0)) throw std::domain_error("negative pmf entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::domain_error("pmf does not sum to 1");
}

double DiscreteDist::grid_value(int k) const {
  return static_cast<double>(k) / max_raw_distance(r_);
}

double DiscreteDist::mean() const {
  double m = 0.0;
  for (int k = 0; k < grid_size(); ++k) m += grid_value(k) * pmf_[k];
  return m;
}

double DiscreteDist::stddev() const {
  const double m = mean();
  double v = 0.0;
  for (int k = 0; k < grid_size(); ++k) {
    const double d = grid_value(k) - m;
    v += d * d * pmf_[k];
  }
  return std::sqrt(std::max(0.0, v));
}

std::vector<double> DiscreteDist::cumulative() const {
  std::vector<double> cum(pmf_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf_.size(); ++i) {
    acc += pmf_[i];
    cum[i] = acc;
  }
  return cum;
}

DiscreteDist discretize(double mu, double sigma, int r) {
  if (r < 2) throw std::domain_error("alternative count out of range");
  if (sigma < 0.0) throw std::domain_error("sigma must be non-negative");
  const int c = max_raw_distance(r);
  const int grid = c + 1;
  if (sigma == 0.0) return DiscreteDist(r, point_mass_pmf(mu, grid));

  const double alpha = (0.0 - mu) / sigma;
  const double beta = (1.0 - mu) / sigma;
  if (std::max(std::abs(alpha), std::abs(beta)) > 30.0)
    return DiscreteDist(r, pmf_by_quadrature(mu, sigma, r));

  const double phi0 = phi_cdf(alpha);
  const double z = phi_cdf(beta) - phi0;
  if (z <= 0.0) return DiscreteDist(r, pmf_by_quadrature(mu, sigma, r));

  auto trunc_cdf = [&](double x) {
    return (phi_cdf((x - mu) / sigma) - phi0) / z;
  };
  const double half = 1.0 / (r * (r - 1));  // half of the grid step
  std::vector<double> pmf(static_cast<std::size_t>(grid));
  for (int k = 0; k <= c; ++k) {
    const double x = static_cast<double>(k) / c;
    const double hi = std::min(x + half, 1.0);
    const double lo = std::max(x - half, 0.0);
    pmf[static_cast<std::size_t>(k)] = std::max(0.0, trunc_cdf(hi) - trunc_cdf(lo));
  }
  return DiscreteDist(r, std::move(pmf));
}

DiscreteDist discretize(const EdgeDistribution& params, int r) {
  return discretize(params.mu, params.sigma, r);
}

DistSampler::DistSampler(const DiscreteDist& dist)
    : r(dist.r()), cum(dist.cumulative()) {}

int DistSampler::sample_index(Rng& rng) const {
  const double u = rng.uniform01() * cum.back();
  std::size_t lo = 0, hi = cum.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cum[mid] <= u)
      lo = mid + 1;
    else
      hi = mid;
  }
  return static_cast<int>(lo);
}

double DistSampler::sample(Rng& rng) const {
  return static_cast<double>(sample_index(rng)) / max_raw_distance(r);
}

int sample_index(const DiscreteDist& dist, Rng& rng) {
  return DistSampler(dist).sample_index(rng);
}

double sample(const DiscreteDist& dist, Rng& rng) {
  return DistSampler(dist).sample(rng);
}

namespace {

struct FitCell {
  double mu, sigma;
  std::vector<double> log_pmf;
};

// log-pmf tables over the whole search grid, built once per r
const std::vector<FitCell>& fit_grid(int r) {
  static std::mutex mu_;
  static std::map<int, std::vector<FitCell>> cache;
  std::scoped_lock lock(mu_);
  auto it = cache.find(r);
  if (it != cache.end()) return it->second;

  std::vector<FitCell> cells;
  cells.reserve(58 * 101);
  for (int js = 1; js <= 58; ++js) {
    const double sigma = 0.005 * js;
    for (int im = 0; im <= 100; ++im) {
      const double mu = im / 100.0;
      const DiscreteDist d = discretize(mu, sigma, r);
      FitCell cell{mu, sigma, {}};
      cell.log_pmf.reserve(d.pmf().size());
      for (double p : d.pmf())
        cell.log_pmf.push_back(p > 0.0 ? std::log(p)
                                       : -std::numeric_limits<double>::infinity());
      cells.push_back(std::move(cell));
    }
  }
  return cache.emplace(r, std::move(cells)).first->second;
}

}  // namespace

EdgeDistribution fit_mle(std::span<const double> histogram, int r) {
  const int grid = max_raw_distance(r) + 1;
  if (static_cast<int>(histogram.size()) != grid)
    throw std::domain_error("histogram size does not match the distance grid");
  double total = 0.0;
  for (double h : histogram) {
    if (!(h >= 0.0)) throw std::domain_error("negative histogram count");
    total += h;
  }
  if (total <= 0.0) throw std::domain_error("empty histogram");

  const auto& cells = fit_grid(r);
  double best_ll = -std::numeric_limits<double>::infinity();
  const FitCell* best = nullptr;
  for (const auto& cell : cells) {
    double ll = 0.0;
    for (int k = 0; k < grid; ++k) {
      const double h = histogram[static_cast<std::size_t>(k)];
      if (h > 0.0) ll += h * cell.log_pmf[static_cast<std::size_t>(k)];
    }
    if (ll > best_ll) {
      best_ll = ll;
      best = &cell;
    }
  }
  if (best == nullptr) throw std::domain_error("histogram cannot be fitted");
  return {best->mu, best->sigma};
}

double kl_divergence(const DiscreteDist& empirical, const DiscreteDist& model) {
  if (empirical.r() != model.r())
    throw std::domain_error("distributions over different grids");
  double kl = 0.0;
  for (int k = 0; k < empirical.grid_size(); ++k) {
    const double e = empirical.at(k);
    if (e <= 0.0) continue;
    kl += e * std::log(e / std::max(model.at(k), kPmfFloor));
  }
  return kl;
}

double emd(const DiscreteDist& a, const DiscreteDist& b) {
  if (a.r() != b.r()) throw std::domain_error("distributions over different grids");
  const int c = max_raw_distance(a.r());
  double cum_a = 0.0, cum_b = 0.0, total = 0.0;
  for (int k = 0; k < c; ++k) {
    cum_a += a.at(k);
    cum_b += b.at(k);
    total += std::abs(cum_a - cum_b);
  }
  return total / c;
}

double chi_square_critical(int df) {
  // upper 0.05 critical values of the chi-square distribution
  static constexpr double kTable[] = {
      3.841,  5.991,  7.815,  9.488,  11.070, 12.592, 14.067, 15.507,
      16.919, 18.307, 19.675, 21.026, 22.362, 23.685, 24.996, 26.296,
      27.587, 28.869, 30.144, 31.410, 32.671, 33.924, 35.172, 36.415,
      37.652, 38.885, 40.113, 41.337, 42.557, 43.773};
  if (df < 1 || df > 30) throw std::domain_error("degrees of freedom out of range");
  return kTable[df - 1];
}

ChiSquareResult chi_square(std::span<const double> observed,
                           const DiscreteDist& model) {
  if (static_cast<int>(observed.size()) != model.grid_size())
    throw std::domain_error("observed counts do not match the grid");
  double n = 0.0;
  for (double o : observed) n += o;
  if (n <= 0.0) throw std::domain_error("empty observation counts");

  double stat = 0.0;
  for (int k = 0; k < model.grid_size(); ++k) {
    const double expected = n * std::max(model.at(k), kPmfFloor);
    const double d = observed[static_cast<std::size_t>(k)] - expected;
    stat += d * d / expected;
  }
  ChiSquareResult out;
  out.statistic = stat;
  out.critical = chi_square_critical(model.grid_size() - 1);
  out.pass = stat <= out.critical;
  return out;
}

double sigma_max(double mu_d) {
  if (!(mu_d >= 0.0 && mu_d <= 1.0))
    throw std::domain_error("mean outside [0,1]");
  if (mu_d == 0.0 || mu_d == 1.0) return 0.0;

  // enforce the reflection symmetry exactly
  const double target = std::min(mu_d, 1.0 - mu_d);

  static std::mutex mu_;
  static std::map<double, double> cache;
  {
    std::scoped_lock lock(mu_);
    auto it = cache.find(target);
    if (it != cache.end()) return it->second;
  }

  // For each parent scale s, solve the location m whose truncated mean hits
  // the target (the mean is strictly increasing in m), then track the largest
  // truncated standard deviation seen along that slice.
  double best = 0.0;
  constexpr int kScaleSteps = 64;
  const double s_lo = 0.004, s_hi = 40.0;
  for (int i = 0; i < kScaleSteps; ++i) {
    const double t = static_cast<double>(i) / (kScaleSteps - 1);
    const double s = s_lo * std::pow(s_hi / s_lo, t);

    double lo = target, hi = target, step = std::max(s, 0.25);
    while (truncated_mean(lo, s) > target && step < 1e7) {
      lo -= step;
      step *= 2.0;
    }
    step = std::max(s, 0.25);
    while (truncated_mean(hi, s) < target && step < 1e7) {
      hi += step;
      step *= 2.0;
    }
    for (int iter = 0; iter < 70; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (truncated_mean(mid, s) < target)
        lo = mid;
      else
        hi = mid;
    }
    best = std::max(best, truncated_std(0.5 * (lo + hi), s));
  }

  std::scoped_lock lock(mu_);
  cache.emplace(target, best);
  return best;
}

namespace {

double discrete_mean(double m, double s, int r) {
  return discretize(m, s, r).mean();
}

// location solving discretize(m, s, r).mean() == mean, by bisection
double solve_location(double mean, double s, int r) {
  double lo = mean, hi = mean, step = std::max(s, 0.25);
  while (discrete_mean(lo, s, r) > mean && step < 1e7) {
    lo -= step;
    step *= 2.0;
  }
  step = std::max(s, 0.25);
  while (discrete_mean(hi, s, r) < mean && step < 1e7) {
    hi += step;
    step *= 2.0;
  }
  for (int iter = 0; iter < 90; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (discrete_mean(mid, s, r) < mean)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

EdgeDistribution params_for_moments(double mean, double stddev, int r) {
  if (!(mean >= 0.0 && mean <= 1.0)) throw std::domain_error("mean outside [0,1]");
  if (stddev < 0.0) throw std::domain_error("negative standard deviation");
  if (mean == 0.0 || mean == 1.0 || stddev < 1e-9) return {mean, 0.0};

  static std::mutex mu_;
  static std::map<std::tuple<double, double, int>, EdgeDistribution> cache;
  const auto key = std::make_tuple(mean, stddev, r);
  {
    std::scoped_lock lock(mu_);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const double s_lo = 1e-3, s_hi = 40.0;
  auto std_at = [&](double s) {
    const double m = solve_location(mean, s, r);
    return std::make_pair(discretize(m, s, r).stddev(), m);
  };

  EdgeDistribution out;
  auto [lo_std, lo_m] = std_at(s_lo);
  auto [hi_std, hi_m] = std_at(s_hi);
  if (stddev <= lo_std) {
    out = {lo_m, s_lo};
  } else if (stddev >= hi_std) {
    out = {hi_m, s_hi};
  } else {
    double a = s_lo, b = s_hi;
    double m_mid = lo_m;
    for (int iter = 0; iter < 60; ++iter) {
      const double s = 0.5 * (a + b);
      auto [sd, m] = std_at(s);
      m_mid = m;
      if (sd < stddev)
        a = s;
      else
        b = s;
    }
    out = {m_mid, 0.5 * (a + b)};
  }

  std::scoped_lock lock(mu_);
  cache.emplace(key, out);
  return out;
}

}  // namespace prefnet
