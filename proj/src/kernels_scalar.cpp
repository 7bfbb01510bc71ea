#include <algorithm>
#include <limits>

#include "prefnet/kernels.hpp"

// Reference kernels. Reductions keep 8 partial accumulators indexed by
// (element index mod 8) and fold them pairwise (stride 4, 2, 1); the AVX2
// variants follow the same lane pattern, which makes the two paths bit-exact.

namespace prefnet::kernels::scalar {

namespace {
constexpr int kLanes = 8;

inline double fold_add(double* lane) {
  for (int s = kLanes / 2; s >= 1; s /= 2)
    for (int i = 0; i < s; ++i) lane[i] += lane[i + s];
  return lane[0];
}

inline double fold_max(double* lane) {
  for (int s = kLanes / 2; s >= 1; s /= 2)
    for (int i = 0; i < s; ++i) lane[i] = std::max(lane[i], lane[i + s]);
  return lane[0];
}
}  // namespace

double sum(std::span<const double> v) {
  double lane[kLanes] = {0, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < v.size(); ++i) lane[i & 7] += v[i];
  return fold_add(lane);
}

double max_value(std::span<const double> v) {
  double lane[kLanes];
  std::fill(lane, lane + kLanes, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < v.size(); ++i)
    lane[i & 7] = std::max(lane[i & 7], v[i]);
  return fold_max(lane);
}

void min_inplace(std::span<double> acc, std::span<const double> v) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::min(acc[i], v[i]);
}

double sum_min(std::span<const double> a, std::span<const double> b) {
  double lane[kLanes] = {0, 0, 0, 0, 0, 0, 0, 0};
  for (std::size_t i = 0; i < a.size(); ++i)
    lane[i & 7] += std::min(a[i], b[i]);
  return fold_add(lane);
}

double max_min(std::span<const double> a, std::span<const double> b) {
  double lane[kLanes];
  std::fill(lane, lane + kLanes, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < a.size(); ++i)
    lane[i & 7] = std::max(lane[i & 7], std::min(a[i], b[i]));
  return fold_max(lane);
}

void gather_add(std::span<double> acc, std::span<const std::uint8_t> idx,
                std::span<const double> table) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += table[idx[i]];
}

}  // namespace prefnet::kernels::scalar
