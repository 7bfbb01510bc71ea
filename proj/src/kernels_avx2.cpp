#include <immintrin.h>

#include <algorithm>
#include <cstring>
#include <limits>

#include "prefnet/kernels.hpp"

// AVX2 kernels. Two 4-wide registers hold lanes 0..3 and 4..7; the tail and
// the final fold run through the same 8-lane pattern as the scalar reference,
// so results match it bit for bit.

namespace prefnet::kernels::avx2 {

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
  const std::size_t n = v.size();
  const double* p = v.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(p + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(p + i + 4));
  }
  double lane[kLanes];
  _mm256_storeu_pd(lane, acc0);
  _mm256_storeu_pd(lane + 4, acc1);
  for (; i < n; ++i) lane[i & 7] += p[i];
  return fold_add(lane);
}

double max_value(std::span<const double> v) {
  const std::size_t n = v.size();
  const double* p = v.data();
  const __m256d ninf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d acc0 = ninf;
  __m256d acc1 = ninf;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_max_pd(acc0, _mm256_loadu_pd(p + i));
    acc1 = _mm256_max_pd(acc1, _mm256_loadu_pd(p + i + 4));
  }
  double lane[kLanes];
  _mm256_storeu_pd(lane, acc0);
  _mm256_storeu_pd(lane + 4, acc1);
  for (; i < n; ++i) lane[i & 7] = std::max(lane[i & 7], p[i]);
  return fold_max(lane);
}

void min_inplace(std::span<double> acc, std::span<const double> v) {
  const std::size_t n = acc.size();
  double* a = acc.data();
  const double* b = v.data();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(a + i,
                     _mm256_min_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) a[i] = std::min(a[i], b[i]);
}

double sum_min(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(
        acc0, _mm256_min_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_min_pd(_mm256_loadu_pd(pa + i + 4),
                                             _mm256_loadu_pd(pb + i + 4)));
  }
  double lane[kLanes];
  _mm256_storeu_pd(lane, acc0);
  _mm256_storeu_pd(lane + 4, acc1);
  for (; i < n; ++i) lane[i & 7] += std::min(pa[i], pb[i]);
  return fold_add(lane);
}

double max_min(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  const __m256d ninf = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  __m256d acc0 = ninf;
  __m256d acc1 = ninf;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_max_pd(
        acc0, _mm256_min_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i)));
    acc1 = _mm256_max_pd(acc1, _mm256_min_pd(_mm256_loadu_pd(pa + i + 4),
                                             _mm256_loadu_pd(pb + i + 4)));
  }
  double lane[kLanes];
  _mm256_storeu_pd(lane, acc0);
  _mm256_storeu_pd(lane + 4, acc1);
  for (; i < n; ++i) lane[i & 7] = std::max(lane[i & 7], std::min(pa[i], pb[i]));
  return fold_max(lane);
}

void gather_add(std::span<double> acc, std::span<const std::uint8_t> idx,
                std::span<const double> table) {
  const std::size_t n = acc.size();
  double* a = acc.data();
  const std::uint8_t* ix = idx.data();
  const double* t = table.data();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    std::uint32_t packed;
    std::memcpy(&packed, ix + i, 4);
    const __m128i vidx =
        _mm_cvtepu8_epi32(_mm_cvtsi32_si128(static_cast<int>(packed)));
    const __m256d vals = _mm256_i32gather_pd(t, vidx, 8);
    _mm256_storeu_pd(a + i, _mm256_add_pd(_mm256_loadu_pd(a + i), vals));
  }
  for (; i < n; ++i) a[i] += t[ix[i]];
}

}  // namespace prefnet::kernels::avx2
