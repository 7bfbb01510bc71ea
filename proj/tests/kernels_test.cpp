#include <cstring>
#include <vector>

#include "doctest.h"
#include "prefnet/kernels.hpp"
#include "prefnet/rng.hpp"

using namespace prefnet;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-10.0, 10.0);
  return v;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar reference matches naive formulas") {
  Rng rng(11);
  for (std::size_t n : {1u, 2u, 7u, 8u, 9u, 31u, 256u, 1001u}) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);
    long double sum = 0, sum_min = 0;
    double mx = a[0], mx_min = std::min(a[0], b[0]);
    for (std::size_t i = 0; i < n; ++i) {
      sum += a[i];
      sum_min += std::min(a[i], b[i]);
      mx = std::max(mx, a[i]);
      mx_min = std::max(mx_min, std::min(a[i], b[i]));
    }
    CHECK(kernels::scalar::sum(a) == doctest::Approx(static_cast<double>(sum)).epsilon(1e-12));
    CHECK(kernels::scalar::sum_min(a, b) ==
          doctest::Approx(static_cast<double>(sum_min)).epsilon(1e-12));
    CHECK(kernels::scalar::max_value(a) == mx);
    CHECK(kernels::scalar::max_min(a, b) == mx_min);
  }
}

TEST_CASE("avx2 variants are bit-identical to the scalar reference") {
  if (!kernels::avx2_supported()) return;
#if PREFNET_HAVE_AVX2
  Rng rng(13);
  for (std::size_t n : {1u, 3u, 4u, 5u, 8u, 12u, 16u, 17u, 255u, 256u, 1023u}) {
    const auto a = random_vec(n, rng);
    const auto b = random_vec(n, rng);
    CHECK(bit_equal(kernels::scalar::sum(a), kernels::avx2::sum(a)));
    CHECK(bit_equal(kernels::scalar::max_value(a), kernels::avx2::max_value(a)));
    CHECK(bit_equal(kernels::scalar::sum_min(a, b), kernels::avx2::sum_min(a, b)));
    CHECK(bit_equal(kernels::scalar::max_min(a, b), kernels::avx2::max_min(a, b)));

    auto acc1 = random_vec(n, rng);
    auto acc2 = acc1;
    kernels::scalar::min_inplace(acc1, a);
    kernels::avx2::min_inplace(acc2, a);
    CHECK(acc1 == acc2);

    std::vector<double> table = random_vec(29, rng);
    std::vector<std::uint8_t> idx(n);
    for (auto& x : idx) x = static_cast<std::uint8_t>(rng.below(29));
    auto g1 = random_vec(n, rng);
    auto g2 = g1;
    kernels::scalar::gather_add(g1, idx, table);
    kernels::avx2::gather_add(g2, idx, table);
    CHECK(g1 == g2);
  }
#endif
}

TEST_CASE("dispatch honors forced isa and stays consistent") {
  Rng rng(17);
  const auto a = random_vec(100, rng);
  const auto b = random_vec(100, rng);
  const kernels::Isa saved = kernels::active();
  kernels::force(kernels::Isa::scalar);
  const double s1 = kernels::sum_min(a, b);
  kernels::force(kernels::Isa::avx2);  // falls back to scalar when unsupported
  const double s2 = kernels::sum_min(a, b);
  kernels::force(saved);
  CHECK(bit_equal(s1, s2));
}

TEST_CASE("empty and degenerate inputs") {
  CHECK(kernels::sum(std::span<const double>{}) == 0.0);
  std::vector<double> acc;
  kernels::min_inplace(acc, std::span<const double>{});
  CHECK(acc.empty());
}

}  // TEST_SUITE
