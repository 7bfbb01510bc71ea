#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

// Array primitives behind the hot inner loops (greedy marginals, cascade
// scoring, reductions). Each kernel has a scalar reference implementation and
// an AVX2 variant selected at runtime; the two are bit-identical because every
// reduction accumulates into 8 fixed lanes (lane = index mod 8) and folds them
// in one fixed order, regardless of instruction set.

namespace prefnet::kernels {

enum class Isa { scalar, avx2 };

// Instruction set currently in use. Picked once at startup from CPUID;
// the PREFNET_KERNELS environment variable ("scalar" or "avx2") overrides.
Isa active();
const std::string& isa_name();
void force(Isa isa);  // test hook
bool avx2_supported();

// sum of v, 8-lane fixed-order reduction
double sum(std::span<const double> v);

// max of v; v must be non-empty
double max_value(std::span<const double> v);

// acc[i] = min(acc[i], v[i])
void min_inplace(std::span<double> acc, std::span<const double> v);

// sum over i of min(a[i], b[i]), 8-lane fixed-order reduction
double sum_min(std::span<const double> a, std::span<const double> b);

// max over i of min(a[i], b[i]); inputs must be non-empty
double max_min(std::span<const double> a, std::span<const double> b);

// acc[i] += table[idx[i]]
void gather_add(std::span<double> acc, std::span<const std::uint8_t> idx,
                std::span<const double> table);

namespace scalar {
double sum(std::span<const double> v);
double max_value(std::span<const double> v);
void min_inplace(std::span<double> acc, std::span<const double> v);
double sum_min(std::span<const double> a, std::span<const double> b);
double max_min(std::span<const double> a, std::span<const double> b);
void gather_add(std::span<double> acc, std::span<const std::uint8_t> idx,
                std::span<const double> table);
}  // namespace scalar

#if PREFNET_HAVE_AVX2
namespace avx2 {
double sum(std::span<const double> v);
double max_value(std::span<const double> v);
void min_inplace(std::span<double> acc, std::span<const double> v);
double sum_min(std::span<const double> a, std::span<const double> b);
double max_min(std::span<const double> a, std::span<const double> b);
void gather_add(std::span<double> acc, std::span<const std::uint8_t> idx,
                std::span<const double> table);
}  // namespace avx2
#endif

}  // namespace prefnet::kernels
