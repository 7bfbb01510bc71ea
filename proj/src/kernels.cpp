#include "prefnet/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace prefnet::kernels {

bool avx2_supported() {
#if PREFNET_HAVE_AVX2
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Isa pick_isa() {
  if (const char* env = std::getenv("PREFNET_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && avx2_supported()) return Isa::avx2;
  }
  return avx2_supported() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa> g_isa{pick_isa()};

}  // namespace

Isa active() { return g_isa.load(std::memory_order_relaxed); }

void force(Isa isa) {
  if (isa == Isa::avx2 && !avx2_supported()) isa = Isa::scalar;
  g_isa.store(isa, std::memory_order_relaxed);
}

const std::string& isa_name() {
  static const std::string names[] = {"scalar", "avx2"};
  return names[active() == Isa::avx2 ? 1 : 0];
}

#if PREFNET_HAVE_AVX2
#define PREFNET_DISPATCH(fn, ...)                                      \
  return active() == Isa::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#define PREFNET_DISPATCH_VOID(fn, ...)          \
  if (active() == Isa::avx2)                    \
    avx2::fn(__VA_ARGS__);                      \
  else                                          \
    scalar::fn(__VA_ARGS__)
#else
#define PREFNET_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#define PREFNET_DISPATCH_VOID(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double sum(std::span<const double> v) { PREFNET_DISPATCH(sum, v); }

double max_value(std::span<const double> v) { PREFNET_DISPATCH(max_value, v); }

void min_inplace(std::span<double> acc, std::span<const double> v) {
  PREFNET_DISPATCH_VOID(min_inplace, acc, v);
}

double sum_min(std::span<const double> a, std::span<const double> b) {
  PREFNET_DISPATCH(sum_min, a, b);
}

double max_min(std::span<const double> a, std::span<const double> b) {
  PREFNET_DISPATCH(max_min, a, b);
}

void gather_add(std::span<double> acc, std::span<const std::uint8_t> idx,
                std::span<const double> table) {
  PREFNET_DISPATCH_VOID(gather_add, acc, idx, table);
}

}  // namespace prefnet::kernels
