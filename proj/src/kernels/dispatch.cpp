#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "pdmp/kernels.hpp"

namespace pdmp::kernels {

namespace {

bool cpuHasAvx2() {
#if defined(PDMP_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("PDMP_SIMD"); env && std::string(env) == "scalar") return Isa::Scalar;
  return cpuHasAvx2() ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void checkSizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernel operands differ in length");
}

}  // namespace

Isa activeIsa() { return current().load(std::memory_order_relaxed); }

std::string_view isaName(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isaAvailable(Isa isa) { return isa == Isa::Scalar || cpuHasAvx2(); }

void selectIsa(Isa isa) {
  if (!isaAvailable(isa)) throw std::runtime_error("instruction set " + std::string(isaName(isa)) + " unavailable");
  current().store(isa, std::memory_order_relaxed);
}

#if defined(PDMP_HAVE_AVX2_TU)
#define PDMP_DISPATCH(fn, ...) (activeIsa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define PDMP_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

double sum(std::span<const double> v) { return PDMP_DISPATCH(sum, v.data(), v.size()); }

ProductMoments productMoments(std::span<const double> w, std::span<const double> g) {
  checkSizes(w.size(), g.size());
  return PDMP_DISPATCH(productMoments, w.data(), g.data(), w.size());
}

void scaledProducts(std::span<const double> w, std::span<const double> g, double scale, std::span<double> out) {
  checkSizes(w.size(), g.size());
  checkSizes(w.size(), out.size());
  PDMP_DISPATCH(scaledProducts, w.data(), g.data(), scale, out.data(), w.size());
}

}  // namespace pdmp::kernels
