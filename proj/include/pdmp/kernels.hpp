#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Reductions over particle weight arrays. Each has a scalar reference and,
// on x86-64, an AVX2 variant chosen at runtime. PDMP_SIMD=scalar in the
// environment forces the reference path.
namespace pdmp::kernels {

enum class Isa { Scalar, Avx2 };

struct ProductMoments {
  double sum = 0.0;    // sum of w[i] * g[i]
  double sumSq = 0.0;  // sum of (w[i] * g[i])^2
};

double sum(std::span<const double> v);
ProductMoments productMoments(std::span<const double> w, std::span<const double> g);
/// out[i] = w[i] * g[i] * scale.
void scaledProducts(std::span<const double> w, std::span<const double> g, double scale, std::span<double> out);

Isa activeIsa();
std::string_view isaName(Isa isa);
bool isaAvailable(Isa isa);
/// Overrides the runtime choice; throws when the ISA is unavailable.
void selectIsa(Isa isa);

namespace scalar {
double sum(const double* v, std::size_t n);
ProductMoments productMoments(const double* w, const double* g, std::size_t n);
void scaledProducts(const double* w, const double* g, double scale, double* out, std::size_t n);
}  // namespace scalar

namespace avx2 {
double sum(const double* v, std::size_t n);
ProductMoments productMoments(const double* w, const double* g, std::size_t n);
void scaledProducts(const double* w, const double* g, double scale, double* out, std::size_t n);
}  // namespace avx2

}  // namespace pdmp::kernels
