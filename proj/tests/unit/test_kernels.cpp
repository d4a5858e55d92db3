#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pdmp/kernels.hpp"
#include "pdmp/random.hpp"

using namespace pdmp;

namespace {

std::vector<double> randomWeights(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = std::exp(-30.0 * rng.uniform());
  return v;
}

void expectRelClose(double a, double b) { EXPECT_LE(std::abs(a - b), 1e-12 * std::abs(b)) << a << " vs " << b; }

}  // namespace

TEST(Kernels, ScalarReference) {
  const std::vector<double> w{1, 2, 3, 4, 5};
  const std::vector<double> g{2, 2, 2, 2, 0};
  EXPECT_EQ(kernels::scalar::sum(w.data(), w.size()), 15.0);
  const auto m = kernels::scalar::productMoments(w.data(), g.data(), w.size());
  EXPECT_EQ(m.sum, 20.0);
  EXPECT_EQ(m.sumSq, 4 + 16 + 36 + 64);
  std::vector<double> out(5);
  kernels::scalar::scaledProducts(w.data(), g.data(), 0.5, out.data(), 5);
  EXPECT_EQ(out, (std::vector<double>{1, 2, 3, 4, 0}));
}

TEST(Kernels, Avx2MatchesScalar) {
  if (!kernels::isaAvailable(kernels::Isa::Avx2)) GTEST_SKIP() << "AVX2 not available";
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 15u, 16u, 17u, 1000u, 10007u}) {
    const auto w = randomWeights(n, n + 1);
    const auto g = randomWeights(n, n + 2);
    expectRelClose(kernels::avx2::sum(w.data(), n), kernels::scalar::sum(w.data(), n));
    const auto a = kernels::avx2::productMoments(w.data(), g.data(), n);
    const auto s = kernels::scalar::productMoments(w.data(), g.data(), n);
    expectRelClose(a.sum, s.sum);
    expectRelClose(a.sumSq, s.sumSq);
    std::vector<double> oa(n);
    std::vector<double> os(n);
    kernels::avx2::scaledProducts(w.data(), g.data(), 0.37, oa.data(), n);
    kernels::scalar::scaledProducts(w.data(), g.data(), 0.37, os.data(), n);
    EXPECT_EQ(oa, os);
  }
}

TEST(Kernels, DispatchOverride) {
  const auto initial = kernels::activeIsa();
  kernels::selectIsa(kernels::Isa::Scalar);
  EXPECT_EQ(kernels::activeIsa(), kernels::Isa::Scalar);
  EXPECT_EQ(kernels::isaName(kernels::Isa::Scalar), "scalar");
  const auto w = randomWeights(100, 9);
  EXPECT_EQ(kernels::sum(w), kernels::scalar::sum(w.data(), w.size()));
  if (kernels::isaAvailable(initial)) kernels::selectIsa(initial);
}

TEST(Kernels, MismatchedSpansAreRejected) {
  const std::vector<double> w(4, 1.0);
  const std::vector<double> g(3, 1.0);
  EXPECT_THROW(kernels::productMoments(w, g), std::invalid_argument);
}
