#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "pdmp/random.hpp"

using namespace pdmp;

TEST(Philox, KnownAnswerZero) {
  const auto r = philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(r[0], 0x6627e8d5u);
  EXPECT_EQ(r[1], 0xe169c58du);
  EXPECT_EQ(r[2], 0xbc57ac4cu);
  EXPECT_EQ(r[3], 0x9b00dbd8u);
}

TEST(Philox, KnownAnswerOnes) {
  const auto r = philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff});
  EXPECT_EQ(r[0], 0x408f276du);
  EXPECT_EQ(r[1], 0x41c83b0eu);
  EXPECT_EQ(r[2], 0xa20bc7c6u);
  EXPECT_EQ(r[3], 0x6d5451fdu);
}

TEST(Philox, KnownAnswerPi) {
  const auto r = philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0});
  EXPECT_EQ(r[0], 0xd16cfe09u);
  EXPECT_EQ(r[1], 0x94fdccebu);
  EXPECT_EQ(r[2], 0x5001e420u);
  EXPECT_EQ(r[3], 0x24126ea1u);
}

TEST(RandomStream, SameKeySameSequence) {
  RandomStream a(42, StreamDomain::Propagation, 3, 17);
  RandomStream b(42, StreamDomain::Propagation, 3, 17);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RandomStream, DistinctKeysDiffer) {
  std::set<std::uint64_t> first;
  for (std::uint32_t idx = 0; idx < 50; ++idx)
    for (std::uint32_t step = 0; step < 4; ++step) first.insert(RandomStream(42, StreamDomain::Propagation, step, idx)());
  first.insert(RandomStream(42, StreamDomain::Selection, 0, 0)());
  first.insert(RandomStream(43, StreamDomain::Propagation, 0, 0)());
  EXPECT_EQ(first.size(), 202u);
}

TEST(RandomStream, UniformOpenInterval) {
  RandomStream r(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(ReplicationSeed, DistinctAcrossReplications) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 1000; ++r) seeds.insert(replicationSeed(7, r));
  EXPECT_EQ(seeds.size(), 1000u);
}
