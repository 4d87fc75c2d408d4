#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dikin/rng.hpp"

using dikin::Rng;

TEST(Rng, SameSeedSameStream) {
  Rng a(123), b(123);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDiffer) {
  Rng a(123, 0), b(123, 1);
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next_u64() == b.next_u64();
  EXPECT_EQ(equal, 0);
}

TEST(Rng, SplitMatchesExplicitStream) {
  Rng base(9, 4);
  Rng s = base.split(7);
  Rng e(9, 7);
  EXPECT_EQ(s.seed(), 9u);
  EXPECT_EQ(s.stream(), 7u);
  for (int i = 0; i < 50; ++i) ASSERT_EQ(s.next_u64(), e.next_u64());
}

TEST(Rng, UniformRanges) {
  Rng r(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = r.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Rng, NormalMoments) {
  Rng r(2);
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s1 += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
  EXPECT_NEAR(s4 / n, 3.0, 0.08);
}

TEST(Rng, NormalTailMass) {
  // P(|X| > 1.96) = 0.05
  Rng r(3);
  const int n = 100000;
  int tail = 0;
  for (int i = 0; i < n; ++i) tail += std::abs(r.normal()) > 1.959963984540054;
  EXPECT_NEAR(tail / double(n), 0.05, 0.003);
}

TEST(Rng, BelowIsUniform) {
  Rng r(4);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = r.below(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 5 * std::sqrt(n / 7.0));
}

TEST(Rng, NormalVectorSize) {
  Rng r(5);
  EXPECT_EQ(r.normal_vector(4).size(), 4);
  EXPECT_EQ(r.normal_vector(0).size(), 0);
}

TEST(Rng, FrozenFirstWords) {
  // mt19937_64 output is fixed by the C++ standard for a given seeding;
  // pin the first word so that a change of seeding shows up here.
  Rng a(42);
  Rng b(42);
  const std::uint64_t w = a.next_u64();
  EXPECT_EQ(w, b.next_u64());
  std::seed_seq seq{42u, 0u, 0u, 0u};
  std::mt19937_64 ref(seq);
  EXPECT_EQ(w, ref());
}
