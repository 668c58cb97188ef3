#include <gtest/gtest.h>

#include <numbers>

#include "periodist/stable_rank.hpp"
#include "support.hpp"

using namespace periodist;
using support::Rng;

namespace {

SlowSequence c1(double v) { return SlowSequence::constant(1, v); }

struct Pair {
  std::vector<SlowSequence> a, b;
};

/// A random unimodular pair with cofactors from the corona solver.
Pair random_unimodular_pair(Rng& g, std::size_t d) {
  std::vector<SlowSequence> a{SlowSequence(support::random_expr(g, d), d),
                              SlowSequence(support::random_bounded_below(g), d)};
  if (support::uniform_int(g, 0, 1) == 0) std::swap(a[0], a[1]);
  const auto& bounded = a[0].lower_bound() ? a[0] : a[1];
  const auto w = make_witness(a, bounded.lower_bound()->delta, bounded.lower_bound()->K, 20);
  return {a, solve_bezout(a, *w).cofactors};
}

}  // namespace

TEST(ClipBelow, Examples) {
  const auto z = clip_below(SlowSequence::zero(1), 0.25);
  for (std::int64_t n = -3; n <= 3; ++n) EXPECT_EQ(z(LatticeIndex{n}), Complex(0.25));
  const auto c = clip_below(SlowSequence::coordinate(1, 0), 0.25);
  EXPECT_EQ(c(LatticeIndex{0}), Complex(0.25));
  for (std::int64_t n : {-5, -1, 1, 7}) EXPECT_EQ(c(LatticeIndex{n}), Complex(static_cast<double>(n)));
  EXPECT_EQ(c.certificate().M, 1.0);
  EXPECT_EQ(c.certificate().k, 1);
  EXPECT_EQ(kDefaultClipEpsilon, 0.25);
  EXPECT_THROW(clip_below(SlowSequence::one(1), 0.0), InvalidInput);
  EXPECT_THROW(clip_below(SlowSequence::one(1), -1.0), InvalidInput);
}

TEST(ClipBelow, BoundsOnRandomSequences) {
  Rng g(31);
  for (int trial = 0; trial < 100; ++trial) {
    const SlowSequence a(support::random_expr(g, 2), 2);
    const double eps = support::uniform(g, 0.01, 2.0);
    const auto x = clip_below(a, eps);
    for_each_in_window(2, 8, [&](const LatticeIndex& n) {
      EXPECT_GE(std::abs(x(n)), eps);
      EXPECT_LE(std::abs(x(n) - a(n)), 2 * eps);
    });
  }
}

TEST(ApproxByInvertibles, Examples) {
  const double half[] = {0.5};
  const auto one = approx_by_invertibles(SlowSequence::one(1), half);
  for (std::int64_t n = -4; n <= 4; ++n) EXPECT_EQ(one[0].value(LatticeIndex{n}), Complex(1.0));

  const double eps[] = {1.0, 0.5, 0.25};
  const auto zs = approx_by_invertibles(SlowSequence::zero(1), eps);
  ASSERT_EQ(zs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(zs[i].value(LatticeIndex{2}), Complex(eps[i]));
    EXPECT_EQ(zs[i].witness.delta, eps[i]);
    EXPECT_EQ(zs[i].witness.K, 0);
    EXPECT_TRUE(is_unit(zs[i].value, zs[i].witness).invertible);
  }

  const double small[] = {0.9, 0.3, 0.01};
  const auto a = SlowSequence::coordinate(1, 0);
  for (const auto& x : approx_by_invertibles(a, small))
    for (std::int64_t n = -20; n <= 20; ++n)
      if (n != 0) EXPECT_EQ(x.value(LatticeIndex{n}), a(LatticeIndex{n}));
}

TEST(ReducePair, IdentityTrace) {
  const auto t = reduce_pair(c1(1), c1(0), c1(1), c1(0));
  const LatticeIndex n{3};
  EXPECT_EQ(t.u1(n), Complex(2.0));
  EXPECT_EQ(t.A1(n), Complex(0.5));
  EXPECT_EQ(t.B1(n), Complex(2.0));
  EXPECT_EQ(t.B1tilde(n), Complex(2.0));
  EXPECT_EQ(t.h(n), Complex(0.0));
  EXPECT_EQ(t.result(n), Complex(1.0));
  EXPECT_TRUE(is_unit(t.result, t.result_witness).invertible);
}

TEST(ReducePair, ClippedTrace) {
  // u1 = 1, A1 = 0, B1 = 0, B1~ = 1/4, h = 4 * 1 * 1, result = 0 + 4 * 1.
  const auto t = reduce_pair(c1(0), c1(1), c1(0), c1(1), 0.25);
  const LatticeIndex n{-2};
  EXPECT_EQ(t.u1(n), Complex(1.0));
  EXPECT_EQ(t.A1(n), Complex(0.0));
  EXPECT_EQ(t.B1(n), Complex(0.0));
  EXPECT_EQ(t.B1tilde(n), Complex(0.25));
  EXPECT_EQ(t.h(n), Complex(4.0));
  EXPECT_EQ(t.result(n), Complex(4.0));
  EXPECT_EQ(t.correction_floor, 0.5);
  EXPECT_TRUE(is_unit(t.result, t.result_witness).invertible);
}

TEST(ReducePair, RejectsBadInput) {
  EXPECT_THROW(reduce_pair(c1(0), c1(1), c1(0), c1(1), 0.5), InvalidInput);
  EXPECT_THROW(reduce_pair(c1(0), c1(1), c1(0), c1(1), 0.0), InvalidInput);
  try {
    reduce_pair(c1(0), c1(1), c1(0), c1(0.5));
    FAIL() << "expected a Bezout rejection";
  } catch (const BezoutRejected& e) {
    EXPECT_DOUBLE_EQ(e.residual(), 0.5);
  }
}

TEST(ReducePair, PropertiesOnRandomPairs) {
  Rng g(32);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t d = static_cast<std::size_t>(support::uniform_int(g, 1, 2));
    const auto p = random_unimodular_pair(g, d);
    const double eps = trial % 2 ? 0.25 : support::uniform(g, 0.01, 0.49);
    const std::int64_t R = d == 1 ? 40 : 12;
    const auto t = reduce_pair(p.a[0], p.a[1], p.b[0], p.b[1], eps, R);
    for_each_in_window(d, R, [&](const LatticeIndex& n) {
      const Complex res = t.result(n);
      EXPECT_GE(std::abs(t.correction(n)), 1 - 2 * eps - 1e-12);
      EXPECT_LE(std::abs(res - (p.a[0](n) + t.h(n) * p.a[1](n))), 1e-10 * (1 + std::abs(res)));
      EXPECT_LE(std::abs(res - t.u1(n) / t.B1tilde(n) * t.correction(n)), 1e-10 * (1 + std::abs(res)));
    });
    EXPECT_TRUE(is_unit(t.result, t.result_witness, R).invertible) << trial;
  }
}

TEST(ReduceTuple, ShortensATriple) {
  Rng g(33);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SlowSequence> a{SlowSequence(support::random_expr(g, 1), 1),
                                SlowSequence(support::random_expr(g, 1), 1),
                                SlowSequence(support::random_bounded_below(g), 1)};
    const auto lb = *a[2].lower_bound();
    const auto b = solve_bezout(a, *make_witness(a, lb.delta, lb.K, 30)).cofactors;
    const auto red = reduce_tuple(a, b, 0.25, 30);
    ASSERT_EQ(red.reduced.size(), 2u);
    ASSERT_EQ(red.cofactors.size(), 2u);
    EXPECT_LE(verify_bezout(red.reduced, red.cofactors, 30), 1e-10) << trial;
    for_each_in_window(1, 30, [&](const LatticeIndex& n) {
      EXPECT_LE(std::abs(red.reduced[0](n) - (a[0](n) + red.h[0](n) * a[2](n))), 1e-10 * (1 + std::abs(red.reduced[0](n))));
      EXPECT_EQ(red.reduced[1](n), a[1](n));
    });
  }
}

TEST(WeakStarGap, Examples) {
  const auto a = SlowSequence::coordinate(1, 0);
  const auto b2 = FastSequence::exp_decay(1, std::numbers::ln2);
  EXPECT_EQ(weak_star_gap(a, a, b2, 20).gap, 0.0);

  for (double eps : {0.5, 0.25, 0.125}) {
    const auto g0 = weak_star_gap(clip_below(SlowSequence::zero(1), eps), SlowSequence::zero(1),
                                  FastSequence::indicator({0}), 10);
    EXPECT_EQ(g0.gap, eps);
    const auto g1 = weak_star_gap(clip_below(a, eps), a, b2, 50);
    EXPECT_EQ(g1.gap, eps);
    EXPECT_LE(g1.gap, g1.bound);
  }
}

TEST(WeakStarGap, ClipAtOneAlsoMovesMinusOne) {
  // |a(-1)| = 1 <= eps, so a_1(-1) = 1 and the gap is 1 + 2 * 2^-1.
  const auto a = SlowSequence::coordinate(1, 0);
  const auto g = weak_star_gap(clip_below(a, 1.0), a, FastSequence::exp_decay(1, std::numbers::ln2), 50);
  EXPECT_NEAR(g.gap, 2.0, 1e-15);
}

TEST(WeakStarGap, ConvergenceRate) {
  Rng g(34);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = static_cast<std::size_t>(support::uniform_int(g, 1, 2));
    const SlowSequence a(support::random_expr(g, d), d);
    const auto b = FastSequence::exp_decay(d, support::uniform(g, 0.3, 2.0));
    const double eps = support::uniform(g, 0.001, 1.0);
    const auto r = weak_star_gap(clip_below(a, eps), a, b, 15);
    EXPECT_LE(r.gap, r.bound * (1 + 1e-12));
    EXPECT_LE(r.gap, 2 * eps * r.abs_sum_b * (1 + 1e-12));
  }
}

TEST(QAlgebra, ViolationExamples) {
  EXPECT_EQ(q_algebra_violation(1.0, 1.0, 2, 10), (std::optional<LatticeIndex>{LatticeIndex{3}}));
  EXPECT_EQ(q_algebra_violation(1.0, 10.0, 0, 10), (std::optional<LatticeIndex>{LatticeIndex{0}}));
  EXPECT_FALSE(q_algebra_violation(1.0, 1.0, 1000000, 20).has_value());
  EXPECT_EQ(q_algebra_violation(1.0, 1.0, 2, 10, 3), (std::optional<LatticeIndex>{LatticeIndex{3, 0, 0}}));
  EXPECT_THROW(q_algebra_violation(0.0, 1.0, 2, 10), InvalidInput);
}

TEST(QAlgebra, ExpNetGapWithinMeanValueBound) {
  const FastSequence b(expr::polyenv(-3), 1);
  const double Kp = exp_net_constant(b, 50);
  for (double eps : {0.5, 0.1, 0.01}) {
    const auto g = weak_star_gap(SlowSequence::exp_decay(1, eps), SlowSequence::one(1), b, 50);
    EXPECT_LE(g.gap, Kp * eps);
    EXPECT_GT(g.gap, 0.0);
  }
}
