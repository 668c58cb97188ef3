#include <gtest/gtest.h>

#include <numbers>

#include "periodist/sequence.hpp"
#include "support.hpp"

using namespace periodist;
using support::Rng;

namespace {

constexpr double kPi = std::numbers::pi;

FastSequence two_pow_minus_abs() { return FastSequence::exp_decay(1, std::numbers::ln2); }

}  // namespace

TEST(SlowSequence, EvaluatesLeaves) {
  EXPECT_EQ(SlowSequence::one(2)(LatticeIndex{5, -7}), Complex(1.0));
  EXPECT_EQ(SlowSequence::coordinate(2, 0)(LatticeIndex{3, -2}), Complex(3.0));
  EXPECT_EQ(SlowSequence::poly_envelope(2, 2)(LatticeIndex{1, 1}), Complex(9.0));
  EXPECT_EQ(SlowSequence::indicator({1, 2})(LatticeIndex{1, 2}), Complex(1.0));
  EXPECT_EQ(SlowSequence::indicator({1, 2})(LatticeIndex{2, 1}), Complex(0.0));
  EXPECT_NEAR(SlowSequence::exp_decay(1, 0.5)(LatticeIndex{-4}).real(), std::exp(-2.0), 1e-15);
}

TEST(SlowSequence, RejectsDimensionMismatch) {
  EXPECT_THROW(SlowSequence::one(2)(LatticeIndex{1}), DimensionMismatch);
  EXPECT_THROW(SlowSequence::one(1) + SlowSequence::one(2), DimensionMismatch);
  EXPECT_THROW(SlowSequence(expr::coord(2), 2), InvalidInput);
  EXPECT_THROW(SlowSequence(expr::indicator({1, 2, 3}), 2), InvalidInput);
}

TEST(Combine, ComposesCertificates) {
  const auto two = SlowSequence::one(1) + SlowSequence::one(1);
  EXPECT_EQ(two(LatticeIndex{17}), Complex(2.0));
  EXPECT_NEAR(two.certificate().M, 2.0, 1e-12);
  EXPECT_GE(two.certificate().M, 2.0);
  EXPECT_EQ(two.certificate().k, 0);

  const auto a = SlowSequence::coordinate(1, 0);
  EXPECT_EQ(a.certificate().M, 1.0);
  EXPECT_EQ(a.certificate().k, 1);
  const auto sq = a * a;
  EXPECT_NEAR(sq.certificate().M, 1.0, 1e-12);
  EXPECT_EQ(sq.certificate().k, 2);
  EXPECT_EQ(sq(LatticeIndex{3}), Complex(9.0));

  const auto p = phase(SlowSequence::constant(1, {3.0, 4.0}) * a);
  EXPECT_EQ(p.certificate().M, 1.0);
  EXPECT_EQ(p.certificate().k, 0);
  const auto n = -conj(abs(sq));
  EXPECT_EQ(n.certificate().k, 2);
}

TEST(Combine, PhaseOfNegativeRealIsMinusOne) {
  const auto a = SlowSequence::coordinate(1, 0);
  const Complex v = phase(a)(LatticeIndex{-3});
  // Arg(-3) = pi, so e^(-i pi) = -1.
  EXPECT_NEAR(v.real(), std::cos(-kPi), 1e-15);
  EXPECT_NEAR(v.imag(), 0.0, 1e-15);
  EXPECT_NEAR(principal_arg(a)(LatticeIndex{-3}).real(), kPi, 0.0);
  EXPECT_EQ(principal_arg(a)(LatticeIndex{0}), Complex(0.0));
}

TEST(Certificates, SoundOnRandomExpressions) {
  Rng g(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = static_cast<std::size_t>(support::uniform_int(g, 1, 3));
    const SlowSequence a(support::random_expr(g, d, 3), d);
    const auto& c = a.certificate();
    for_each_in_window(d, d == 3 ? 6 : 12, [&](const LatticeIndex& n) {
      const double bound = c.M * std::pow(1.0 + static_cast<double>(n.norm1()), c.k);
      EXPECT_LE(std::abs(a(n)), bound * (1 + 1e-12)) << "trial " << trial << " n " << to_string(n);
    });
  }
}

TEST(Certificates, DeclaredCertificateIsChecked) {
  const auto a = SlowSequence::norm1(1);
  EXPECT_NO_THROW(with_certificate(a, {1.0, 1}, 50));
  const auto bad = certificate_violation(a, {0.5, 1}, 50);
  ASSERT_TRUE(bad.has_value());
  // |n| <= 0.5 (1+|n|) first fails at |n| = 2; -2 precedes 2.
  EXPECT_EQ(*bad, (LatticeIndex{-2}));
  EXPECT_THROW(with_certificate(a, {0.5, 1}, 50), CertificateRejected);
  EXPECT_THROW(verify_declared_certificates(expr::declare(expr::norm1(), {0.9, 1}), 1, 10), CertificateRejected);
}

TEST(RingAxioms, HoldPointwiseOnRandomPairs) {
  Rng g(12);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = static_cast<std::size_t>(support::uniform_int(g, 1, 2));
    const SlowSequence x(support::random_expr(g, d), d), y(support::random_expr(g, d), d),
        z(support::random_expr(g, d), d);
    const auto one = SlowSequence::one(d);
    for_each_in_window(d, 8, [&](const LatticeIndex& n) {
      const double tol = 1e-12 * (1 + std::abs(x(n)) * std::abs(y(n)) * std::abs(z(n)) + std::abs(x(n)) +
                                  std::abs(y(n)) + std::abs(z(n)));
      EXPECT_NEAR(std::abs((x + y)(n) - (y + x)(n)), 0.0, tol);
      EXPECT_NEAR(std::abs((x * y)(n) - (y * x)(n)), 0.0, tol);
      EXPECT_NEAR(std::abs(((x + y) + z)(n) - (x + (y + z))(n)), 0.0, tol);
      EXPECT_NEAR(std::abs(((x * y) * z)(n) - (x * (y * z))(n)), 0.0, tol);
      EXPECT_NEAR(std::abs((x * (y + z))(n) - (x * y + x * z)(n)), 0.0, tol);
      EXPECT_EQ((one * x)(n), x(n));
    });
  }
}

TEST(RingAxioms, PhaseTimesValueIsModulus) {
  Rng g(13);
  for (int trial = 0; trial < 100; ++trial) {
    const SlowSequence a(support::random_expr(g, 2), 2);
    for_each_in_window(2, 8, [&](const LatticeIndex& n) {
      const Complex v = (phase(a) * a)(n);
      EXPECT_NEAR(v.real(), std::abs(a(n)), 1e-12 * (1 + std::abs(a(n))));
      EXPECT_NEAR(v.imag(), 0.0, 1e-12 * (1 + std::abs(a(n))));
    });
  }
}

TEST(Reciprocal, EnforcesItsWitness) {
  const auto u = SlowSequence::one(1) + SlowSequence::norm1(1);
  const auto inv = reciprocal(u, {1.0, 0});
  EXPECT_DOUBLE_EQ(inv(LatticeIndex{-4}).real(), 0.2);
  EXPECT_NEAR(inv.certificate().M, 1.0, 1e-12);
  EXPECT_EQ(inv.certificate().k, 0);
  const auto bad = reciprocal(SlowSequence::coordinate(1, 0), {1.0, 0});
  EXPECT_THROW(bad(LatticeIndex{0}), WitnessViolation);
  const auto weak = reciprocal(SlowSequence::exp_decay(1, 1.0), {1.0, 1});
  EXPECT_NO_THROW(weak(LatticeIndex{0}));
  // e^-1 < 1/2 = floor at |n| = 1.
  EXPECT_THROW(weak(LatticeIndex{1}), WitnessViolation);
  EXPECT_THROW(weak(LatticeIndex{3}), WitnessViolation);
}

TEST(Seminorm, Examples) {
  const auto delta0 = FastSequence::indicator({0});
  for (int k : {0, 1, 5}) {
    const auto s = seminorm(delta0, k, 10);
    EXPECT_EQ(s.sup_on_window, 1.0);
    EXPECT_GE(s.certified_bound, 1.0);
    EXPECT_NEAR(s.certified_bound, 1.0, 1e-14);
  }
  const auto s = seminorm(two_pow_minus_abs(), 1, 10);
  EXPECT_DOUBLE_EQ(s.sup_on_window, 1.0);
  EXPECT_GE(s.certified_bound, s.sup_on_window);
  const auto z = seminorm(FastSequence::zero(2), 3, 5);
  EXPECT_EQ(z.sup_on_window, 0.0);
  EXPECT_EQ(z.certified_bound, 0.0);
}

TEST(Seminorm, CertifiedBoundDominatesLargeWindow) {
  Rng g(14);
  for (int trial = 0; trial < 30; ++trial) {
    const double rate = support::uniform(g, 0.2, 2.0);
    const int k = static_cast<int>(support::uniform_int(g, 0, 6));
    const auto b = FastSequence::exp_decay(1, rate);
    const auto small = seminorm(b, k, 5);
    // The true p_k for e^(-rate r) is attained near r = k / rate.
    double truth = 0.0;
    for (int r = 0; r <= 500; ++r) truth = std::max(truth, std::pow(1.0 + r, k) * std::exp(-rate * r));
    EXPECT_GE(small.certified_bound, truth * (1 - 1e-12)) << rate << " " << k;
  }
}

TEST(Pairing, Examples) {
  const auto p0 = pairing(SlowSequence::one(1), FastSequence::indicator({0}), 0);
  EXPECT_EQ(p0.value, Complex(1.0));
  EXPECT_EQ(p0.tail_bound, 0.0);

  const auto p1 = pairing(SlowSequence::coordinate(1, 0), FastSequence::indicator({2}), 2);
  EXPECT_EQ(p1.value, Complex(2.0));

  const auto p2 = pairing(SlowSequence::one(1), two_pow_minus_abs(), 30);
  EXPECT_NEAR(p2.value.real(), 3.0, std::ldexp(1.0, -28));
  EXPECT_TRUE(std::isfinite(p2.tail_bound));
  EXPECT_LE(3.0 - p2.value.real(), p2.tail_bound);
}

TEST(Pairing, Linearity) {
  Rng g(15);
  const auto b = FastSequence::exp_decay(2, 0.7);
  for (int trial = 0; trial < 50; ++trial) {
    const SlowSequence a1(support::random_expr(g, 2), 2), a2(support::random_expr(g, 2), 2);
    const Complex alpha{support::uniform(g, -2, 2), support::uniform(g, -2, 2)};
    const auto lhs = pairing(SlowSequence::constant(2, alpha) * a1 + a2, b, 12).value;
    const auto rhs = alpha * pairing(a1, b, 12).value + pairing(a2, b, 12).value;
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(Pairing, TruncationConsistency) {
  Rng g(16);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = static_cast<std::size_t>(support::uniform_int(g, 1, 2));
    const SlowSequence a(support::random_expr(g, d), d);
    const auto b = FastSequence::exp_decay(d, support::uniform(g, 0.5, 2.0));
    const auto R = support::uniform_int(g, 5, 15);
    const auto near = pairing(a, b, R);
    const auto far = pairing(a, b, R + support::uniform_int(g, 1, 20));
    ASSERT_TRUE(std::isfinite(near.tail_bound));
    EXPECT_LE(std::abs(far.value - near.value), near.tail_bound * (1 + 1e-12) + 1e-13) << trial;
  }
}

TEST(Pairing, TailTendsToZero) {
  const auto a = SlowSequence::norm1(1);
  const auto b = FastSequence::exp_decay(1, 1.0);
  double last = kInf;
  for (std::int64_t R : {5, 10, 20, 40}) {
    const double t = pairing(a, b, R).tail_bound;
    EXPECT_LT(t, last);
    last = t;
  }
  EXPECT_LT(last, 1e-10);
}

TEST(Pairing, WeakDecayGivesInfiniteTail) {
  // (1+r)^-1 only has seminorms up to order 1 < k + d + 1.
  const FastSequence b(expr::polyenv(-1), 1);
  EXPECT_EQ(pairing(SlowSequence::one(1), b, 10).tail_bound, kInf);
}

TEST(FastSequence, RejectsGrowingInput) {
  EXPECT_THROW(FastSequence(expr::norm1(), 1), InvalidInput);
  EXPECT_EQ(FastSequence::indicator({3}).support_radius(), std::optional<std::int64_t>(3));
}

TEST(WeightedSum, BoundsDirectSum) {
  const FastSequence b(expr::polyenv(-3), 1);
  // sum_n |n| (1+|n|)^-3 = 2 (zeta(2) - zeta(3)).
  const double exact = 2.0 * (std::numbers::pi * std::numbers::pi / 6.0 - 1.2020569031595942);
  const double bound = weighted_abs_sum_bound(b, 1, 50);
  EXPECT_GE(bound, exact);
  EXPECT_LE(bound, exact * 1.01);
}
