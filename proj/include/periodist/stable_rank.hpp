#pragma once

// Stable rank constructions in s'(Z^d).
//
// reduce_pair: given b1 a1 + b2 a2 = 1, builds h with a1 + h a2 invertible
//   u1 = 1 + |a1|,  A1 = a1 / u1,  B1 = b1 u1,  B1~ = clip(B1, eps),
//   h = B1~^-1 u1 b2,
// and a1 + h a2 = B1~^-1 u1 (1 + (B1~ - B1) A1) with |1 + (B1~ - B1) A1| >= 1 - 2 eps.
//
// clip_below / approx_by_invertibles: the net a_eps of invertibles
// converging weak-* to a, with |<a_eps - a, b>| <= 2 eps sum |b|.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "periodist/bounds.hpp"
#include "periodist/corona.hpp"
#include "periodist/errors.hpp"
#include "periodist/sequence.hpp"

namespace periodist {

inline constexpr double kDefaultClipEpsilon = 0.25;

/// eps where |a(n)| <= eps, a(n) elsewhere. Bounded below by eps, so it is a
/// unit with witness (eps, 0); certificate (max(M, eps), k).
inline SlowSequence clip_below(const SlowSequence& a, double epsilon) {
  if (!(epsilon > 0.0) || std::isinf(epsilon)) throw InvalidInput("clip: epsilon must be finite and > 0");
  return {expr::clip(a.expr(), epsilon), a.dimension()};
}

inline CoronaWitness clip_witness(double epsilon) {
  return {epsilon, 0, WitnessStatus::certified, 0};
}

struct Invertible {
  SlowSequence value;
  CoronaWitness witness;
};

inline std::vector<Invertible> approx_by_invertibles(const SlowSequence& a, std::span<const double> epsilons) {
  std::vector<Invertible> out;
  out.reserve(epsilons.size());
  for (double eps : epsilons) out.push_back({clip_below(a, eps), clip_witness(eps)});
  return out;
}

struct ReductionTrace {
  SlowSequence u1;
  SlowSequence A1;
  SlowSequence B1;
  SlowSequence B1tilde;
  SlowSequence h;
  double epsilon;
  /// 1 + (B1~ - B1) A1, bounded below by 1 - 2 eps.
  SlowSequence correction;
  double correction_floor;
  /// a1 + h a2.
  SlowSequence result;
  /// Witnesses of the three factors of result = B1~^-1 * u1 * correction.
  LowerBound inv_B1tilde_bound;
  LowerBound u1_bound;
  LowerBound correction_bound;
  CoronaWitness result_witness;
  /// Bezout residual of the inputs on the verification window.
  double input_residual;
};

/// Reduces the unimodular pair (a1, a2) with cofactors (b1, b2). The Bezout
/// identity is checked on |n|_1 <= R first; eps must lie in (0, 1/2).
inline ReductionTrace reduce_pair(const SlowSequence& a1, const SlowSequence& a2, const SlowSequence& b1,
                                  const SlowSequence& b2, double epsilon = kDefaultClipEpsilon,
                                  std::int64_t R = 50, double tolerance = kBezoutTolerance) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw InvalidInput("reduce: epsilon must lie in (0, 1/2)");
  const SlowSequence a[] = {a1, a2};
  const SlowSequence b[] = {b1, b2};
  const double residual = verify_bezout(a, b, R);
  if (!(residual <= tolerance)) throw BezoutRejected(residual);

  const std::size_t d = a1.dimension();
  const SlowSequence one = SlowSequence::one(d);
  const SlowSequence u1 = one + abs(a1);
  // u1 >= 1 everywhere.
  const LowerBound u1_bound{1.0, 0};
  const SlowSequence A1 = a1 * reciprocal(u1, u1_bound);
  const SlowSequence B1 = b1 * u1;
  const SlowSequence B1t = clip_below(B1, epsilon);
  const SlowSequence inv_B1t = reciprocal(B1t, {epsilon, 0});
  const SlowSequence h = combine(RingOp::mul, {inv_B1t, u1, b2});
  const SlowSequence correction = one + (B1t - B1) * A1;
  const SlowSequence result = a1 + h * a2;

  const double floor = 1.0 - 2.0 * epsilon;
  const auto& c = B1t.certificate();
  const LowerBound inv_bound{round_down(1.0 / c.M), c.k};
  const LowerBound corr_bound{round_down(floor), 0};
  const LowerBound total = lower_product(lower_product(inv_bound, u1_bound), corr_bound);

  return ReductionTrace{
      .u1 = u1,
      .A1 = A1,
      .B1 = B1,
      .B1tilde = B1t,
      .h = h,
      .epsilon = epsilon,
      .correction = correction,
      .correction_floor = floor,
      .result = result,
      .inv_B1tilde_bound = inv_bound,
      .u1_bound = u1_bound,
      .correction_bound = corr_bound,
      .result_witness = {total.delta, total.K, WitnessStatus::window_verified, R},
      .input_residual = residual,
  };
}

struct TupleReduction {
  /// h_i with (a_i + h_i a_last) unimodular; only h_0 is nonzero.
  std::vector<SlowSequence> h;
  std::vector<SlowSequence> reduced;
  std::vector<SlowSequence> cofactors;
  ReductionTrace pair_trace;
};

/// Shortens a unimodular tuple (a_0, ..., a_N), N >= 1, by one entry.
///
/// With x = sum_{i>=1} b_i a_i the pair (a_0, x) has cofactors (b_0, 1);
/// reducing it gives t with u = a_0 + t x a unit. Then
/// (a_0 + t b_N a_N, a_1, ..., a_{N-1}) has cofactors
/// (u^-1, u^-1 t b_1, ..., u^-1 t b_{N-1}).
inline TupleReduction reduce_tuple(std::span<const SlowSequence> a, std::span<const SlowSequence> b,
                                   double epsilon = kDefaultClipEpsilon, std::int64_t R = 50,
                                   double tolerance = kBezoutTolerance) {
  if (a.size() < 2) throw InvalidInput("reduce: tuple needs at least two entries");
  if (a.size() != b.size()) throw InvalidInput("reduce: tuple and cofactors differ in length");
  const std::size_t d = detail::family_dimension(a);
  const std::size_t last = a.size() - 1;

  std::vector<SlowSequence> tail_terms;
  for (std::size_t i = 1; i < a.size(); ++i) tail_terms.push_back(b[i] * a[i]);
  const SlowSequence x = combine(RingOp::add, tail_terms);

  ReductionTrace trace = reduce_pair(a[0], x, b[0], SlowSequence::one(d), epsilon, R, tolerance);
  auto unit = is_unit(trace.result, trace.result_witness, R);
  if (!unit.invertible) throw WitnessViolation(*unit.violation);
  const SlowSequence& u_inv = *unit.inverse;
  const SlowSequence& t = trace.h;

  TupleReduction out{.h = {}, .reduced = {}, .cofactors = {}, .pair_trace = trace};
  for (std::size_t i = 0; i < last; ++i)
    out.h.push_back(i == 0 ? t * b[last] : SlowSequence::zero(d));
  out.reduced.push_back(a[0] + out.h[0] * a[last]);
  out.cofactors.push_back(u_inv);
  for (std::size_t i = 1; i < last; ++i) {
    out.reduced.push_back(a[i]);
    out.cofactors.push_back(combine(RingOp::mul, {u_inv, t, b[i]}));
  }
  return out;
}

struct GapReport {
  /// |sum_{|n|_1 <= R} (x - y)(n) b(n)|.
  double gap = 0.0;
  /// sup of |x - y| over the window times the certified bound on sum |b|.
  double bound = 0.0;
  double sup_difference = 0.0;
  double abs_sum_b = 0.0;
  /// Certified bound on the part of <x - y, b> outside the window.
  double tail_bound = 0.0;
};

inline GapReport weak_star_gap(const SlowSequence& x, const SlowSequence& y, const FastSequence& b,
                               std::int64_t R) {
  if (x.dimension() != y.dimension()) throw DimensionMismatch(x.dimension(), y.dimension());
  if (x.dimension() != b.dimension()) throw DimensionMismatch(x.dimension(), b.dimension());
  const SlowSequence diff = x - y;
  const PairingResult p = pairing(diff, b, R);
  auto sups = map_shells<double>(R, [&](std::int64_t r) {
    double m = 0.0;
    for_each_in_shell(x.dimension(), r, [&](const LatticeIndex& n) { m = std::max(m, std::abs(diff(n))); });
    return m;
  });
  GapReport out;
  out.gap = std::abs(p.value);
  for (double m : sups) out.sup_difference = std::max(out.sup_difference, m);
  out.abs_sum_b = weighted_abs_sum_bound(b, 0, R);
  out.bound = round_up(out.sup_difference * out.abs_sum_b);
  out.tail_bound = p.tail_bound;
  return out;
}

/// Smallest shell r <= n_max on which exp(-rate r) < delta (1+r)^(-K),
/// reported as (r, 0, ..., 0); nullopt if none. Shows that exp(-rate |n|_1)
/// admits no polynomial lower bound, i.e. is not a unit.
inline std::optional<LatticeIndex> q_algebra_violation(double rate, double delta, int K, std::int64_t n_max,
                                                       std::size_t d = 1) {
  if (!(rate > 0.0)) throw InvalidInput("rate must be > 0");
  if (!(delta > 0.0)) throw InvalidInput("delta must be > 0");
  if (K < 0) throw InvalidInput("K must be >= 0");
  if (d == 0) throw InvalidInput("dimension must be >= 1");
  const LowerBound w{delta, K};
  for (std::int64_t r = 0; r <= n_max; ++r)
    if (std::exp(-rate * static_cast<double>(r)) < w.floor_at(r)) return shell_representative(d, r);
  return std::nullopt;
}

/// K' = certified bound on sum_n |n|_1 |b(n)|. Since 0 <= 1 - e^(-x) <= x,
/// |<exp(-eps|n|_1) - 1, b>| <= eps K'.
inline double exp_net_constant(const FastSequence& b, std::int64_t R) { return weighted_abs_sum_bound(b, 1, R); }

}  // namespace periodist
