#pragma once

// Corona-type condition sum_i |a_i(n)| >= delta (1+|n|_1)^(-K) and the
// explicit Bezout cofactors it yields:
//
//   b_i(n) = e^(-i Arg a_i(n)) / (|a_1(n)| + ... + |a_N(n)|).
//
// The condition quantifies over all of Z^d. A witness is "certified" when a
// syntactic lower bound (constants, polyenv, clip, reciprocals, products and
// nonnegative sums of those) proves it everywhere; otherwise it is only
// window-verified and carries the radius it was checked on.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "periodist/bounds.hpp"
#include "periodist/errors.hpp"
#include "periodist/lattice.hpp"
#include "periodist/scan.hpp"
#include "periodist/sequence.hpp"

namespace periodist {

/// Default tolerance for |sum b_i a_i - 1| in double precision.
inline constexpr double kBezoutTolerance = 1e-12;

enum class WitnessStatus { window_verified, certified };

struct CoronaWitness {
  double delta = 0.0;
  int K = 0;
  WitnessStatus status = WitnessStatus::window_verified;
  /// Radius of the window the witness was checked on.
  std::int64_t radius = 0;

  LowerBound bound() const { return {delta, K}; }
  bool certified() const { return status == WitnessStatus::certified; }
};

struct CoronaCheck {
  bool holds = true;
  std::optional<LatticeIndex> first_violation;
};

namespace detail {

inline std::size_t family_dimension(std::span<const SlowSequence> family) {
  if (family.empty()) throw InvalidInput("empty family");
  const std::size_t d = family.front().dimension();
  for (const auto& a : family)
    if (a.dimension() != d) throw DimensionMismatch(d, a.dimension());
  return d;
}

inline void check_witness_params(double delta, int K) {
  if (!(delta > 0.0) || std::isinf(delta)) throw InvalidInput("delta must be finite and > 0");
  if (K < 0) throw InvalidInput("K must be >= 0");
}

}  // namespace detail

/// sum_i |a_i|, the denominator of the cofactors.
inline SlowSequence abs_sum(std::span<const SlowSequence> family) {
  const std::size_t d = detail::family_dimension(family);
  std::vector<Expr> terms;
  terms.reserve(family.size());
  for (const auto& a : family) terms.push_back(expr::abs(a.expr()));
  return {expr::add(std::move(terms)), d};
}

/// Exhaustive check of the corona inequality on |n|_1 <= R. The reported
/// violation is the first one in shell order.
inline CoronaCheck check_corona_window(std::span<const SlowSequence> family, double delta, int K,
                                       std::int64_t R) {
  detail::check_witness_params(delta, K);
  if (R < 0) throw InvalidInput("window radius must be >= 0");
  const SlowSequence total = abs_sum(family);
  const LowerBound w{delta, K};
  auto bad = find_first_shell<LatticeIndex>(R, [&](std::int64_t r) {
    std::optional<LatticeIndex> found;
    const double floor = w.floor_at(r);
    for_each_in_shell(total.dimension(), r, [&](const LatticeIndex& n) {
      if (std::abs(total(n)) < floor) {
        found = n;
        return false;
      }
      return true;
    });
    return found;
  });
  return {!bad.has_value(), std::move(bad)};
}

/// True if the syntactic lower bound of some a_i implies (delta, K).
inline bool corona_certified(std::span<const SlowSequence> family, double delta, int K) {
  detail::check_witness_params(delta, K);
  const LowerBound want{delta, K};
  return std::ranges::any_of(family, [&](const SlowSequence& a) {
    return a.lower_bound() && a.lower_bound()->implies(want);
  });
}

/// Checks (delta, K) on the window and returns the witness, certified when
/// the syntactic analysis proves it globally. nullopt if the window check
/// fails.
inline std::optional<CoronaWitness> make_witness(std::span<const SlowSequence> family, double delta,
                                                 int K, std::int64_t R) {
  if (!check_corona_window(family, delta, K, R).holds) return std::nullopt;
  CoronaWitness w{delta, K, WitnessStatus::window_verified, R};
  if (corona_certified(family, delta, K)) w.status = WitnessStatus::certified;
  return w;
}

struct BezoutSolution {
  std::vector<SlowSequence> cofactors;
};

/// Cofactors b_i = phase(a_i) * recip(sum_j |a_j|, witness). Each carries
/// the certificate (1/delta, K). Evaluating a cofactor where the witness
/// fails throws WitnessViolation naming the point.
inline BezoutSolution solve_bezout(std::span<const SlowSequence> family, const CoronaWitness& w) {
  detail::check_witness_params(w.delta, w.K);
  const SlowSequence inv_total = reciprocal(abs_sum(family), w.bound());
  BezoutSolution out;
  out.cofactors.reserve(family.size());
  for (const auto& a : family) out.cofactors.push_back(phase(a) * inv_total);
  return out;
}

/// max over |n|_1 = r of |sum b_i(n) a_i(n) - 1|, for r = 0..R.
inline std::vector<double> bezout_residual_by_shell(std::span<const SlowSequence> a,
                                                    std::span<const SlowSequence> b, std::int64_t R) {
  if (a.size() != b.size()) throw InvalidInput("family and cofactors differ in length");
  const std::size_t d = detail::family_dimension(a);
  if (detail::family_dimension(b) != d) throw DimensionMismatch(d, b.front().dimension());
  if (R < 0) throw InvalidInput("window radius must be >= 0");
  return map_shells<double>(R, [&](std::int64_t r) {
    double worst = 0.0;
    for_each_in_shell(d, r, [&](const LatticeIndex& n) {
      Complex s{};
      for (std::size_t i = 0; i < a.size(); ++i) s += b[i](n) * a[i](n);
      worst = std::max(worst, std::abs(s - 1.0));
    });
    return worst;
  });
}

inline double verify_bezout(std::span<const SlowSequence> a, std::span<const SlowSequence> b,
                            std::int64_t R) {
  const auto shells = bezout_residual_by_shell(a, b, R);
  return shells.empty() ? 0.0 : *std::ranges::max_element(shells);
}

/// Necessity direction: |b_i| <= M (1+|n|_1)^K and sum b_i a_i = 1 give
/// 1 <= M (1+|n|_1)^K sum |a_i|, i.e. the witness (1/M, K) with M, K the
/// largest cofactor certificate constants.
inline CoronaWitness witness_from_bezout(std::span<const SlowSequence> cofactors) {
  if (cofactors.empty()) throw InvalidInput("no cofactors");
  double M = 0.0;
  int K = 0;
  for (const auto& b : cofactors) {
    M = std::max(M, b.certificate().M);
    K = std::max(K, b.certificate().k);
  }
  if (!(M > 0.0) || std::isinf(M))
    throw InvalidInput("cofactor certificates give no usable bound (max M = " + std::to_string(M) + ")");
  return {round_down(1.0 / M), K, WitnessStatus::window_verified, 0};
}

struct UnitCheck {
  bool invertible = false;
  std::optional<SlowSequence> inverse;
  std::optional<LatticeIndex> violation;
};

/// Single-element corona: a is a unit iff |a| >= delta (1+|n|_1)^(-K).
/// The inverse is phase(a) * recip(|a|, w), certificate (1/delta, K).
inline UnitCheck is_unit(const SlowSequence& a, const CoronaWitness& w, std::int64_t R = 50) {
  const std::span<const SlowSequence> family(&a, 1);
  auto check = check_corona_window(family, w.delta, w.K, R);
  if (!check.holds) return {false, std::nullopt, std::move(check.first_violation)};
  return {true, phase(a) * reciprocal(abs(a), w.bound()), std::nullopt};
}

}  // namespace periodist
