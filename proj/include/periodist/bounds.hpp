#pragma once

// Certificate arithmetic. Upper bounds are nudged toward +inf and lower
// bounds toward 0 after every floating operation so they survive rounding.

#include <cfloat>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace periodist {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Rounds a computed nonnegative upper bound outward (covers a few ulps of
/// accumulated error, e.g. from std::pow).
inline double round_up(double x) {
  if (std::isnan(x)) return kInf;
  if (x == 0.0 || std::isinf(x)) return x;
  return std::nextafter(x + std::fabs(x) * 4.0 * DBL_EPSILON, kInf);
}

/// Rounds a computed positive lower bound toward zero.
inline double round_down(double x) {
  if (std::isnan(x) || x <= 0.0) return 0.0;
  if (std::isinf(x)) return std::numeric_limits<double>::max();
  return std::nextafter(x - x * 4.0 * DBL_EPSILON, 0.0);
}

/// Upper bound for a sum of `terms` nonnegative doubles accumulated in
/// round-to-nearest.
inline double round_up_sum(double sum, std::size_t terms) {
  return round_up(sum * (1.0 + static_cast<double>(terms + 1) * DBL_EPSILON));
}

/// (1+r)^k for nonnegative r.
inline double poly_weight(std::int64_t r, int k) {
  return std::pow(1.0 + static_cast<double>(r), k);
}

/// Claim |a(n)| <= M (1+|n|_1)^k for all n.
struct GrowthCertificate {
  double M = 0.0;
  int k = 0;

  double bound_at(std::int64_t r) const { return M * poly_weight(r, k); }

  friend bool operator==(const GrowthCertificate&, const GrowthCertificate&) = default;
};

inline GrowthCertificate cert_sum(const GrowthCertificate& a, const GrowthCertificate& b) {
  return {round_up(a.M + b.M), a.k > b.k ? a.k : b.k};
}

inline GrowthCertificate cert_product(const GrowthCertificate& a, const GrowthCertificate& b) {
  return {round_up(a.M * b.M), a.k + b.k};
}

/// Claim |a(n)| >= delta (1+|n|_1)^(-K) for all n.
struct LowerBound {
  double delta = 0.0;
  int K = 0;

  /// The threshold delta (1+r)^(-K). Every comparison against a witness
  /// goes through here so that the scan and the reciprocal node agree.
  double floor_at(std::int64_t r) const { return delta * poly_weight(r, -K); }

  /// True if this bound implies `other` (delta >= other.delta, K <= other.K).
  bool implies(const LowerBound& other) const { return delta >= other.delta && K <= other.K; }

  friend bool operator==(const LowerBound&, const LowerBound&) = default;
};

inline LowerBound lower_product(const LowerBound& a, const LowerBound& b) {
  return {round_down(a.delta * b.delta), a.K + b.K};
}

}  // namespace periodist
