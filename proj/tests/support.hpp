#pragma once

// Random generators and brute-force oracles shared by the test programs.
// Oracles work on plain std::map data and never touch certificates.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "periodist/periodist.hpp"

namespace periodist::support {

using Rng = std::mt19937_64;

inline double uniform(Rng& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }
inline std::int64_t uniform_int(Rng& g, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(g);
}

/// A d = 1 sequence equal to `base` except at finitely many points.
struct FiniteMod {
  Complex base;
  std::map<std::int64_t, Complex> changes;

  Complex at(std::int64_t n) const {
    auto it = changes.find(n);
    return it == changes.end() ? base : it->second;
  }

  /// base + sum_p (v_p - base) [n = p]
  SlowSequence to_sequence() const {
    std::vector<Expr> terms{expr::constant(base)};
    for (const auto& [p, v] : changes)
      terms.push_back(expr::mul({expr::constant(v - base), expr::indicator({p})}));
    return {terms.size() == 1 ? terms.front() : expr::add(std::move(terms)), 1};
  }
};

inline Complex random_value(Rng& g) {
  switch (uniform_int(g, 0, 5)) {
    case 0: return 0.0;
    case 1: return 1.0;
    case 2: return {uniform(g, -2, 2), 0.0};
    case 3: return {0.0, uniform(g, -2, 2)};
    default: return {uniform(g, -2, 2), uniform(g, -2, 2)};
  }
}

inline FiniteMod random_finite_mod(Rng& g, std::int64_t spread = 8) {
  FiniteMod f{random_value(g), {}};
  const auto count = uniform_int(g, 0, 4);
  for (std::int64_t i = 0; i < count; ++i) f.changes[uniform_int(g, -spread, spread)] = random_value(g);
  return f;
}

/// First n (shells 0..R, -r before r) with sum |a_i(n)| < delta (1+|n|)^-K.
inline std::optional<std::int64_t> oracle_corona_d1(const std::vector<FiniteMod>& fam, double delta, int K,
                                                    std::int64_t R) {
  for (std::int64_t r = 0; r <= R; ++r) {
    for (std::int64_t n : {-r, r}) {
      if (r == 0 && n != 0) continue;
      double s = 0.0;
      for (const auto& f : fam) s += std::abs(f.at(n));
      if (s < delta * std::pow(1.0 + static_cast<double>(r), -K)) return n;
      if (r == 0) break;
    }
  }
  return std::nullopt;
}

/// Number of n in Z^d with |n|_1 = r, by scanning the cube [-r, r]^d.
inline std::int64_t brute_shell_count(std::size_t d, std::int64_t r) {
  std::vector<std::int64_t> n(d, -r);
  std::int64_t count = 0;
  while (true) {
    std::int64_t s = 0;
    for (auto c : n) s += c < 0 ? -c : c;
    if (s == r) ++count;
    std::size_t i = 0;
    while (i < d && n[i] == r) n[i++] = -r;
    if (i == d) break;
    ++n[i];
  }
  return count;
}

/// Leaves of the random generator; every one carries a composed certificate.
inline Expr random_leaf(Rng& g, std::size_t d) {
  switch (uniform_int(g, 0, 5)) {
    case 0: return expr::constant({uniform(g, -2, 2), uniform(g, -2, 2)});
    case 1: return expr::coord(static_cast<int>(uniform_int(g, 0, static_cast<std::int64_t>(d) - 1)));
    case 2: return expr::norm1();
    case 3: return expr::polyenv(static_cast<int>(uniform_int(g, -3, 2)));
    case 4: return expr::expdecay(uniform(g, 0.1, 2.0));
    default: {
      std::vector<std::int64_t> p(d);
      for (auto& c : p) c = uniform_int(g, -3, 3);
      return expr::indicator(std::move(p));
    }
  }
}

/// Random expression of bounded depth over add, mul, neg, conj, abs, phase.
inline Expr random_expr(Rng& g, std::size_t d, int depth = 2) {
  if (depth == 0 || uniform_int(g, 0, 2) == 0) return random_leaf(g, d);
  switch (uniform_int(g, 0, 5)) {
    case 0: return expr::add({random_expr(g, d, depth - 1), random_expr(g, d, depth - 1)});
    case 1: return expr::mul({random_expr(g, d, depth - 1), random_expr(g, d, depth - 1)});
    case 2: return expr::neg(random_expr(g, d, depth - 1));
    case 3: return expr::conj(random_expr(g, d, depth - 1));
    case 4: return expr::abs(random_expr(g, d, depth - 1));
    default: return expr::phase(random_expr(g, d, depth - 1));
  }
}

/// Element with a symbolic lower bound: nonzero constant, (1+|n|)^-k, 1+|n|,
/// or a phase times one of these.
inline Expr random_bounded_below(Rng& g) {
  Expr e;
  switch (uniform_int(g, 0, 2)) {
    case 0: {
      const double r = uniform(g, 0.2, 2.0), t = uniform(g, -3.1, 3.1);
      e = expr::constant(std::polar(r, t));
      break;
    }
    case 1: e = expr::polyenv(static_cast<int>(uniform_int(g, -3, 0))); break;
    default: e = expr::add({expr::constant(1.0), expr::norm1()}); break;
  }
  if (uniform_int(g, 0, 1) == 0) e = expr::mul({expr::phase(expr::coord(0)), e});
  return e;
}

}  // namespace periodist::support
