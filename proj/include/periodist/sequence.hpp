#pragma once

// Elements of s'(Z^d) (polynomial growth) and s(Z^d) (rapid decay), their
// pointwise ring operations, seminorms and the duality pairing with a
// certified truncation error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "periodist/bounds.hpp"
#include "periodist/errors.hpp"
#include "periodist/expr.hpp"
#include "periodist/lattice.hpp"
#include "periodist/scan.hpp"

namespace periodist {

namespace detail {

inline void check_expr_dimension(const Expr& e, std::size_t dim) {
  if (dim == 0) throw InvalidInput("dimension must be >= 1");
  if (!e) throw InvalidInput("null expression");
  if (e->max_axis() >= 0 && static_cast<std::size_t>(e->max_axis()) >= dim)
    throw InvalidInput("coord axis " + std::to_string(e->max_axis()) + " out of range for d=" +
                       std::to_string(dim));
  if (e->point_dimension() != 0 && e->point_dimension() != dim)
    throw DimensionMismatch(dim, e->point_dimension());
}

inline void check_index(std::size_t dim, const LatticeIndex& n) {
  if (n.dimension() != dim) throw DimensionMismatch(dim, n.dimension());
}

}  // namespace detail

/// An element of s'(Z^d): an expression tree with a growth certificate.
class SlowSequence {
 public:
  SlowSequence(Expr e, std::size_t dim) : expr_(std::move(e)), dim_(dim) {
    detail::check_expr_dimension(expr_, dim_);
  }

  static SlowSequence constant(std::size_t d, Complex c) { return {expr::constant(c), d}; }
  static SlowSequence zero(std::size_t d) { return constant(d, 0.0); }
  static SlowSequence one(std::size_t d) { return constant(d, 1.0); }
  static SlowSequence coordinate(std::size_t d, int axis) { return {expr::coord(axis), d}; }
  static SlowSequence norm1(std::size_t d) { return {expr::norm1(), d}; }
  static SlowSequence poly_envelope(std::size_t d, int k) { return {expr::polyenv(k), d}; }
  static SlowSequence exp_decay(std::size_t d, double rate) { return {expr::expdecay(rate), d}; }
  static SlowSequence indicator(const LatticeIndex& at) {
    return {expr::indicator(at.coords()), at.dimension()};
  }

  std::size_t dimension() const noexcept { return dim_; }
  const Expr& expr() const noexcept { return expr_; }
  const GrowthCertificate& certificate() const noexcept { return expr_->certificate(); }
  const std::optional<LowerBound>& lower_bound() const noexcept { return expr_->lower_bound(); }

  Complex operator()(const LatticeIndex& n) const {
    detail::check_index(dim_, n);
    return evaluate(*expr_, n);
  }

 private:
  Expr expr_;
  std::size_t dim_;
};

inline Complex eval(const SlowSequence& a, const LatticeIndex& n) { return a(n); }

enum class RingOp { add, mul, neg, conj, abs, phase };

/// Pointwise composition. Certificates compose syntactically:
/// add -> (sum M, max k), mul -> (prod M, sum k), neg/conj/abs keep the
/// argument's certificate, phase -> (1, 0).
inline SlowSequence combine(RingOp op, std::span<const SlowSequence> args) {
  if (args.empty()) throw InvalidInput("combine: no arguments");
  const std::size_t d = args.front().dimension();
  std::vector<Expr> exprs;
  exprs.reserve(args.size());
  for (const auto& a : args) {
    if (a.dimension() != d) throw DimensionMismatch(d, a.dimension());
    exprs.push_back(a.expr());
  }
  auto unary = [&](Expr (*f)(Expr)) {
    if (exprs.size() != 1) throw InvalidInput("combine: unary op takes exactly one argument");
    return SlowSequence(f(exprs.front()), d);
  };
  switch (op) {
    case RingOp::add: return {expr::add(std::move(exprs)), d};
    case RingOp::mul: return {expr::mul(std::move(exprs)), d};
    case RingOp::neg: return unary(expr::neg);
    case RingOp::conj: return unary(expr::conj);
    case RingOp::abs: return unary(expr::abs);
    case RingOp::phase: return unary(expr::phase);
  }
  throw InvalidInput("combine: unknown op");
}

inline SlowSequence combine(RingOp op, std::initializer_list<SlowSequence> args) {
  return combine(op, std::span<const SlowSequence>(args.begin(), args.size()));
}

inline SlowSequence operator+(const SlowSequence& a, const SlowSequence& b) { return combine(RingOp::add, {a, b}); }
inline SlowSequence operator*(const SlowSequence& a, const SlowSequence& b) { return combine(RingOp::mul, {a, b}); }
inline SlowSequence operator-(const SlowSequence& a) { return combine(RingOp::neg, {a}); }
inline SlowSequence operator-(const SlowSequence& a, const SlowSequence& b) { return a + (-b); }

inline SlowSequence abs(const SlowSequence& a) { return combine(RingOp::abs, {a}); }
inline SlowSequence conj(const SlowSequence& a) { return combine(RingOp::conj, {a}); }
inline SlowSequence phase(const SlowSequence& a) { return combine(RingOp::phase, {a}); }
inline SlowSequence principal_arg(const SlowSequence& a) { return {expr::arg(a.expr()), a.dimension()}; }

/// Reciprocal of `a`, valid wherever |a(n)| >= w.delta (1+|n|_1)^(-w.K).
inline SlowSequence reciprocal(const SlowSequence& a, LowerBound w) {
  return {expr::recip(a.expr(), w), a.dimension()};
}

/// First point of the window |n|_1 <= R (shell order) where
/// |a(n)| > M (1+|n|_1)^k, if any.
inline std::optional<LatticeIndex> certificate_violation(const SlowSequence& a,
                                                         const GrowthCertificate& c,
                                                         std::int64_t R) {
  return find_first_shell<LatticeIndex>(R, [&](std::int64_t r) {
    std::optional<LatticeIndex> bad;
    const double limit = c.bound_at(r);
    for_each_in_shell(a.dimension(), r, [&](const LatticeIndex& n) {
      if (std::abs(a(n)) > limit) {
        bad = n;
        return false;
      }
      return true;
    });
    return bad;
  });
}

/// Attaches a user-supplied certificate after checking it on the window
/// |n|_1 <= R. Throws CertificateRejected naming the first failing point.
inline SlowSequence with_certificate(const SlowSequence& a, GrowthCertificate c, std::int64_t R) {
  if (auto bad = certificate_violation(a, c, R)) throw CertificateRejected(*bad);
  return {expr::declare(a.expr(), c), a.dimension()};
}

/// Re-checks every declared certificate inside `e` on the window.
inline void verify_declared_certificates(const Expr& e, std::size_t d, std::int64_t R) {
  if (!e) return;
  for (const auto& c : e->args()) verify_declared_certificates(c, d, R);
  if (const auto& decl = e->declared()) {
    SlowSequence s(e, d);
    if (auto bad = certificate_violation(s, *decl, R)) throw CertificateRejected(*bad);
  }
}

/// An element of s(Z^d): an expression tree with syntactic decay bounds.
///
/// Sequences with finitely many finite seminorm bounds (e.g. (1+|n|_1)^-3)
/// are accepted; quantities needing a higher order come out as +inf.
class FastSequence {
 public:
  FastSequence(Expr e, std::size_t dim)
      : expr_(checked(std::move(e), dim)), dim_(dim), profile_(expr_) {
    if (!std::isfinite(profile_[0]))
      throw InvalidInput("fast sequence: expression is not syntactically bounded");
  }

  static FastSequence indicator(const LatticeIndex& at) {
    return {expr::indicator(at.coords()), at.dimension()};
  }
  static FastSequence zero(std::size_t d) { return {expr::constant(0.0), d}; }
  static FastSequence exp_decay(std::size_t d, double rate) { return {expr::expdecay(rate), d}; }

  std::size_t dimension() const noexcept { return dim_; }
  const Expr& expr() const noexcept { return expr_; }

  /// Proven upper bound on p_k = sup_n (1+|n|_1)^k |b(n)|.
  double seminorm_bound(int k) const { return profile_[k]; }
  /// Largest order with a finite seminorm bound.
  int decay_order() const { return profile_.order(); }
  const std::optional<std::int64_t>& support_radius() const noexcept { return expr_->support_radius(); }

  Complex operator()(const LatticeIndex& n) const {
    detail::check_index(dim_, n);
    return evaluate(*expr_, n);
  }

  SlowSequence as_slow() const { return {expr_, dim_}; }

 private:
  static Expr checked(Expr e, std::size_t dim) {
    detail::check_expr_dimension(e, dim);
    return e;
  }

  Expr expr_;
  std::size_t dim_;
  DecayProfile profile_;
};

inline Complex eval(const FastSequence& b, const LatticeIndex& n) { return b(n); }

struct SeminormReport {
  double sup_on_window = 0.0;
  double certified_bound = 0.0;
};

/// p_k over the window |n|_1 <= R, and a bound valid for the whole lattice.
/// Beyond the window (1+r)^k |b| <= p_{k+j}(b) / (R+2)^j for any j >= 1.
inline SeminormReport seminorm(const FastSequence& b, int k, std::int64_t R) {
  if (k < 0) throw InvalidInput("seminorm: order must be >= 0");
  if (R < 0) throw InvalidInput("seminorm: window must be >= 0");
  auto per_shell = map_shells<double>(R, [&](std::int64_t r) {
    double m = 0.0;
    const double w = poly_weight(r, k);
    for_each_in_shell(b.dimension(), r, [&](const LatticeIndex& n) { m = std::max(m, w * std::abs(b(n))); });
    return m;
  });
  SeminormReport out;
  for (double m : per_shell) out.sup_on_window = std::max(out.sup_on_window, m);

  double tail = kInf;
  if (const auto& s = b.support_radius(); s && *s <= R) {
    tail = 0.0;
  } else {
    tail = b.seminorm_bound(k);
    for (int j = 1; k + j <= kMaxDecayOrder; ++j) {
      const double p = b.seminorm_bound(k + j);
      if (std::isfinite(p)) tail = std::min(tail, round_up(p / poly_weight(R + 1, j)));
    }
  }
  out.certified_bound = std::max(round_up(out.sup_on_window), tail);
  return out;
}

struct PairingResult {
  Complex value{};
  std::int64_t truncation_radius = 0;
  double tail_bound = 0.0;
};

/// Bound on sum_{|n|_1 > R} |a(n) b(n)| given |a| <= M (1+r)^k.
///
/// With |b| <= p_{k+d+j} (1+r)^-(k+d+j) and the shell count bound
/// 2^d (1+r)^(d-1), shell r contributes at most 2^d M p (1+r)^-(1+j), and
/// sum_{r>R} (1+r)^-(1+j) <= (R+1)^-j / j. The best j in 1..kMaxDecayOrder
/// is used; +inf if b has too little decay.
inline double pairing_tail_bound(const GrowthCertificate& a_cert, const FastSequence& b, std::int64_t R) {
  if (const auto& s = b.support_radius(); s && *s <= R) return 0.0;
  if (a_cert.M == 0.0) return 0.0;
  const auto d = static_cast<int>(b.dimension());
  const double shells = shell_count_bound(b.dimension(), 0);  // 2^d
  double best = kInf;
  for (int j = 1; a_cert.k + d + j <= kMaxDecayOrder; ++j) {
    const double p = b.seminorm_bound(a_cert.k + d + j);
    if (!std::isfinite(p)) continue;
    const double t = shells * a_cert.M * p / (static_cast<double>(j) * poly_weight(R, j));
    best = std::min(best, round_up(t));
  }
  return best;
}

/// <a, b> truncated to |n|_1 <= R, with a certified bound on the remainder.
inline PairingResult pairing(const SlowSequence& a, const FastSequence& b, std::int64_t R) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch(a.dimension(), b.dimension());
  if (R < 0) throw InvalidInput("pairing: truncation radius must be >= 0");
  auto per_shell = map_shells<Complex>(R, [&](std::int64_t r) {
    Complex s{};
    for_each_in_shell(a.dimension(), r, [&](const LatticeIndex& n) { s += a(n) * b(n); });
    return s;
  });
  PairingResult out;
  for (const auto& s : per_shell) out.value += s;
  out.truncation_radius = R;
  out.tail_bound = pairing_tail_bound(a.certificate(), b, R);
  return out;
}

/// Certified upper bound on sum_n |b(n)| (|n|_1)^moment over all of Z^d.
inline double weighted_abs_sum_bound(const FastSequence& b, int moment, std::int64_t R) {
  if (moment < 0) throw InvalidInput("moment must be >= 0");
  struct Partial {
    double sum = 0.0;
    std::size_t terms = 0;
  };
  auto per_shell = map_shells<Partial>(R, [&](std::int64_t r) {
    Partial p;
    const double w = std::pow(static_cast<double>(r), moment);
    for_each_in_shell(b.dimension(), r, [&](const LatticeIndex& n) {
      p.sum += w * std::abs(b(n));
      ++p.terms;
    });
    return p;
  });
  double window = 0.0;
  std::size_t terms = 0;
  for (const auto& p : per_shell) {
    window += p.sum;
    terms += p.terms;
  }
  const GrowthCertificate weight{1.0, moment};
  return round_up(round_up_sum(window, terms) + pairing_tail_bound(weight, b, R));
}

}  // namespace periodist
