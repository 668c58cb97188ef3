#pragma once

// Closed-form expression trees over the lattice index.
//
// Nodes are immutable and shared. Each node caches the facts that can be
// read off syntactically when it is built: a growth certificate, an optional
// polynomial lower bound on |e(n)|, an optional finite support radius and
// whether the node is real and nonnegative. Decay bounds (sup of
// (1+|n|_1)^k |e(n)|) are derived on demand by decay_profile().

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "periodist/bounds.hpp"
#include "periodist/errors.hpp"
#include "periodist/lattice.hpp"

namespace periodist {

using Complex = std::complex<double>;

enum class NodeKind {
  constant,
  coord,
  norm1,
  polyenv,
  expdecay,
  indicator,
  add,
  mul,
  neg,
  conj,
  abs,
  arg,
  phase,
  clip,
  recip,
};

inline std::string_view kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::constant: return "const";
    case NodeKind::coord: return "coord";
    case NodeKind::norm1: return "norm1";
    case NodeKind::polyenv: return "polyenv";
    case NodeKind::expdecay: return "expdecay";
    case NodeKind::indicator: return "indicator";
    case NodeKind::add: return "add";
    case NodeKind::mul: return "mul";
    case NodeKind::neg: return "neg";
    case NodeKind::conj: return "conj";
    case NodeKind::abs: return "abs";
    case NodeKind::arg: return "arg";
    case NodeKind::phase: return "phase";
    case NodeKind::clip: return "clip";
    case NodeKind::recip: return "recip";
  }
  return "?";
}

class Node;
using Expr = std::shared_ptr<const Node>;

class Node {
 public:
  NodeKind kind() const noexcept { return kind_; }
  const std::vector<Expr>& args() const noexcept { return args_; }
  const Expr& arg() const { return args_.front(); }

  /// const payload.
  Complex value() const noexcept { return value_; }
  /// coord axis or polyenv exponent.
  int int_param() const noexcept { return int_param_; }
  /// expdecay rate or clip threshold.
  double real_param() const noexcept { return real_param_; }
  /// indicator point.
  const std::vector<std::int64_t>& point() const noexcept { return point_; }
  /// recip witness.
  const LowerBound& witness() const noexcept { return witness_; }

  /// User-declared certificate, if any (replaces the composed one).
  const std::optional<GrowthCertificate>& declared() const noexcept { return declared_; }

  const GrowthCertificate& certificate() const noexcept { return cert_; }
  const std::optional<LowerBound>& lower_bound() const noexcept { return lower_; }
  /// e(n) = 0 whenever |n|_1 > radius.
  const std::optional<std::int64_t>& support_radius() const noexcept { return support_; }
  bool nonneg_real() const noexcept { return nonneg_real_; }
  /// Largest coord axis referenced below this node, -1 if none.
  int max_axis() const noexcept { return max_axis_; }
  /// Dimension fixed by indicator points below this node, 0 if none.
  std::size_t point_dimension() const noexcept { return point_dim_; }

 private:
  friend struct NodeBuilder;

  NodeKind kind_ = NodeKind::constant;
  std::vector<Expr> args_;
  Complex value_{};
  int int_param_ = 0;
  double real_param_ = 0.0;
  std::vector<std::int64_t> point_;
  LowerBound witness_{};
  std::optional<GrowthCertificate> declared_;

  GrowthCertificate cert_{};
  std::optional<LowerBound> lower_;
  std::optional<std::int64_t> support_;
  bool nonneg_real_ = false;
  int max_axis_ = -1;
  std::size_t point_dim_ = 0;
};

struct NodeBuilder {
  static Expr finish(std::shared_ptr<Node> n) {
    analyse(*n);
    return n;
  }

  static std::shared_ptr<Node> make(NodeKind k, std::vector<Expr> args = {}) {
    auto n = std::make_shared<Node>();
    n->kind_ = k;
    for (const auto& a : args)
      if (!a) throw InvalidInput(std::string(kind_name(k)) + ": null argument");
    n->args_ = std::move(args);
    return n;
  }

  static Expr with_declared(const Expr& e, GrowthCertificate c) {
    if (!(c.M >= 0.0) || std::isinf(c.M) || c.k < 0)
      throw InvalidInput("declared certificate needs finite M >= 0 and k >= 0");
    auto n = std::make_shared<Node>(*e);
    n->declared_ = c;
    return finish(n);
  }

  static void set_value(Node& n, Complex v) { n.value_ = v; }
  static void set_int(Node& n, int v) { n.int_param_ = v; }
  static void set_real(Node& n, double v) { n.real_param_ = v; }
  static void set_point(Node& n, std::vector<std::int64_t> p) { n.point_ = std::move(p); }
  static void set_witness(Node& n, LowerBound w) { n.witness_ = w; }

 private:
  static void analyse(Node& n) {
    const auto& a = n.args_;
    n.lower_.reset();
    n.support_.reset();
    n.nonneg_real_ = false;
    n.max_axis_ = -1;
    n.point_dim_ = 0;
    for (const auto& c : a) {
      n.max_axis_ = std::max(n.max_axis_, c->max_axis_);
      if (c->point_dim_ != 0) {
        if (n.point_dim_ != 0 && n.point_dim_ != c->point_dim_)
          throw DimensionMismatch(n.point_dim_, c->point_dim_);
        n.point_dim_ = c->point_dim_;
      }
    }
    switch (n.kind_) {
      case NodeKind::constant: {
        const double m = std::abs(n.value_);
        // |c| is exact when c lies on an axis.
        const bool exact = n.value_.real() == 0.0 || n.value_.imag() == 0.0;
        n.cert_ = {exact ? m : round_up(m), 0};
        if (m > 0.0) n.lower_ = LowerBound{exact ? m : round_down(m), 0};
        if (m == 0.0) n.support_ = 0;
        n.nonneg_real_ = n.value_.imag() == 0.0 && n.value_.real() >= 0.0;
        break;
      }
      case NodeKind::coord:
        n.max_axis_ = std::max(n.max_axis_, n.int_param_);
        n.cert_ = {1.0, 1};
        break;
      case NodeKind::norm1:
        n.cert_ = {1.0, 1};
        n.nonneg_real_ = true;
        break;
      case NodeKind::polyenv:
        n.cert_ = {1.0, std::max(0, n.int_param_)};
        n.lower_ = LowerBound{1.0, std::max(0, -n.int_param_)};
        n.nonneg_real_ = true;
        break;
      case NodeKind::expdecay:
        n.cert_ = {1.0, 0};
        n.nonneg_real_ = true;
        break;
      case NodeKind::indicator: {
        n.cert_ = {1.0, 0};
        n.point_dim_ = n.point_.size();
        std::int64_t r = 0;
        for (auto c : n.point_) r += c < 0 ? -c : c;
        n.support_ = r;
        n.nonneg_real_ = true;
        break;
      }
      case NodeKind::add: {
        n.cert_ = {0.0, 0};
        bool all_supported = true, all_nonneg = true;
        std::int64_t radius = 0;
        for (const auto& c : a) {
          n.cert_ = cert_sum(n.cert_, c->cert_);
          all_nonneg = all_nonneg && c->nonneg_real_;
          if (c->support_)
            radius = std::max(radius, *c->support_);
          else
            all_supported = false;
        }
        if (all_supported) n.support_ = radius;
        n.nonneg_real_ = all_nonneg;
        // A sum of nonnegative reals is at least each summand.
        if (all_nonneg) {
          for (const auto& c : a) {
            if (!c->lower_) continue;
            const auto& lb = *c->lower_;
            if (!n.lower_ || lb.K < n.lower_->K ||
                (lb.K == n.lower_->K && lb.delta > n.lower_->delta))
              n.lower_ = lb;
          }
        }
        break;
      }
      case NodeKind::mul: {
        n.cert_ = {1.0, 0};
        bool all_lower = true, all_nonneg = true;
        LowerBound lb{1.0, 0};
        for (const auto& c : a) {
          n.cert_ = cert_product(n.cert_, c->cert_);
          all_nonneg = all_nonneg && c->nonneg_real_;
          if (c->lower_)
            lb = lower_product(lb, *c->lower_);
          else
            all_lower = false;
          if (c->support_ && (!n.support_ || *c->support_ < *n.support_)) n.support_ = c->support_;
        }
        if (all_lower) n.lower_ = lb;
        n.nonneg_real_ = all_nonneg;
        break;
      }
      case NodeKind::neg:
      case NodeKind::conj:
        n.cert_ = a[0]->cert_;
        n.lower_ = a[0]->lower_;
        n.support_ = a[0]->support_;
        n.nonneg_real_ = n.kind_ == NodeKind::conj && a[0]->nonneg_real_;
        break;
      case NodeKind::abs:
        n.cert_ = a[0]->cert_;
        n.lower_ = a[0]->lower_;
        n.support_ = a[0]->support_;
        n.nonneg_real_ = true;
        break;
      case NodeKind::arg:
        n.cert_ = {round_up(std::numbers::pi), 0};
        n.support_ = a[0]->support_;
        break;
      case NodeKind::phase:
        n.cert_ = {1.0, 0};
        n.lower_ = LowerBound{1.0, 0};
        break;
      case NodeKind::clip:
        n.cert_ = {std::max(a[0]->cert_.M, n.real_param_), a[0]->cert_.k};
        n.lower_ = LowerBound{n.real_param_, 0};
        n.nonneg_real_ = a[0]->nonneg_real_;
        break;
      case NodeKind::recip: {
        n.cert_ = {round_up(1.0 / n.witness_.delta), n.witness_.K};
        const auto& c = a[0]->cert_;
        if (c.M > 0.0 && !std::isinf(c.M)) n.lower_ = LowerBound{round_down(1.0 / c.M), c.k};
        n.nonneg_real_ = a[0]->nonneg_real_;
        break;
      }
    }
    if (n.declared_) n.cert_ = *n.declared_;
  }
};

/// Builders. All validate their parameters and throw InvalidInput.
namespace expr {

inline Expr constant(Complex c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw InvalidInput("const: value must be finite");
  auto n = NodeBuilder::make(NodeKind::constant);
  NodeBuilder::set_value(*n, c);
  return NodeBuilder::finish(n);
}

inline Expr coord(int axis) {
  if (axis < 0) throw InvalidInput("coord: axis must be >= 0");
  auto n = NodeBuilder::make(NodeKind::coord);
  NodeBuilder::set_int(*n, axis);
  return NodeBuilder::finish(n);
}

inline Expr norm1() { return NodeBuilder::finish(NodeBuilder::make(NodeKind::norm1)); }

/// (1+|n|_1)^k; negative k is allowed and gives a decaying envelope.
inline Expr polyenv(int k) {
  auto n = NodeBuilder::make(NodeKind::polyenv);
  NodeBuilder::set_int(*n, k);
  return NodeBuilder::finish(n);
}

/// exp(-rate |n|_1), rate >= 0.
inline Expr expdecay(double rate) {
  if (!(rate >= 0.0) || std::isinf(rate)) throw InvalidInput("expdecay: rate must be finite and >= 0");
  auto n = NodeBuilder::make(NodeKind::expdecay);
  NodeBuilder::set_real(*n, rate);
  return NodeBuilder::finish(n);
}

/// 1 at `at`, 0 elsewhere.
inline Expr indicator(std::vector<std::int64_t> at) {
  if (at.empty()) throw InvalidInput("indicator: point must have dimension >= 1");
  auto n = NodeBuilder::make(NodeKind::indicator);
  NodeBuilder::set_point(*n, std::move(at));
  return NodeBuilder::finish(n);
}

inline Expr add(std::vector<Expr> args) {
  if (args.empty()) throw InvalidInput("add: needs at least one argument");
  return NodeBuilder::finish(NodeBuilder::make(NodeKind::add, std::move(args)));
}

inline Expr mul(std::vector<Expr> args) {
  if (args.empty()) throw InvalidInput("mul: needs at least one argument");
  return NodeBuilder::finish(NodeBuilder::make(NodeKind::mul, std::move(args)));
}

inline Expr unary(NodeKind k, Expr a) { return NodeBuilder::finish(NodeBuilder::make(k, {std::move(a)})); }
inline Expr neg(Expr a) { return unary(NodeKind::neg, std::move(a)); }
inline Expr conj(Expr a) { return unary(NodeKind::conj, std::move(a)); }
inline Expr abs(Expr a) { return unary(NodeKind::abs, std::move(a)); }
inline Expr arg(Expr a) { return unary(NodeKind::arg, std::move(a)); }
inline Expr phase(Expr a) { return unary(NodeKind::phase, std::move(a)); }

/// eps where |a(n)| <= eps, a(n) otherwise.
inline Expr clip(Expr a, double eps) {
  if (!(eps > 0.0) || std::isinf(eps)) throw InvalidInput("clip: eps must be finite and > 0");
  auto n = NodeBuilder::make(NodeKind::clip, {std::move(a)});
  NodeBuilder::set_real(*n, eps);
  return NodeBuilder::finish(n);
}

/// 1/a(n), valid where |a(n)| >= w.delta (1+|n|_1)^(-w.K).
inline Expr recip(Expr a, LowerBound w) {
  if (!(w.delta > 0.0) || std::isinf(w.delta) || w.K < 0)
    throw InvalidInput("recip: witness needs finite delta > 0 and K >= 0");
  auto n = NodeBuilder::make(NodeKind::recip, {std::move(a)});
  NodeBuilder::set_witness(*n, w);
  return NodeBuilder::finish(n);
}

inline Expr declare(const Expr& e, GrowthCertificate c) { return NodeBuilder::with_declared(e, c); }

}  // namespace expr

/// Principal argument in (-pi, pi], with Arg(0) = 0.
inline double principal_arg(Complex z) {
  if (z == Complex{}) return 0.0;
  const double a = std::atan2(z.imag(), z.real());
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

/// e^(-i Arg z), computed as conj(z)/|z| (and 1 at z = 0).
inline Complex unit_phase(Complex z) {
  if (z == Complex{}) return {1.0, 0.0};
  return std::conj(z) / std::abs(z);
}

/// Pointwise evaluation. Throws WitnessViolation from a recip node whose
/// witness fails at n.
inline Complex evaluate(const Node& e, const LatticeIndex& n) {
  switch (e.kind()) {
    case NodeKind::constant: return e.value();
    case NodeKind::coord:
      return static_cast<double>(n[static_cast<std::size_t>(e.int_param())]);
    case NodeKind::norm1: return static_cast<double>(n.norm1());
    case NodeKind::polyenv: return poly_weight(n.norm1(), e.int_param());
    case NodeKind::expdecay:
      return std::exp(-e.real_param() * static_cast<double>(n.norm1()));
    case NodeKind::indicator: return n.coords() == e.point() ? 1.0 : 0.0;
    case NodeKind::add: {
      Complex s{};
      for (const auto& c : e.args()) s += evaluate(*c, n);
      return s;
    }
    case NodeKind::mul: {
      Complex p{1.0, 0.0};
      for (const auto& c : e.args()) p *= evaluate(*c, n);
      return p;
    }
    case NodeKind::neg: return -evaluate(*e.arg(), n);
    case NodeKind::conj: return std::conj(evaluate(*e.arg(), n));
    case NodeKind::abs: return std::abs(evaluate(*e.arg(), n));
    case NodeKind::arg: return principal_arg(evaluate(*e.arg(), n));
    case NodeKind::phase: return unit_phase(evaluate(*e.arg(), n));
    case NodeKind::clip: {
      const Complex x = evaluate(*e.arg(), n);
      return std::abs(x) <= e.real_param() ? Complex{e.real_param(), 0.0} : x;
    }
    case NodeKind::recip: {
      const Complex x = evaluate(*e.arg(), n);
      const double m = std::abs(x);
      if (m == 0.0 || m < e.witness().floor_at(n.norm1())) throw WitnessViolation(n);
      return 1.0 / x;
    }
  }
  return {};
}

/// Highest seminorm order tracked by decay_profile().
inline constexpr int kMaxDecayOrder = 64;

/// Upper bounds p[k] >= sup_n (1+|n|_1)^k |e(n)| for k = 0..kMaxDecayOrder,
/// +inf where nothing can be said syntactically.
class DecayProfile {
 public:
  explicit DecayProfile(const Expr& root) {
    bounds_ = compute(root);
    memo_.clear();
  }

  double operator[](int k) const {
    if (k < 0) k = 0;
    return k <= kMaxDecayOrder ? bounds_[static_cast<std::size_t>(k)] : kInf;
  }

  /// Largest k with a finite bound, -1 if even p_0 is unbounded.
  int order() const {
    int k = -1;
    while (k < kMaxDecayOrder && std::isfinite(bounds_[static_cast<std::size_t>(k + 1)])) ++k;
    return k;
  }

 private:
  using Bounds = std::vector<double>;
  static constexpr std::size_t kSize = kMaxDecayOrder + 1;

  std::unordered_map<const Node*, Bounds> memo_;
  Bounds bounds_;

  static Bounds unbounded() { return Bounds(kSize, kInf); }

  const Bounds& compute(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Bounds b = rule(*e);
    // Generic refinements shared by all kinds.
    const auto& cert = e->certificate();
    if (cert.k == 0) b[0] = std::min(b[0], cert.M);
    if (const auto& s = e->support_radius(); s && std::isfinite(b[0])) {
      for (std::size_t k = 1; k < kSize; ++k)
        b[k] = std::min(b[k], round_up(b[0] * poly_weight(*s, static_cast<int>(k))));
    }
    return memo_.emplace(e.get(), std::move(b)).first->second;
  }

  Bounds rule(const Node& e) {
    Bounds b = unbounded();
    switch (e.kind()) {
      case NodeKind::constant:
        b[0] = round_up(std::abs(e.value()));
        if (e.value() == Complex{}) std::fill(b.begin(), b.end(), 0.0);
        break;
      case NodeKind::polyenv:
        for (std::size_t k = 0; k < kSize; ++k)
          if (static_cast<int>(k) + e.int_param() <= 0) b[k] = 1.0;
        break;
      case NodeKind::expdecay: {
        const double rate = e.real_param();
        b[0] = 1.0;
        if (rate > 0.0) {
          for (std::size_t k = 1; k < kSize; ++k) {
            const double kk = static_cast<double>(k);
            // sup over real r >= 0 of (1+r)^k e^(-rate r).
            b[k] = kk <= rate ? 1.0 : round_up(std::pow(kk / rate, kk) * std::exp(-(kk - rate)));
          }
        }
        break;
      }
      case NodeKind::indicator:
        b[0] = 1.0;
        break;
      case NodeKind::add: {
        std::fill(b.begin(), b.end(), 0.0);
        for (const auto& c : e.args()) {
          const Bounds& cb = compute(c);
          for (std::size_t k = 0; k < kSize; ++k) b[k] = round_up(b[k] + cb[k]);
        }
        break;
      }
      case NodeKind::mul: {
        // One factor carries the decay, the others are bounded by their
        // growth certificates: p_k(f g) <= M_g p_{k + k_g}(f).
        const auto& args = e.args();
        for (std::size_t carrier = 0; carrier < args.size(); ++carrier) {
          double others_M = 1.0;
          int others_k = 0;
          for (std::size_t j = 0; j < args.size(); ++j) {
            if (j == carrier) continue;
            others_M = round_up(others_M * args[j]->certificate().M);
            others_k += args[j]->certificate().k;
          }
          const Bounds& cb = compute(args[carrier]);
          for (std::size_t k = 0; k < kSize; ++k) {
            const std::size_t shifted = k + static_cast<std::size_t>(others_k);
            if (shifted >= kSize) break;
            b[k] = std::min(b[k], round_up(others_M * cb[shifted]));
          }
        }
        break;
      }
      case NodeKind::neg:
      case NodeKind::conj:
      case NodeKind::abs:
        b = compute(e.arg());
        break;
      default:
        break;
    }
    return b;
  }
};

}  // namespace periodist
