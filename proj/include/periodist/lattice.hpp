#pragma once

// Points of Z^d and the shell-ordered enumeration used by every window scan.
//
// A window of radius R is the set {n : |n|_1 <= R}. It is always visited
// shell by shell (|n|_1 = 0, 1, ..., R) and lexicographically inside a shell,
// so sums and "first violation" answers are reproducible.

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace periodist {

class LatticeIndex {
 public:
  LatticeIndex() = default;
  explicit LatticeIndex(std::size_t dim) : coords_(dim, 0) {}
  explicit LatticeIndex(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  LatticeIndex(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

  std::size_t dimension() const noexcept { return coords_.size(); }

  std::int64_t operator[](std::size_t i) const { return coords_[i]; }
  std::int64_t& operator[](std::size_t i) { return coords_[i]; }

  const std::vector<std::int64_t>& coords() const noexcept { return coords_; }

  std::int64_t norm1() const noexcept {
    std::int64_t s = 0;
    for (auto c : coords_) s += c < 0 ? -c : c;
    return s;
  }

  friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;
  friend bool operator==(const LatticeIndex&, const LatticeIndex&) = default;

 private:
  std::vector<std::int64_t> coords_;
};

inline std::string to_string(const LatticeIndex& n) {
  std::string s = "(";
  for (std::size_t i = 0; i < n.dimension(); ++i) {
    if (i) s += ",";
    s += std::to_string(n[i]);
  }
  return s + ")";
}

/// Shell order: by |n|_1 first, lexicographic inside a shell.
inline bool shell_less(const LatticeIndex& a, const LatticeIndex& b) {
  const auto ra = a.norm1(), rb = b.norm1();
  if (ra != rb) return ra < rb;
  return a < b;
}

/// Upper bound 2^d (1+r)^(d-1) on #{n in Z^d : |n|_1 = r}.
///
/// Signs contribute at most 2^d and the nonnegative solutions number
/// C(r+d-1, d-1) = prod_{i<d} (r+i)/i <= (1+r)^(d-1).
inline double shell_count_bound(std::size_t d, std::int64_t r) {
  double b = 1.0;
  for (std::size_t i = 0; i < d; ++i) b *= 2.0;
  for (std::size_t i = 1; i < d; ++i) b *= static_cast<double>(1 + r);
  return b;
}

namespace detail {

template <class F>
bool call_visitor(F& f, const LatticeIndex& n) {
  if constexpr (std::is_same_v<std::invoke_result_t<F&, const LatticeIndex&>, void>) {
    f(n);
    return true;
  } else {
    return static_cast<bool>(f(n));
  }
}

template <class F>
bool visit_shell(LatticeIndex& n, std::size_t axis, std::int64_t remaining, F& f) {
  if (axis + 1 == n.dimension()) {
    if (remaining == 0) {
      n[axis] = 0;
      return call_visitor(f, n);
    }
    n[axis] = -remaining;
    if (!call_visitor(f, n)) return false;
    n[axis] = remaining;
    return call_visitor(f, n);
  }
  for (std::int64_t c = -remaining; c <= remaining; ++c) {
    n[axis] = c;
    if (!visit_shell(n, axis + 1, remaining - (c < 0 ? -c : c), f)) return false;
  }
  return true;
}

}  // namespace detail

/// Visits every n with |n|_1 = r in lexicographic order. The visitor may
/// return bool; false stops the walk. Returns false iff stopped early.
template <class F>
bool for_each_in_shell(std::size_t d, std::int64_t r, F&& f) {
  if (d == 0) throw std::invalid_argument("lattice dimension must be >= 1");
  if (r < 0) return true;
  LatticeIndex n(d);
  return detail::visit_shell(n, 0, r, f);
}

/// Visits the window |n|_1 <= R in shell order.
template <class F>
bool for_each_in_window(std::size_t d, std::int64_t R, F&& f) {
  for (std::int64_t r = 0; r <= R; ++r)
    if (!for_each_in_shell(d, r, f)) return false;
  return true;
}

/// Representative (r, 0, ..., 0) of the shell |n|_1 = r.
inline LatticeIndex shell_representative(std::size_t d, std::int64_t r) {
  LatticeIndex n(d);
  n[0] = r;
  return n;
}

}  // namespace periodist
