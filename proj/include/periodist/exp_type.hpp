#pragma once

// Polynomial Bezout identities for the pair (z - 1, z^3) in the ring of
// entire functions of exponential type, and a search showing that no
// polynomial h makes z - 1 + h(z) z^3 a unit.

#include <boost/rational.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "periodist/errors.hpp"

namespace periodist {

using Rational = boost::rational<std::int64_t>;

namespace detail {
template <class T>
double magnitude(const T& x) {
  if constexpr (std::is_same_v<T, Rational>)
    return std::abs(boost::rational_cast<double>(x));
  else
    return std::abs(x);
}
}  // namespace detail

/// Coefficients in ascending degree; trailing zeros are trimmed.
template <class T>
class Poly {
 public:
  Poly() = default;
  Poly(std::initializer_list<T> c) : c_(c) { trim(); }
  explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }

  static Poly monomial(std::size_t degree, T coeff = T(1)) {
    std::vector<T> c(degree + 1, T(0));
    c[degree] = coeff;
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<T>& coefficients() const { return c_; }
  T operator[](std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }

  template <class U>
  U operator()(U z) const {
    U acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + static_cast<U>(c_[i]);
    return acc;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a) {
    std::vector<T> c(a.c_);
    for (auto& x : c) x = -x;
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly&, const Poly&) = default;

  /// max |coefficient|, 0 for the zero polynomial.
  double max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& x : c_) m = std::max(m, detail::magnitude(x));
    return m;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
  }

  std::vector<T> c_;
};

/// p f + q g - 1, computed in T's arithmetic.
template <class T>
Poly<T> bezout_defect(const Poly<T>& p, const Poly<T>& q, const Poly<T>& f, const Poly<T>& g) {
  return p * f + q * g - Poly<T>{T(1)};
}

/// Largest coefficient of p f + q g - 1; 0 means the identity holds.
template <class T>
double poly_bezout_check(const Poly<T>& p, const Poly<T>& q, const Poly<T>& f, const Poly<T>& g) {
  return bezout_defect(p, q, f, g).max_abs_coefficient();
}

/// All complex roots via the companion matrix, each polished by Newton.
inline std::vector<std::complex<double>> poly_roots(const Poly<double>& p) {
  const int n = p.degree();
  if (n < 1) return {};
  const auto& c = p.coefficients();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(n)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<double> dc;
  for (int i = 1; i <= n; ++i) dc.push_back(static_cast<double>(i) * c[static_cast<std::size_t>(i)]);
  const Poly<double> dp(dc);
  std::vector<std::complex<double>> roots;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    std::complex<double> z = solver.eigenvalues()[i];
    for (int it = 0; it < 20; ++it) {
      const auto d = dp(z);
      if (d == std::complex<double>{}) break;
      const auto step = p(z) / d;
      z -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    roots.push_back(z);
  }
  return roots;
}

struct ReducerSample {
  Poly<double> h;
  Poly<double> candidate;
  std::complex<double> root;
  double residual = 0.0;
};

struct ReducerSearchReport {
  int max_degree = 0;
  /// Coefficient of z in z - 1 + h(z) z^3 is 1 for every h, so the
  /// candidate is nonconstant and has a root.
  bool structural_nonconstant = false;
  /// Candidates found zero-free (i.e. possibly units): always 0.
  int units_found = 0;
  std::vector<ReducerSample> samples;
  double max_root_residual = 0.0;
};

/// For h with coefficients in {-1, 0, 1} and degree <= max_degree, finds a
/// root of z - 1 + h(z) z^3; a polynomial with a root is not of the form
/// e^(a + b z), so none of these candidates is a unit.
inline ReducerSearchReport polynomial_reducer_search(int max_degree) {
  if (max_degree < 0) throw InvalidInput("max degree must be >= 0");
  if (max_degree > 8) throw InvalidInput("max degree above 8 makes the sample grid too large");
  ReducerSearchReport out;
  out.max_degree = max_degree;

  // h(z) z^3 only touches degrees >= 3, so the z coefficient is that of z - 1.
  const Poly<Rational> base{Rational(-1), Rational(1)};
  out.structural_nonconstant = base[1] == Rational(1);

  const std::size_t terms = static_cast<std::size_t>(max_degree) + 1;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < terms; ++i) combos *= 3;
  const Poly<double> f{-1.0, 1.0};
  const Poly<double> z3 = Poly<double>::monomial(3);
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<double> hc(terms);
    std::size_t rest = code;
    for (std::size_t i = 0; i < terms; ++i) {
      hc[i] = static_cast<double>(rest % 3) - 1.0;
      rest /= 3;
    }
    const Poly<double> h(hc);
    const Poly<double> cand = f + h * z3;
    if (cand[1] != 1.0) out.structural_nonconstant = false;
    if (cand.degree() < 1) {
      ++out.units_found;
      continue;
    }
    const auto roots = poly_roots(cand);
    ReducerSample s{h, cand, roots.front(), std::abs(cand(roots.front()))};
    for (const auto& r : roots) {
      const double res = std::abs(cand(r));
      if (res < s.residual) {
        s.root = r;
        s.residual = res;
      }
    }
    out.max_root_residual = std::max(out.max_root_residual, s.residual);
    out.samples.push_back(std::move(s));
  }
  return out;
}

}  // namespace periodist
