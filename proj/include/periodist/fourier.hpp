#pragma once

// Periodic distributions on R^d through their Fourier coefficients.
//
// A period basis A has rows a_1^T .. a_d^T; frequencies live on the dual
// lattice A^-1 Z^d. Sampling on x_j = A^T (j/N), j in {0..N-1}^d, gives
// (A^-1 m) . x_j = m . j / N, so coefficient extraction is a plain
// d-dimensional DFT normalized by 1/N^d.

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "periodist/bounds.hpp"
#include "periodist/errors.hpp"
#include "periodist/lattice.hpp"
#include "periodist/sequence.hpp"

namespace periodist {

inline constexpr double kDefaultSingularTolerance = 1e-9;

class PeriodBasis {
 public:
  /// `rows` are the period vectors a_1..a_d (row-major d x d).
  PeriodBasis(std::size_t d, std::span<const double> rows, double singular_tol = kDefaultSingularTolerance)
      : A_(d, d) {
    if (d == 0) throw InvalidInput("period basis: dimension must be >= 1");
    if (rows.size() != d * d)
      throw InvalidInput("period basis: expected " + std::to_string(d * d) + " entries, got " +
                         std::to_string(rows.size()));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) A_(i, j) = rows[i * d + j];
    if (!A_.allFinite()) throw InvalidInput("period basis: entries must be finite");
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(A_);
    const double det = lu.determinant();
    if (!(std::abs(det) > singular_tol))
      throw InvalidInput("period basis: singular (|det| = " + std::to_string(std::abs(det)) + ")");
    Ainv_ = lu.inverse();
    const Eigen::MatrixXd defect = A_ * Ainv_ - Eigen::MatrixXd::Identity(d, d);
    if (defect.cwiseAbs().maxCoeff() > 1e-12)
      throw InvalidInput("period basis: too ill-conditioned to invert to 1e-12");
  }

  static PeriodBasis identity(std::size_t d) {
    std::vector<double> rows(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) rows[i * d + i] = 1.0;
    return {d, rows};
  }

  std::size_t dimension() const { return static_cast<std::size_t>(A_.rows()); }
  const Eigen::MatrixXd& matrix() const { return A_; }
  const Eigen::MatrixXd& inverse() const { return Ainv_; }

  Eigen::VectorXd period(std::size_t k) const { return A_.row(static_cast<Eigen::Index>(k)).transpose(); }

  /// Sample point A^T (j / N).
  Eigen::VectorXd grid_point(const std::vector<std::int64_t>& j, std::size_t N) const {
    Eigen::VectorXd t(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
      t[static_cast<Eigen::Index>(i)] = static_cast<double>(j[i]) / static_cast<double>(N);
    return A_.transpose() * t;
  }

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd Ainv_;
};

/// v = A^-1 m; a_k . v = m_k.
inline Eigen::VectorXd dual_point(const PeriodBasis& P, const LatticeIndex& m) {
  if (m.dimension() != P.dimension()) throw DimensionMismatch(P.dimension(), m.dimension());
  Eigen::VectorXd mv(static_cast<Eigen::Index>(m.dimension()));
  for (std::size_t i = 0; i < m.dimension(); ++i) mv[static_cast<Eigen::Index>(i)] = static_cast<double>(m[i]);
  return P.inverse() * mv;
}

struct SamplingInfo {
  std::size_t samples_per_axis = 0;
  std::string normalization = "forward 1/N^d";
  /// N even: index -N/2 also stands for +N/2; content there is aliased.
  bool nyquist_ambiguous = false;
};

/// Fourier coefficients alpha(m) of a periodic distribution, indexed by m
/// (the frequency is A^-1 m). Either a finite sparse map or a whole
/// s'(Z^d) sequence (e.g. the Dirac comb, all coefficients 1).
class CoefficientMap {
 public:
  static CoefficientMap finite(std::size_t d, std::map<LatticeIndex, Complex> entries) {
    CoefficientMap c(d);
    double M = 0.0;
    for (const auto& [m, v] : entries) {
      if (m.dimension() != d) throw DimensionMismatch(d, m.dimension());
      M = std::max(M, std::abs(v));
    }
    c.entries_ = std::move(entries);
    c.growth_ = {round_up(M), 0};
    return c;
  }

  static CoefficientMap from_sequence(SlowSequence a) {
    CoefficientMap c(a.dimension());
    c.growth_ = a.certificate();
    c.sequence_ = std::move(a);
    return c;
  }

  /// Identity of pointwise coefficient multiplication.
  static CoefficientMap dirac_comb(std::size_t d) { return from_sequence(SlowSequence::one(d)); }

  std::size_t dimension() const { return dim_; }
  bool is_finite() const { return !sequence_.has_value(); }
  const std::map<LatticeIndex, Complex>& entries() const { return entries_; }
  const GrowthCertificate& growth() const { return growth_; }
  const std::optional<SamplingInfo>& sampling() const { return sampling_; }
  void set_sampling(SamplingInfo s) { sampling_ = std::move(s); }

  Complex operator[](const LatticeIndex& m) const {
    if (m.dimension() != dim_) throw DimensionMismatch(dim_, m.dimension());
    if (sequence_) return (*sequence_)(m);
    auto it = entries_.find(m);
    return it == entries_.end() ? Complex{} : it->second;
  }

  /// The coefficients as an element of s'(Z^d).
  SlowSequence as_sequence() const {
    if (sequence_) return *sequence_;
    std::vector<Expr> terms;
    for (const auto& [m, v] : entries_)
      terms.push_back(expr::mul({expr::constant(v), expr::indicator(m.coords())}));
    if (terms.empty()) return SlowSequence::zero(dim_);
    return {expr::add(std::move(terms)), dim_};
  }

 private:
  explicit CoefficientMap(std::size_t d) : dim_(d) {
    if (d == 0) throw InvalidInput("coefficient map: dimension must be >= 1");
  }

  std::size_t dim_;
  std::map<LatticeIndex, Complex> entries_;
  std::optional<SlowSequence> sequence_;
  GrowthCertificate growth_{};
  std::optional<SamplingInfo> sampling_;
};

/// Pointwise product of coefficients (convolution of the distributions).
inline CoefficientMap multiply(const CoefficientMap& x, const CoefficientMap& y) {
  if (x.dimension() != y.dimension()) throw DimensionMismatch(x.dimension(), y.dimension());
  if (!x.is_finite() && !y.is_finite()) return CoefficientMap::from_sequence(x.as_sequence() * y.as_sequence());
  const CoefficientMap& fin = x.is_finite() ? x : y;
  const CoefficientMap& other = x.is_finite() ? y : x;
  std::map<LatticeIndex, Complex> out;
  for (const auto& [m, v] : fin.entries()) out.emplace(m, v * other[m]);
  return CoefficientMap::finite(x.dimension(), std::move(out));
}

/// Centered index range for N samples: -floor(N/2) .. ceil(N/2) - 1.
inline std::int64_t centered_min(std::size_t N) { return -static_cast<std::int64_t>(N / 2); }
inline std::int64_t centered_max(std::size_t N) { return static_cast<std::int64_t>((N + 1) / 2) - 1; }

/// Number of samples N^d, or throws if it overflows.
inline std::size_t grid_size(std::size_t d, std::size_t N) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (N != 0 && total > static_cast<std::size_t>(-1) / N) throw InvalidInput("sample grid too large");
    total *= N;
  }
  return total;
}

/// Grid multi-index j (row-major, axis 0 slowest) of flat position `flat`.
inline std::vector<std::int64_t> grid_index(std::size_t d, std::size_t N, std::size_t flat) {
  std::vector<std::int64_t> j(d);
  for (std::size_t i = d; i-- > 0;) {
    j[i] = static_cast<std::int64_t>(flat % N);
    flat /= N;
  }
  return j;
}

/// alpha(m) = N^-d sum_j f(x_j) e^(-2 pi i m.j/N) over the centered window.
/// `samples` is row-major over j in {0..N-1}^d. Exact for trigonometric
/// polynomials of per-axis degree < N/2.
inline CoefficientMap coeffs_from_samples(const PeriodBasis& P, std::size_t N, std::span<const Complex> samples) {
  const std::size_t d = P.dimension();
  if (N == 0) throw InvalidInput("fourier: samples per axis must be >= 1");
  const std::size_t total = grid_size(d, N);
  if (samples.size() != total)
    throw InvalidInput("fourier: expected " + std::to_string(total) + " samples, got " +
                       std::to_string(samples.size()));

  std::vector<int> dims(d, static_cast<int>(N));
  auto* in = fftw_alloc_complex(total);
  auto* out = fftw_alloc_complex(total);
  std::unique_ptr<fftw_complex, decltype(&fftw_free)> in_guard(in, fftw_free), out_guard(out, fftw_free);
  fftw_plan plan = fftw_plan_dft(static_cast<int>(d), dims.data(), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  if (!plan) throw Error("fftw: planning failed");
  std::unique_ptr<fftw_plan_s, decltype(&fftw_destroy_plan)> plan_guard(plan, fftw_destroy_plan);
  for (std::size_t i = 0; i < total; ++i) {
    in[i][0] = samples[i].real();
    in[i][1] = samples[i].imag();
  }
  fftw_execute(plan);

  const double scale = 1.0 / static_cast<double>(total);
  std::map<LatticeIndex, Complex> entries;
  for (std::size_t flat = 0; flat < total; ++flat) {
    auto j = grid_index(d, N, flat);
    for (auto& c : j)
      if (c > centered_max(N)) c -= static_cast<std::int64_t>(N);
    entries.emplace(LatticeIndex(std::move(j)), Complex{out[flat][0], out[flat][1]} * scale);
  }
  auto c = CoefficientMap::finite(d, std::move(entries));
  c.set_sampling({N, "forward 1/N^d", N % 2 == 0});
  return c;
}

/// sum_m alpha(m) e^(2 pi i (A^-1 m) . x). Only finite maps can be
/// synthesized.
inline Complex synthesize(const PeriodBasis& P, const CoefficientMap& c, const Eigen::VectorXd& x) {
  if (!c.is_finite()) throw InvalidInput("synthesize: coefficient map has infinite support");
  if (c.dimension() != P.dimension()) throw DimensionMismatch(P.dimension(), c.dimension());
  if (static_cast<std::size_t>(x.size()) != P.dimension())
    throw DimensionMismatch(P.dimension(), static_cast<std::size_t>(x.size()));
  Complex s{};
  for (const auto& [m, v] : c.entries()) {
    const double phi = 2.0 * std::numbers::pi * dual_point(P, m).dot(x);
    s += v * std::polar(1.0, phi);
  }
  return s;
}

/// <T, psi> = sum_m alpha(m) psi(A^-1 m), where test_values(m) = psi(A^-1 m).
inline PairingResult distribution_action(const CoefficientMap& c, const FastSequence& test_values, std::int64_t R) {
  return pairing(c.as_sequence(), test_values, R);
}

}  // namespace periodist
