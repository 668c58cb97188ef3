#pragma once

#include <stdexcept>
#include <string>

#include "periodist/lattice.hpp"

namespace periodist {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-range input (dimension mismatch, bad parameter, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidInput {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : InvalidInput("dimension mismatch: expected " + std::to_string(expected) +
                     ", got " + std::to_string(got)) {}
};

/// A mathematical claim failed at a specific lattice point.
class PointFailure : public Error {
 public:
  PointFailure(const std::string& what, LatticeIndex at)
      : Error(what + " at n=" + to_string(at)), at_(std::move(at)) {}

  const LatticeIndex& at() const noexcept { return at_; }

 private:
  LatticeIndex at_;
};

/// A reciprocal was evaluated where its lower-bound witness does not hold.
class WitnessViolation : public PointFailure {
 public:
  explicit WitnessViolation(LatticeIndex at)
      : PointFailure("witness violated", std::move(at)) {}
};

/// A user-declared growth certificate failed its window check.
class CertificateRejected : public PointFailure {
 public:
  explicit CertificateRejected(LatticeIndex at)
      : PointFailure("growth certificate rejected", std::move(at)) {}
};

/// Cofactors passed to a reduction do not satisfy the Bezout identity.
class BezoutRejected : public Error {
 public:
  explicit BezoutRejected(double residual)
      : Error("Bezout residual " + std::to_string(residual) + " above tolerance"),
        residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace periodist
