#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace conc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error hierarchy.  Three coarse categories drive the CLI exit codes:
//   ValidationError -> 2   (input is well-formed but not a valid state / fails a check)
//   ParseError      -> 3   (input file cannot be understood)
//   OptionError     -> 4   (bad arguments, unknown generator, out-of-contract options)
// Fine-grained types below let library callers and tests discriminate causes.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct OptionError : Error {
  using Error::Error;
};

struct NotHermitian : ValidationError {
  using ValidationError::ValidationError;
};
struct NoConvergence : ValidationError {
  using ValidationError::ValidationError;
};
struct DimensionMismatch : ValidationError {
  using ValidationError::ValidationError;
};
struct NotPSD : ValidationError {
  using ValidationError::ValidationError;
};
struct BadTrace : ValidationError {
  using ValidationError::ValidationError;
};
struct NotIsometry : ValidationError {
  using ValidationError::ValidationError;
};
struct OutOfRange : ValidationError {
  using ValidationError::ValidationError;
};
struct NotSymmetrized : ValidationError {
  using ValidationError::ValidationError;
};
struct NegativeSpectrum : ValidationError {
  using ValidationError::ValidationError;
};
struct BadZ : ValidationError {
  using ValidationError::ValidationError;
};
struct WrongDims : ValidationError {
  using ValidationError::ValidationError;
};

struct BadRank : OptionError {
  using OptionError::OptionError;
};
struct BadOptions : OptionError {
  using OptionError::OptionError;
};
struct BadRange : OptionError {
  using OptionError::OptionError;
};
struct UnknownState : OptionError {
  using OptionError::OptionError;
};
struct BadParams : OptionError {
  using OptionError::OptionError;
};

// ---------------------------------------------------------------------------
// Bipartite dimensions.  The composite basis is row-major: |i,j> -> i*n2 + j.
// ---------------------------------------------------------------------------

struct BipartiteDims {
  int n1 = 0;
  int n2 = 0;

  int total() const { return n1 * n2; }

  bool operator==(const BipartiteDims& o) const { return n1 == o.n1 && n2 == o.n2; }
  bool operator!=(const BipartiteDims& o) const { return !(*this == o); }
};

inline void require_valid_dims(const BipartiteDims& d) {
  if (d.n1 < 1 || d.n2 < 1) throw DimensionMismatch("subsystem dimensions must be positive");
}

// A (possibly subnormalized) vector on H1 (x) H2.  Norm < 1 is first-class:
// sqrt(p_i)|Psi_i> vectors carry their ensemble weight in the norm.
struct StateVector {
  BipartiteDims dims;
  ComplexVector amplitudes;

  double norm() const { return amplitudes.norm(); }
  double squared_norm() const { return amplitudes.squaredNorm(); }
};

inline void require_same_dims(const StateVector& a, const StateVector& b) {
  if (a.dims != b.dims || a.amplitudes.size() != b.amplitudes.size())
    throw DimensionMismatch("state vectors live on different spaces");
}

inline void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entries");
}

}  // namespace conc
