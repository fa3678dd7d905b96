#pragma once

#include <cmath>
#include <vector>

#include "conc/linalg.hpp"
#include "conc/states.hpp"
#include "conc/types.hpp"

namespace conc {

namespace detail {
// Debug hook for the self-check mutation canary: flips the sign of the
// partial-trace term inside f.  Never set outside `selfcheck --inject-f-sign-error`.
inline bool f_trace_sign_flip = false;
}  // namespace detail

// ---------------------------------------------------------------------------
// The sesquilinear function f and pure-state concurrence.
// ---------------------------------------------------------------------------

// f(psi1, psi2, psi3, psi4) =
//   <psi2|psi1><psi4|psi3> - tr1[ (tr2|psi1><psi2|) (tr2|psi3><psi4|) ].
// Linear in arguments 1 and 3, antilinear in 2 and 4.
inline Complex f_function(const StateVector& psi1, const StateVector& psi2,
                          const StateVector& psi3, const StateVector& psi4) {
  require_same_dims(psi1, psi2);
  require_same_dims(psi1, psi3);
  require_same_dims(psi1, psi4);
  const Complex ip12 = psi2.amplitudes.dot(psi1.amplitudes);  // <psi2|psi1>
  const Complex ip34 = psi4.amplitudes.dot(psi3.amplitudes);  // <psi4|psi3>
  const ComplexMatrix r12 = cross_reduced(psi1, psi2, 2);
  const ComplexMatrix r34 = cross_reduced(psi3, psi4, 2);
  const Complex tr = (r12 * r34).trace();
  const double sign = detail::f_trace_sign_flip ? 1.0 : -1.0;
  return ip12 * ip34 + sign * tr;
}

// c(psi) = sqrt(|<psi|psi>|^2 - tr rho_r^2), evaluated as sqrt(f(psi,psi,psi,psi)).
// The diagonal of f is real nonnegative; tiny negative rounding is clamped.
inline double pure_concurrence(const StateVector& psi) {
  if (!psi.amplitudes.allFinite()) throw ValidationError("pure_concurrence: non-finite amplitudes");
  const Complex f = f_function(psi, psi, psi, psi);
  if (std::abs(f.imag()) > 1e-12)
    throw ValidationError("pure_concurrence: f diagonal has imaginary part " +
                          std::to_string(f.imag()));
  return std::sqrt(std::max(0.0, f.real()));
}

// Independent route to the same quantity through the Schmidt (singular) values
// s_i of the row-major reshape: c(psi) = sqrt(||psi||^4 - sum_i s_i^4).
// Shares no code with f_function; used as a cross-check oracle.
inline double schmidt_concurrence(const StateVector& psi) {
  using RowMajorMap = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  RowMajorMap P(psi.amplitudes.data(), psi.dims.n1, psi.dims.n2);
  RealVector s = singular_values(P);
  const double n2 = psi.amplitudes.squaredNorm();
  double s4 = 0.0;
  for (int i = 0; i < s.size(); ++i) s4 += s(i) * s(i) * s(i) * s(i);
  return std::sqrt(std::max(0.0, n2 * n2 - s4));
}

// ---------------------------------------------------------------------------
// The concurrence tensor A and its symmetrization.
//
// Stored as the r^2 x r^2 unfolding with row index (j,k) -> j*r+k and column
// index (l,m) -> l*r+m, which is exactly the matrix whose eigensystem defines
// the T^alpha set.
// ---------------------------------------------------------------------------

struct ConcurrenceTensor {
  int r = 0;
  ComplexMatrix unfolding;  // r^2 x r^2
  bool symmetrized = false;

  Complex at(int j, int k, int l, int m) const { return unfolding(j * r + k, l * r + m); }
};

// A_{jk}^{lm} = f(phi_j, phi_l, phi_k, phi_m): covariant indices j,k feed the
// linear slots 1 and 3, contravariant l,m the antilinear slots 2 and 4.
inline ConcurrenceTensor build_A(const SubnormalizedDecomposition& d) {
  const int r = d.r();
  if (r < 1) throw DimensionMismatch("build_A: decomposition is empty");
  ConcurrenceTensor A;
  A.r = r;
  A.symmetrized = false;
  A.unfolding.resize(r * r, r * r);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k)
      for (int l = 0; l < r; ++l)
        for (int m = 0; m < r; ++m)
          A.unfolding(j * r + k, l * r + m) =
              f_function(d.vectors[j], d.vectors[l], d.vectors[k], d.vectors[m]);
  return A;
}

// curly-A_{jk}^{lm} = (A_{jk}^{lm} + A_{kj}^{lm}) / 2: average row blocks (j,k)
// and (k,j).  Result is flagged symmetrized; its unfolding is Hermitian PSD.
inline ConcurrenceTensor symmetrize(const ConcurrenceTensor& A) {
  const int r = A.r;
  ConcurrenceTensor S;
  S.r = r;
  S.symmetrized = true;
  S.unfolding.resize(r * r, r * r);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < r; ++k)
      S.unfolding.row(j * r + k) = 0.5 * (A.unfolding.row(j * r + k) + A.unfolding.row(k * r + j));
  return S;
}

// Dimension of the antisymmetric (x) antisymmetric subspace that supports the
// symmetrized tensor: m = n1(n1-1) n2(n2-1) / 4.
inline int antisym_dim(const BipartiteDims& dims) {
  require_valid_dims(dims);
  return (dims.n1 * (dims.n1 - 1) / 2) * (dims.n2 * (dims.n2 - 1) / 2);
}

// ---------------------------------------------------------------------------
// The T^alpha eigensystem.
// ---------------------------------------------------------------------------

struct TmatrixSet {
  int r = 0;
  BipartiteDims dims;
  std::vector<ComplexMatrix> matrices;  // retained T^alpha, complex symmetric r x r
  RealVector mu;                        // retained eigenvalues, descending
  RealVector mu_all;                    // full unfolding spectrum, descending
  int m_bound = 0;                      // n1(n1-1)n2(n2-1)/4

  int m_eff() const { return static_cast<int>(matrices.size()); }
};

inline double default_spectral_tol() { return 1e-10; }

// Eigendecomposes the unfolded symmetrized tensor and turns each eigenvector
// with eigenvalue mu_alpha > spectral_tol_rel * mu_1 into the r x r matrix
// sqrt(mu_alpha) * reshape(eigvec), symmetrized as a safeguard against solver
// noise and phase-fixed so the largest-modulus entry (ties: smallest row-major
// index) is real positive.  The retained set reconstructs the unfolding as
// sum_alpha vec(T^alpha) vec(T^alpha)^dagger.
inline TmatrixSet extract_T(const ConcurrenceTensor& A, const BipartiteDims& dims,
                            double spectral_tol_rel = 1e-10) {
  if (!A.symmetrized) throw NotSymmetrized("extract_T: tensor must be symmetrized first");
  require_valid_dims(dims);
  const int r = A.r;

  HermEig eig = herm_eig(A.unfolding, 1e-8);
  const int n = static_cast<int>(eig.values.size());
  const double mu1 = (n > 0) ? eig.values(0) : 0.0;
  if (n > 0 && eig.values(n - 1) < -1e-8)
    throw NegativeSpectrum("extract_T: eigenvalue " + std::to_string(eig.values(n - 1)) +
                           " is significantly negative");

  TmatrixSet T;
  T.r = r;
  T.dims = dims;
  T.m_bound = antisym_dim(dims);
  T.mu_all = eig.values;

  // Relative cutoff for genuine spectra, plus an absolute floor so that a
  // numerically zero tensor (separable-support states produce one) retains
  // nothing instead of amplifying rounding dust into a fake detection.
  const double cutoff = std::max(spectral_tol_rel * std::max(mu1, 0.0), 1e-14);
  std::vector<double> kept;
  for (int k = 0; k < n; ++k) {
    const double mu = eig.values(k);
    if (!(mu > cutoff) || !(mu > 0.0)) continue;
    ComplexMatrix X(r, r);
    for (int j = 0; j < r; ++j)
      for (int l = 0; l < r; ++l) X(j, l) = eig.vectors(j * r + l, k);
    X = 0.5 * (X + X.transpose()).eval();
    X *= std::sqrt(mu);
    // phase gauge: rotate so the largest-modulus entry is real positive
    double best = -1.0;
    Complex pivot(1.0, 0.0);
    for (int j = 0; j < r; ++j)
      for (int l = 0; l < r; ++l) {
        const double a = std::abs(X(j, l));
        if (a > best) {  // strict >: ties keep the earliest (smallest row-major) entry
          best = a;
          pivot = X(j, l);
        }
      }
    if (best > 0.0) X *= std::conj(pivot) / std::abs(pivot);
    T.matrices.push_back(std::move(X));
    kept.push_back(mu);
  }
  T.mu.resize(static_cast<int>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) T.mu(static_cast<int>(k)) = kept[k];
  return T;
}

// ---------------------------------------------------------------------------
// The ensemble objective C(V) in its two equivalent forms.
// ---------------------------------------------------------------------------

// C(V) = sum_i sqrt( sum_alpha |[V T^alpha V^T]_ii|^2 ) for an N x r isometry V.
inline double capc_C(const TmatrixSet& T, const ComplexMatrix& V) {
  require_isometry(V, T.r);
  const int N = static_cast<int>(V.rows());
  const int m = T.m_eff();
  if (m == 0) return 0.0;
  RealVector s = RealVector::Zero(N);
  for (int a = 0; a < m; ++a) {
    const ComplexMatrix W = V * T.matrices[a];  // N x r
    for (int i = 0; i < N; ++i) {
      const Complex t = W.row(i).cwiseProduct(V.row(i)).sum();  // [V T V^T]_ii
      s(i) += std::norm(t);
    }
  }
  double total = 0.0;
  for (int i = 0; i < N; ++i) total += std::sqrt(s(i));
  return total;
}

/// Same quantity contracted directly against the rank-4 tensor:
// C(V) = sum_i sqrt( [ (V (x) V)  A  (V (x) V)^dagger ]_{ii}^{ii} ).
// Works on the unsymmetrized tensor too (the V(x)V diagonal contraction cannot
// tell A and its symmetrization apart).
inline double capc_via_A(const ConcurrenceTensor& A, const ComplexMatrix& V) {
  require_isometry(V, A.r);
  const int r = A.r;
  const int N = static_cast<int>(V.rows());
  double total = 0.0;
  ComplexVector u(r * r);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k) u(j * r + k) = V(i, j) * V(i, k);
    const Complex t = u.transpose() * (A.unfolding * u.conjugate());
    if (std::abs(t.imag()) > 1e-9)
      throw ValidationError("capc_via_A: contraction has imaginary part " +
                            std::to_string(t.imag()));
    total += std::sqrt(std::max(0.0, t.real()));
  }
  return total;
}

}  // namespace conc
