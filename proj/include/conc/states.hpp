#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "conc/linalg.hpp"
#include "conc/types.hpp"

namespace conc {

// ---------------------------------------------------------------------------
// DensityMatrix: Hermitian, PSD, unit-trace matrix with bipartite labels.
// Construct through validate() so the invariants are guaranteed.
// ---------------------------------------------------------------------------

struct DensityMatrix {
  BipartiteDims dims;
  ComplexMatrix matrix;
};

// Validates a raw matrix as a density matrix.  The Hermitian part (M+M^dag)/2
// replaces the input when the asymmetry is below tol; larger asymmetry is an
// error rather than something to silently average away.
inline DensityMatrix validate(const ComplexMatrix& rho_raw, const BipartiteDims& dims,
                              double tol = 1e-9) {
  require_valid_dims(dims);
  const int n = dims.total();
  if (rho_raw.rows() != rho_raw.cols())
    throw DimensionMismatch("validate: matrix must be square");
  if (rho_raw.rows() != n)
    throw DimensionMismatch("validate: matrix size does not match dims");
  require_finite(rho_raw, "validate");

  const double asym = (rho_raw - rho_raw.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol)
    throw NotHermitian("validate: asymmetry " + std::to_string(asym) + " exceeds tolerance");
  ComplexMatrix rho = 0.5 * (rho_raw + rho_raw.adjoint());

  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol)
    throw BadTrace("validate: trace " + std::to_string(tr) + " is not 1");

  HermEig eig = herm_eig(rho, tol);
  const double min_eig = eig.values(eig.values.size() - 1);
  if (min_eig < -tol)
    throw NotPSD("validate: minimum eigenvalue " + std::to_string(min_eig) + " is negative");

  return DensityMatrix{dims, rho};
}

// ---------------------------------------------------------------------------
// Subnormalized decompositions: rho = sum_j |phi_j><phi_j| with subnormalized
// vectors.  The canonical one is spectral; all others follow by isometries.
// ---------------------------------------------------------------------------

struct SubnormalizedDecomposition {
  BipartiteDims dims;
  std::vector<StateVector> vectors;  // the |phi_j>, each of positive norm

  int r() const { return static_cast<int>(vectors.size()); }

  ComplexMatrix reconstruct() const {
    const int n = dims.total();
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (const StateVector& v : vectors) rho += v.amplitudes * v.amplitudes.adjoint();
    return rho;
  }
};

inline double default_rank_tol(const BipartiteDims& dims) { return 1e-12 * dims.total(); }

// Spectral decomposition into subnormalized vectors sqrt(lambda_k) v_k for
// eigenvalues above rank_tol (pass a negative value for the default
// 1e-12 * n1*n2).  Vectors come out in descending-eigenvalue order.
inline SubnormalizedDecomposition decompose(const DensityMatrix& rho, double rank_tol = -1.0) {
  if (rank_tol < 0.0) rank_tol = default_rank_tol(rho.dims);
  HermEig eig = herm_eig(rho.matrix, 1e-8);
  SubnormalizedDecomposition d;
  d.dims = rho.dims;
  for (int k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) > rank_tol) {
      StateVector v;
      v.dims = rho.dims;
      v.amplitudes = std::sqrt(eig.values(k)) * eig.vectors.col(k);
      d.vectors.push_back(std::move(v));
    }
  }
  return d;
}

inline void require_isometry(const ComplexMatrix& V, int r, double tol = 1e-9) {
  if (V.cols() != r) throw DimensionMismatch("isometry has wrong column count");
  if (V.rows() < V.cols()) throw NotIsometry("isometry must have at least as many rows as columns");
  const ComplexMatrix gram = V.adjoint() * V;
  const double err = (gram - ComplexMatrix::Identity(r, r)).cwiseAbs().maxCoeff();
  if (err > tol)
    throw NotIsometry("V^dag V deviates from identity by " + std::to_string(err));
}

/// Applies the decomposition freedom: output vector i is sum_j V_{ij} |phi_j>.
// V must satisfy V^dag V = I; the represented rho is unchanged.  Vectors of
// (numerically) zero norm are pruned, as the type requires.
inline SubnormalizedDecomposition transform_decomposition(const SubnormalizedDecomposition& d,
                                                          const ComplexMatrix& V) {
  require_isometry(V, d.r());
  const int N = static_cast<int>(V.rows());
  SubnormalizedDecomposition out;
  out.dims = d.dims;
  out.vectors.reserve(N);
  for (int i = 0; i < N; ++i) {
    StateVector v;
    v.dims = d.dims;
    v.amplitudes = ComplexVector::Zero(d.dims.total());
    for (int j = 0; j < d.r(); ++j) v.amplitudes += V(i, j) * d.vectors[j].amplitudes;
    if (v.squared_norm() > 1e-24) out.vectors.push_back(std::move(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// State zoo.
// ---------------------------------------------------------------------------

// The 3x3 family rho_a with beta = (1+a)/2, gamma = sqrt(1-a^2)/2 and overall
// prefactor 1/(1+8a); PPT for every a in [0,1] yet entangled for 0 < a < 1.
inline DensityMatrix horodecki_state(double a) {
  if (!(a >= 0.0 && a <= 1.0)) throw OutOfRange("horodecki_state: a must be in [0,1]");
  const double beta = (1.0 + a) / 2.0;
  const double gamma = std::sqrt(1.0 - a * a) / 2.0;
  ComplexMatrix M = ComplexMatrix::Zero(9, 9);
  // GHZ-like block on |0,0>, |1,1>, |2,2>  (composite indices 0, 4, 8)
  const int corners[3] = {0, 4, 8};
  for (int p : corners)
    for (int q : corners) M(p, q) = a;
  // remaining diagonal
  M(1, 1) = a;
  M(2, 2) = a;
  M(3, 3) = a;
  M(5, 5) = a;
  M(7, 7) = a;
  // the (2,0)/(2,2) corner block carrying beta and gamma
  M(6, 6) = beta;
  M(8, 8) = beta;
  M(6, 8) = gamma;
  M(8, 6) = gamma;
  M /= (1.0 + 8.0 * a);
  return DensityMatrix{BipartiteDims{3, 3}, M};
}

// (1/sqrt(n)) sum_i |i,i> on an n (x) n space.
inline StateVector maximally_entangled(int n) {
  if (n < 2) throw DimensionMismatch("maximally_entangled: n must be >= 2");
  StateVector v;
  v.dims = BipartiteDims{n, n};
  v.amplitudes = ComplexVector::Zero(n * n);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; ++i) v.amplitudes(i * n + i) = amp;
  return v;
}

// Random convex mixture of k product pure states (a separable state by
// construction, so its concurrence is exactly zero).
inline DensityMatrix product_mixture(const BipartiteDims& dims, int k, std::uint64_t seed) {
  require_valid_dims(dims);
  if (k < 1) throw BadParams("product_mixture: k must be >= 1");
  Rng rng(mix_seed(seed, 0x70726F64756374ULL));
  const int n = dims.total();
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  std::vector<double> w(k);
  double wsum = 0.0;
  for (int t = 0; t < k; ++t) {
    w[t] = rng.uniform() + 1e-12;
    wsum += w[t];
  }
  for (int t = 0; t < k; ++t) {
    ComplexVector a(dims.n1), b(dims.n2);
    for (int i = 0; i < dims.n1; ++i) a(i) = rng.complex_normal();
    for (int j = 0; j < dims.n2; ++j) b(j) = rng.complex_normal();
    a.normalize();
    b.normalize();
    ComplexVector prod(n);
    for (int i = 0; i < dims.n1; ++i)
      for (int j = 0; j < dims.n2; ++j) prod(i * dims.n2 + j) = a(i) * b(j);
    rho += (w[t] / wsum) * (prod * prod.adjoint());
  }
  return DensityMatrix{dims, rho};
}

}  // namespace conc
