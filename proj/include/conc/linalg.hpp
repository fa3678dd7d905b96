#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "conc/types.hpp"

namespace conc {

// ---------------------------------------------------------------------------
// Deterministic random numbers.
//
// All stochastic operations take an explicit 64-bit seed.  Streams are derived
// with a splitmix64 mix so that (seed, stream) pairs decorrelate, and samples
// are produced from raw bits (no std::*_distribution, whose output is
// implementation-defined) so results are reproducible across standard
// libraries for the same floating-point platform.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL + stream * 0x9E3779B97F4A7C15ULL);
  splitmix64_next(s);
  return splitmix64_next(s) ^ stream;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // Warm up so nearby seeds diverge immediately.
    splitmix64_next(state_);
  }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(splitmix64_next(state_) >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cached second value).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  Complex complex_normal() {
    double re = normal();
    double im = normal();
    return Complex(re, im);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition, descending order.
// ---------------------------------------------------------------------------

struct HermEig {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns, matched to values
};

// Eigendecomposition of a (numerically) Hermitian matrix.  Values are sorted
// descending; on ties the solver's original (ascending-eigenvalue) order is
// kept, which makes the output deterministic for a fixed build.
inline HermEig herm_eig(const ComplexMatrix& H, double assume_hermitian_tol = 1e-9) {
  if (H.rows() != H.cols()) throw DimensionMismatch("herm_eig: matrix must be square");
  require_finite(H, "herm_eig");
  const double asym = (H - H.adjoint()).cwiseAbs().maxCoeff();
  if (asym > assume_hermitian_tol)
    throw NotHermitian("herm_eig: asymmetry " + std::to_string(asym) + " exceeds tolerance");

  ComplexMatrix Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(Hs);
  if (solver.info() != Eigen::Success) throw NoConvergence("herm_eig: eigensolver did not converge");

  const int n = static_cast<int>(H.rows());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  // Stable sort by descending value; ties keep ascending solver index.
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });

  HermEig out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(idx[k]);
    out.vectors.col(k) = solver.eigenvectors().col(idx[k]);
  }
  return out;
}

// Singular values of a rectangular complex matrix, descending, all >= 0.
inline RealVector singular_values(const ComplexMatrix& M) {
  require_finite(M, "singular_values");
  Eigen::JacobiSVD<ComplexMatrix> svd(M);
  return svd.singularValues();
}

// ---------------------------------------------------------------------------
// Partial traces of outer products and the partial transpose.
// ---------------------------------------------------------------------------

// tr_s |psi_a><psi_b| for a bipartite pair sharing the same dims.
// traced_subsystem == 2 gives an n1 x n1 matrix with entries
//   sum_j (psi_a)_{i*n2+j} * conj((psi_b)_{k*n2+j}),
// i.e. Pa * Pb^dagger for the row-major n1 x n2 reshapes Pa, Pb.
inline ComplexMatrix cross_reduced(const StateVector& psi_a, const StateVector& psi_b,
                                   int traced_subsystem) {
  require_same_dims(psi_a, psi_b);
  const int n1 = psi_a.dims.n1;
  const int n2 = psi_a.dims.n2;
  if (psi_a.amplitudes.size() != n1 * n2)
    throw DimensionMismatch("cross_reduced: amplitude length does not match dims");
  using RowMajorMap = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  RowMajorMap Pa(psi_a.amplitudes.data(), n1, n2);
  RowMajorMap Pb(psi_b.amplitudes.data(), n1, n2);
  if (traced_subsystem == 2) {
    return Pa * Pb.adjoint();
  } else if (traced_subsystem == 1) {
    return Pa.transpose() * Pb.conjugate();
  }
  throw DimensionMismatch("cross_reduced: traced_subsystem must be 1 or 2");
}

// Partial transpose on the chosen subsystem.  Pure entry permutation, so it is
// exactly trace-preserving and an exact involution.
inline ComplexMatrix partial_transpose(const ComplexMatrix& rho, const BipartiteDims& dims,
                                       int subsystem = 2) {
  require_valid_dims(dims);
  const int n = dims.total();
  if (rho.rows() != n || rho.cols() != n)
    throw DimensionMismatch("partial_transpose: matrix size does not match dims");
  if (subsystem != 1 && subsystem != 2)
    throw DimensionMismatch("partial_transpose: subsystem must be 1 or 2");

  const int n1 = dims.n1;
  const int n2 = dims.n2;
  ComplexMatrix out(n, n);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n1; ++k)
        for (int l = 0; l < n2; ++l) {
          // <i,j|out|k,l> = <i,l|rho|k,j> (subsystem 2) or <k,j|rho|i,l> (subsystem 1)
          if (subsystem == 2)
            out(i * n2 + j, k * n2 + l) = rho(i * n2 + l, k * n2 + j);
          else
            out(i * n2 + j, k * n2 + l) = rho(k * n2 + j, i * n2 + l);
        }
  return out;
}

// ---------------------------------------------------------------------------
// Random sampling (Haar unitaries, induced-measure density matrices).
// ---------------------------------------------------------------------------

// Haar-distributed n x n unitary: QR of a complex Ginibre matrix with the
// phases of R's diagonal folded back in (plain QR alone is not Haar).
inline ComplexMatrix random_unitary(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionMismatch("random_unitary: n must be >= 1");
  Rng rng(mix_seed(seed, 0x756E6974617279ULL));
  ComplexMatrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix> qr(G);
  ComplexMatrix Q = qr.householderQ();
  ComplexMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    Complex d = R(k, k);
    double a = std::abs(d);
    Complex phase = (a > 0.0) ? d / a : Complex(1.0, 0.0);
    Q.col(k) *= phase;
  }
  return Q;
}

// Induced-measure random density matrix: G G^dagger / tr(G G^dagger) with G an
// (n1*n2) x rank complex Gaussian matrix.
inline ComplexMatrix random_density_matrix(const BipartiteDims& dims, int rank,
                                           std::uint64_t seed) {
  require_valid_dims(dims);
  const int n = dims.total();
  if (rank < 1 || rank > n) throw BadRank("random_density_matrix: rank must be in [1, n1*n2]");
  Rng rng(mix_seed(seed, 0x64656E73697479ULL));
  ComplexMatrix G(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) G(i, j) = rng.complex_normal();
  ComplexMatrix rho = G * G.adjoint();
  rho /= rho.trace().real();
  return rho;
}

// Haar-random normalized pure state (utility for tests and self-checks).
inline StateVector random_state_vector(const BipartiteDims& dims, std::uint64_t seed) {
  require_valid_dims(dims);
  Rng rng(mix_seed(seed, 0x7075726576ecULL));
  ComplexVector v(dims.total());
  for (int i = 0; i < v.size(); ++i) v(i) = rng.complex_normal();
  v.normalize();
  return StateVector{dims, v};
}

}  // namespace conc
