#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "conc/linalg.hpp"
#include "conc/states.hpp"
#include "conc/tensor.hpp"
#include "conc/types.hpp"

namespace conc {

// ---------------------------------------------------------------------------
// ZVector: z_alpha = y_alpha e^{i phi_alpha} with sum |z_alpha|^2 = 1 and the
// global phase gauged so the first nonzero component is real nonnegative.
// ---------------------------------------------------------------------------

struct ZVector {
  ComplexVector components;

  int size() const { return static_cast<int>(components.size()); }
};

inline ZVector make_z(ComplexVector v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw BadZ("make_z: zero vector");
  v /= n;
  for (int i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > 1e-14) {
      v *= std::conj(v(i)) / a;  // gauge: first nonzero component real positive
      break;
    }
  }
  return ZVector{std::move(v)};
}

// ---------------------------------------------------------------------------
// Options, diagnostics, reports.
// ---------------------------------------------------------------------------

struct OptimizerOptions {
  std::uint64_t seed = 0;
  int restarts_lower = 16;  // multi-start count for the z search
  int evals_lower = 400;    // objective evaluations per z restart
  int restarts_upper = 8;   // multi-start count for the V search
  int evals_upper = 2000;   // objective evaluations per V restart
  int embed_n = 0;          // rows N of the isometry V; 0 means N = r; must be in [r, 2r]
  double rank_tol = -1.0;   // decomposition eigenvalue cutoff; negative = default
  double spectral_tol = 1e-10;  // relative mu cutoff for the T set
  int r_cap = 64;           // reject states whose rank exceeds this (cost grows as r^4)
  bool no_timing = false;   // zero out wall-time fields (byte-stable output)
};

struct Diagnostics {
  long long lower_evals = 0;
  long long upper_evals = 0;
  int restarts_lower = 0;
  int restarts_upper = 0;
  double lower_raw_unclamped = 0.0;  // best z objective before the max(0,.) clamp
  double wall_seconds = 0.0;
};

struct BoundReport {
  BipartiteDims dims;
  int r = 0;
  int m_bound = 0;
  int m_eff = 0;
  bool detected = false;  // false when the whole spectrum of the tensor is below tolerance
  double lower_algebraic = 0.0;
  double lower_optimized = 0.0;
  double upper_optimized = 0.0;
  double negativity = 0.0;
  bool is_ppt = false;
  ZVector z_best;
  ComplexMatrix V_best;
  Diagnostics diag;
};

// ---------------------------------------------------------------------------
// Lower bounds.
// ---------------------------------------------------------------------------

namespace detail {
// lambda_1 - sum_{i>1} lambda_i of the singular values of T(z) = sum z_a T^a,
// without the final clamp (the optimizer searches the unclamped landscape).
inline double lower_objective_raw(const TmatrixSet& T, const ComplexVector& z) {
  const int r = T.r;
  ComplexMatrix M = ComplexMatrix::Zero(r, r);
  for (int a = 0; a < T.m_eff(); ++a) M += z(a) * T.matrices[a];
  RealVector s = singular_values(M);
  double rest = 0.0;
  for (int i = 1; i < s.size(); ++i) rest += s(i);
  return (s.size() > 0 ? s(0) : 0.0) - rest;
}
}  // namespace detail

// Certified lower bound for one admissible z (Cauchy-Schwarz over the T set):
// max(0, lambda_1 - sum_{i>1} lambda_i).  Valid for every unit-norm z.
inline double lower_bound_for_z(const TmatrixSet& T, const ZVector& z) {
  if (z.size() != T.m_eff()) throw BadZ("lower_bound_for_z: z length does not match T set");
  if (std::abs(z.components.squaredNorm() - 1.0) > 1e-9)
    throw BadZ("lower_bound_for_z: z is not normalized");
  return std::max(0.0, detail::lower_objective_raw(T, z.components));
}

// The no-optimization bound: z concentrated on the dominant mu_alpha.
// An empty T set means "no entanglement detected" and yields 0 (not an error).
inline double algebraic_lower(const TmatrixSet& T) {
  if (T.m_eff() == 0) return 0.0;
  ComplexVector e = ComplexVector::Zero(T.m_eff());
  e(0) = 1.0;
  return lower_bound_for_z(T, ZVector{e});
}

// Multi-start derivative-free maximization of the z bound.
//
// z is parametrized as a real vector of length 2*m normalized onto the unit
// sphere.  Starts: the dominant-alpha unit vector, each other single-alpha
// unit vector, and Haar-ish random fill to `restarts_lower`.  Each restart
// runs a compass (coordinate pattern) search with `evals_lower` objective
// evaluations, stopping early when 50 consecutive evaluations improve by less
// than 1e-9.  The dominant start guarantees result >= algebraic_lower.
inline std::pair<ZVector, double> optimize_lower(const TmatrixSet& T, const OptimizerOptions& opts,
                                                 Diagnostics* diag = nullptr) {
  const int m = T.m_eff();
  if (m < 1) throw BadOptions("optimize_lower: empty T set");
  if (m == 1) {
    ComplexVector e = ComplexVector::Zero(1);
    e(0) = 1.0;
    ZVector z{e};
    const double v = lower_bound_for_z(T, z);
    if (diag) diag->lower_raw_unclamped = detail::lower_objective_raw(T, e);
    return {z, v};
  }

  const int dim = 2 * m;
  auto to_z = [&](const RealVector& x) {
    ComplexVector z(m);
    for (int a = 0; a < m; ++a) z(a) = Complex(x(2 * a), x(2 * a + 1));
    const double n = z.norm();
    if (!(n > 1e-14)) return ComplexVector(ComplexVector::Zero(m));
    return ComplexVector(z / n);
  };

  long long evals = 0;
  auto objective = [&](const RealVector& x) {
    ++evals;
    ComplexVector z = to_z(x);
    if (z.isZero(0.0)) return -1e300;
    return detail::lower_objective_raw(T, z);
  };

  // start list
  std::vector<RealVector> starts;
  {
    RealVector e = RealVector::Zero(dim);
    e(0) = 1.0;
    starts.push_back(e);  // dominant alpha
    for (int a = 1; a < m && static_cast<int>(starts.size()) < opts.restarts_lower; ++a) {
      RealVector s = RealVector::Zero(dim);
      s(2 * a) = 1.0;
      starts.push_back(s);
    }
    int t = 0;
    while (static_cast<int>(starts.size()) < opts.restarts_lower) {
      Rng rng(mix_seed(opts.seed, 0xA5CEED00ULL + static_cast<std::uint64_t>(t++)));
      RealVector s(dim);
      for (int i = 0; i < dim; ++i) s(i) = rng.normal();
      starts.push_back(s);
    }
  }

  double best_val = -1e300;
  RealVector best_x;
  for (const RealVector& start : starts) {
    RealVector x = start;
    x /= x.norm();
    double fx = objective(x);
    double step = 0.5;
    int used = 1;
    double window_base = fx;
    int window_count = 0;
    while (used < opts.evals_lower && step > 1e-12) {
      bool improved = false;
      for (int i = 0; i < dim && used < opts.evals_lower; ++i) {
        for (double sgn : {1.0, -1.0}) {
          if (used >= opts.evals_lower) break;
          RealVector x2 = x;
          x2(i) += sgn * step;
          const double f2 = objective(x2);
          ++used;
          ++window_count;
          if (f2 > fx + 1e-15) {
            x = x2;
            fx = f2;
            improved = true;
            break;
          }
        }
        if (improved) break;
      }
      if (!improved) step *= 0.5;
      if (window_count >= 50) {
        if (fx - window_base < 1e-9) break;  // converged: no real progress over the window
        window_base = fx;
        window_count = 0;
      }
    }
    if (fx > best_val) {  // strict >: ties keep the lowest restart index
      best_val = fx;
      best_x = x;
    }
  }

  if (diag) {
    diag->lower_evals += evals;
    diag->restarts_lower = static_cast<int>(starts.size());
    diag->lower_raw_unclamped = best_val;
  }
  ZVector z = make_z(to_z(best_x));
  return {z, std::max(0.0, best_val)};
}

// ---------------------------------------------------------------------------
// Upper bound: minimize C(V) over isometries V = first r columns of
// U = exp(K) U0, K anti-Hermitian.
// ---------------------------------------------------------------------------

namespace detail {

// exp(K) for anti-Hermitian K, via the Hermitian eigendecomposition of -iK.
inline ComplexMatrix exp_antihermitian(const ComplexMatrix& K) {
  const Complex mi(0.0, -1.0);
  HermEig eig = herm_eig(mi * K, 1e-8);
  const int n = static_cast<int>(K.rows());
  ComplexVector phases(n);
  for (int k = 0; k < n; ++k) phases(k) = std::exp(Complex(0.0, eig.values(k)));
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

struct UpperEval {
  double objective = 0.0;   // sum_i (s_i)^{p/2}
  double true_value = 0.0;  // sum_i sqrt(s_i), the p = 1 value C(V)
};

// Objective and per-row squared amplitudes s_i for V = U[:, :r].
inline UpperEval upper_objective(const std::vector<ComplexMatrix>& Ts, const ComplexMatrix& V,
                                 double p, RealVector* s_out = nullptr,
                                 ComplexMatrix* X_out = nullptr) {
  const int N = static_cast<int>(V.rows());
  const int m = static_cast<int>(Ts.size());
  RealVector s = RealVector::Zero(N);
  ComplexMatrix X(N, m);
  for (int a = 0; a < m; ++a) {
    const ComplexMatrix W = V * Ts[a];
    for (int i = 0; i < N; ++i) {
      const Complex t = W.row(i).cwiseProduct(V.row(i)).sum();
      X(i, a) = t;
      s(i) += std::norm(t);
    }
  }
  UpperEval out;
  for (int i = 0; i < N; ++i) {
    out.objective += std::pow(s(i), 0.5 * p);
    out.true_value += std::sqrt(s(i));
  }
  if (s_out) *s_out = std::move(s);
  if (X_out) *X_out = std::move(X);
  return out;
}

// Riemannian descent direction on U(N) for F_p(V(U)).  With t_{i,a} =
// [V T^a V^T]_ii and phi(s) = s^{p/2}: dF/dV_{ik} = 2 phi'(s_i) g_{ik},
// g_i = sum_a conj(t_{i,a}) T^a V_i^T.  Lifting to U through V = U E and
// projecting onto anti-Hermitian directions gives D = S - S^dag with
// S = U E (dF/dV)^T; moving U <- exp(tau D) U decreases F for small tau > 0.
inline ComplexMatrix upper_descent_direction(const std::vector<ComplexMatrix>& Ts,
                                             const ComplexMatrix& U, int r, double p,
                                             const RealVector& s, const ComplexMatrix& X) {
  const int N = static_cast<int>(U.rows());
  const int m = static_cast<int>(Ts.size());
  const ComplexMatrix V = U.leftCols(r);
  ComplexMatrix P = ComplexMatrix::Zero(N, r);
  for (int a = 0; a < m; ++a) {
    const ComplexMatrix VT = V * Ts[a].transpose();  // row i = (T^a V_i^T)^T
    for (int i = 0; i < N; ++i) P.row(i) += std::conj(X(i, a)) * VT.row(i);
  }
  for (int i = 0; i < N; ++i) {
    const double si = std::max(s(i), 1e-30);
    const double dphi = 0.5 * p * std::pow(si, 0.5 * p - 1.0);
    P.row(i) *= 2.0 * dphi;
  }
  ComplexMatrix S = ComplexMatrix::Zero(N, N);
  S.leftCols(r) = P;          // U E P^T has the same nonzero structure as P in U-coordinates:
  S = U * S.transpose();      // S = U (E P^T) with E the N x r column selector
  return S - S.adjoint();     // descent direction (negative Riemannian gradient)
}

}  // namespace detail

// Multi-start minimization of C(V) over V = first r columns of exp(K) U0.
//
// Restart 0 starts from U0 = I (the spectral decomposition itself), the rest
// from Haar-random U0; each restart spends `evals_upper` objective
// evaluations.  A homotopy on the exponent (p = 2 -> 1.5 -> 1.2 -> 1) smooths
// the square roots early on, which is what lets descent push individual
// ensemble members to (near) zero concurrence; the reported value is always
// the true p = 1 objective C(V).  Deterministic for a fixed seed; the best
// restart wins, ties by lowest restart index.
inline std::pair<ComplexMatrix, double> optimize_upper(const SubnormalizedDecomposition& d,
                                                       const TmatrixSet& T,
                                                       const OptimizerOptions& opts,
                                                       Diagnostics* diag = nullptr) {
  const int r = d.r();
  if (r < 1) throw BadOptions("optimize_upper: empty decomposition");
  if (T.r != r) throw BadOptions("optimize_upper: T set and decomposition disagree on r");
  const int N = (opts.embed_n == 0) ? r : opts.embed_n;
  if (N < r || N > 2 * r)
    throw BadOptions("optimize_upper: embed_n must lie in [r, 2r]");

  const std::vector<ComplexMatrix>& Ts = T.matrices;
  long long evals = 0;

  double best_val = 0.0;
  ComplexMatrix best_V;
  bool have_best = false;

  if (Ts.empty()) {
    // Nothing to optimize: C(V) = 0 for every V.
    ComplexMatrix V = ComplexMatrix::Identity(N, r);
    if (diag) diag->restarts_upper = 0;
    return {V, 0.0};
  }

  // Homotopy schedule: fraction of the per-restart budget spent at each p.
  const double schedule_p[4] = {2.0, 1.5, 1.2, 1.0};
  const double schedule_frac[4] = {0.15, 0.15, 0.15, 0.55};

  for (int t = 0; t < opts.restarts_upper; ++t) {
    ComplexMatrix U = (t == 0) ? ComplexMatrix(ComplexMatrix::Identity(N, N))
                               : random_unitary(N, mix_seed(opts.seed, 0xB0B0000ULL + t));
    int used = 0;

    {  // candidate: the restart's starting point itself
      detail::UpperEval e0 = detail::upper_objective(Ts, U.leftCols(r), 1.0);
      ++used;
      ++evals;
      if (!have_best || e0.true_value < best_val) {
        best_val = e0.true_value;
        best_V = U.leftCols(r);
        have_best = true;
      }
    }

    for (int seg = 0; seg < 4; ++seg) {
      const double p = schedule_p[seg];
      const int seg_budget = static_cast<int>(schedule_frac[seg] * opts.evals_upper);
      const int seg_end = std::min(used + seg_budget, opts.evals_upper);
      double tau = 0.2;
      RealVector s;
      ComplexMatrix X;
      detail::UpperEval cur = detail::upper_objective(Ts, U.leftCols(r), p, &s, &X);
      ++used;
      ++evals;
      while (used < seg_end) {
        ComplexMatrix D = detail::upper_descent_direction(Ts, U, r, p, s, X);
        const double nD = D.norm();
        if (!(nD > 1e-13)) break;
        D *= std::min(nD, 1.0) / nD;  // cap the raw step length
        bool accepted = false;
        while (used < seg_end) {
          const ComplexMatrix U2 = detail::exp_antihermitian(tau * D) * U;
          detail::UpperEval e2 = detail::upper_objective(Ts, U2.leftCols(r), p, &s, &X);
          ++used;
          ++evals;
          if (e2.true_value < best_val) {
            best_val = e2.true_value;
            best_V = U2.leftCols(r);
          }
          if (e2.objective < cur.objective - 1e-15) {
            U = U2;
            cur = e2;
            tau = std::min(tau * 1.3, 2.0);
            accepted = true;
            break;
          }
          tau *= 0.5;
          if (tau < 1e-12) break;
        }
        if (!accepted) {
          // line search failed: recompute s, X for the unchanged U and move on
          cur = detail::upper_objective(Ts, U.leftCols(r), p, &s, &X);
          ++used;
          ++evals;
          break;
        }
      }
    }
  }

  if (diag) {
    diag->upper_evals += evals;
    diag->restarts_upper = opts.restarts_upper;
  }
  return {best_V, best_val};
}

// ---------------------------------------------------------------------------
// Two-qubit specialization and the Wootters oracle.
// ---------------------------------------------------------------------------

// Exact two-qubit concurrence (this library's normalization): the T set has a
// single matrix, and max(0, lambda_1 - lambda_2 - lambda_3 - lambda_4) of its
// singular values is the convex-roof value, not merely a bound.
inline double two_qubit_exact(const DensityMatrix& rho, double rank_tol = -1.0,
                              double spectral_tol_rel = 1e-10) {
  if (!(rho.dims == BipartiteDims{2, 2})) throw WrongDims("two_qubit_exact: dims must be (2,2)");
  SubnormalizedDecomposition d = decompose(rho, rank_tol);
  TmatrixSet T = extract_T(symmetrize(build_A(d)), rho.dims, spectral_tol_rel);
  if (T.m_eff() == 0) return 0.0;
  RealVector s = singular_values(T.matrices[0]);
  double rest = 0.0;
  for (int i = 1; i < s.size(); ++i) rest += s(i);
  return std::max(0.0, s(0) - rest);
}

// Independent closed-form reference: max(0, sqrt(mu1)-sqrt(mu2)-sqrt(mu3)-sqrt(mu4))
// with mu_i the eigenvalues of rho (sy (x) sy) rho* (sy (x) sy), descending.
// Shares no code with the tensor pipeline.
//
// Computed as the singular values of sqrt(rho) (sy (x) sy) sqrt(rho)*, which
// equal sqrt(mu_i) exactly for PSD rho: squaring that matrix against its
// adjoint gives sqrt(rho) Y rho* Y sqrt(rho), a similarity transform of
// rho Y rho* Y.  The direct non-Hermitian eigensolve turns rounding dust
// around the zero eigenvalues of rank-deficient states into O(sqrt(eps))
// errors after the square root; the SVD route keeps full precision.
inline double wootters_reference(const DensityMatrix& rho) {
  if (!(rho.dims == BipartiteDims{2, 2})) throw WrongDims("wootters_reference: dims must be (2,2)");
  ComplexMatrix Y = ComplexMatrix::Zero(4, 4);  // sigma_y (x) sigma_y
  Y(0, 3) = -1.0;
  Y(1, 2) = 1.0;
  Y(2, 1) = 1.0;
  Y(3, 0) = -1.0;
  HermEig eig = herm_eig(rho.matrix, 1e-8);
  ComplexMatrix sqrt_rho = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k)
    sqrt_rho += std::sqrt(std::max(0.0, eig.values(k))) * eig.vectors.col(k) *
                eig.vectors.col(k).adjoint();
  const RealVector roots = singular_values(sqrt_rho * Y * sqrt_rho.conjugate());
  return std::max(0.0, roots(0) - roots(1) - roots(2) - roots(3));
}

// Convention factor between this library's scale and the Wootters scale,
// fixed empirically by the Bell state (never hard-coded).
inline double convention_kappa() {
  static const double kappa = [] {
    StateVector bell = maximally_entangled(2);
    ComplexMatrix proj = bell.amplitudes * bell.amplitudes.adjoint();
    DensityMatrix rho = validate(proj, BipartiteDims{2, 2});
    return two_qubit_exact(rho) / wootters_reference(rho);
  }();
  return kappa;
}

// ---------------------------------------------------------------------------
// PPT diagnostics.
// ---------------------------------------------------------------------------

inline double negativity(const DensityMatrix& rho) {
  ComplexMatrix pt = partial_transpose(rho.matrix, rho.dims, 2);
  HermEig eig = herm_eig(pt, 1e-8);
  double neg = 0.0;
  for (int k = 0; k < eig.values.size(); ++k)
    if (eig.values(k) < 0.0) neg += -eig.values(k);
  return neg;
}

inline bool is_ppt(const DensityMatrix& rho) {
  ComplexMatrix pt = partial_transpose(rho.matrix, rho.dims, 2);
  HermEig eig = herm_eig(pt, 1e-8);
  return eig.values(eig.values.size() - 1) >= -1e-10;
}

// ---------------------------------------------------------------------------
// Entanglement-of-formation corollary (two-qubit scale).
// ---------------------------------------------------------------------------

// E(c) = h((1 + sqrt(1-c^2))/2) with h the binary entropy; c is a
// Wootters-convention concurrence in [0,1].
inline double eof_lower_2x2(double c_value) {
  if (!(c_value >= 0.0 && c_value <= 1.0))
    throw OutOfRange("eof_lower_2x2: concurrence must be in [0,1]");
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c_value * c_value)));
  auto plogp = [](double p) { return (p <= 0.0) ? 0.0 : -p * std::log2(p); };
  return plogp(x) + plogp(1.0 - x);
}

// ---------------------------------------------------------------------------
// Full pipeline orchestration.
// ---------------------------------------------------------------------------

inline BoundReport bound_report(const DensityMatrix& rho, const OptimizerOptions& opts = {}) {
  const auto t0 = std::chrono::steady_clock::now();

  SubnormalizedDecomposition d = decompose(rho, opts.rank_tol);
  if (d.r() > opts.r_cap)
    throw BadOptions("bound_report: decomposition rank " + std::to_string(d.r()) +
                     " exceeds the configured cap " + std::to_string(opts.r_cap));

  BoundReport rep;
  rep.dims = rho.dims;
  rep.r = d.r();
  rep.negativity = negativity(rho);
  rep.is_ppt = is_ppt(rho);

  TmatrixSet T = extract_T(symmetrize(build_A(d)), rho.dims, opts.spectral_tol);
  rep.m_bound = T.m_bound;
  rep.m_eff = T.m_eff();
  rep.detected = (T.m_eff() > 0);

  if (rep.detected) {
    rep.lower_algebraic = algebraic_lower(T);
    auto [z, lo] = optimize_lower(T, opts, &rep.diag);
    rep.z_best = std::move(z);
    rep.lower_optimized = lo;
    auto [V, up] = optimize_upper(d, T, opts, &rep.diag);
    rep.V_best = std::move(V);
    rep.upper_optimized = up;
  } else {
    // Spectrum of the symmetrized tensor is numerically zero: every ensemble
    // member of every decomposition has zero concurrence.
    rep.V_best = ComplexMatrix::Identity(d.r(), d.r());
    rep.z_best = ZVector{ComplexVector()};
  }

  const auto t1 = std::chrono::steady_clock::now();
  rep.diag.wall_seconds =
      opts.no_timing ? 0.0 : std::chrono::duration<double>(t1 - t0).count();
  return rep;
}

}  // namespace conc
