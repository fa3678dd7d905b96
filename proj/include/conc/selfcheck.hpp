#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "conc/bounds.hpp"
#include "conc/linalg.hpp"
#include "conc/states.hpp"
#include "conc/tensor.hpp"
#include "conc/types.hpp"

namespace conc {

// ---------------------------------------------------------------------------
// Built-in oracle suites.  Each suite runs a batch of randomized consistency
// checks between independent computation routes; failures are reported, never
// thrown.  Deterministic for a fixed seed, and designed to stay green across
// seeds (the tolerances are seed-robust).
// ---------------------------------------------------------------------------

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  std::string first_failure;  // empty when all checks passed

  bool ok() const { return passed == total; }
};

namespace detail {

inline StateVector random_unnormalized_state(const BipartiteDims& dims, Rng& rng, double scale) {
  StateVector v;
  v.dims = dims;
  v.amplitudes.resize(dims.total());
  for (int i = 0; i < dims.total(); ++i) v.amplitudes(i) = rng.complex_normal();
  v.amplitudes *= scale / v.amplitudes.norm();
  return v;
}

inline void record(SuiteResult& s, bool pass, const std::string& what) {
  ++s.total;
  if (pass) {
    ++s.passed;
  } else if (s.first_failure.empty()) {
    s.first_failure = what;
  }
}

inline ComplexMatrix random_isometry(int N, int r, std::uint64_t seed) {
  return ComplexMatrix(random_unitary(N, seed).leftCols(r));
}

}  // namespace detail

// f is linear in slots 1 and 3 and antilinear in slots 2 and 4.
inline SuiteResult suite_f_linearity(std::uint64_t seed) {
  SuiteResult s{"f-linearity"};
  const BipartiteDims dims{2, 3};
  Rng rng(mix_seed(seed, 0xF11EA7ULL));
  for (int trial = 0; trial < 12; ++trial) {
    StateVector base[4];
    for (auto& b : base) b = detail::random_unnormalized_state(dims, rng, 1.2);
    StateVector extra = detail::random_unnormalized_state(dims, rng, 0.9);
    const Complex a(rng.normal(), rng.normal());
    const Complex b(rng.normal(), rng.normal());
    for (int slot = 0; slot < 4; ++slot) {
      StateVector mixed;
      mixed.dims = dims;
      mixed.amplitudes = a * base[slot].amplitudes + b * extra.amplitudes;
      StateVector args[4] = {base[0], base[1], base[2], base[3]};
      args[slot] = mixed;
      const Complex lhs = f_function(args[0], args[1], args[2], args[3]);
      StateVector alt[4] = {base[0], base[1], base[2], base[3]};
      alt[slot] = extra;
      const Complex f_base = f_function(base[0], base[1], base[2], base[3]);
      const Complex f_alt = f_function(alt[0], alt[1], alt[2], alt[3]);
      const bool linear_slot = (slot == 0 || slot == 2);
      const Complex rhs = linear_slot ? a * f_base + b * f_alt
                                      : std::conj(a) * f_base + std::conj(b) * f_alt;
      detail::record(s, std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)),
                     (linear_slot ? "linearity" : "antilinearity") + std::string(" in slot ") +
                         std::to_string(slot + 1));
    }
  }
  return s;
}

// The retained eigensystem reproduces the symmetrized tensor unfolding:
// M[(j,k),(l,m)] = sum_alpha T^alpha(j,l) conj(T^alpha(k,m)).
inline SuiteResult suite_tensor_reconstruction(std::uint64_t seed) {
  SuiteResult s{"tensor-reconstruction"};
  const BipartiteDims cases[3] = {{2, 2}, {2, 3}, {3, 3}};
  int idx = 0;
  for (const BipartiteDims& dims : cases) {
    for (int trial = 0; trial < 6; ++trial) {
      const int rank = 1 + (trial % 4);
      DensityMatrix rho = validate(random_density_matrix(dims, rank, mix_seed(seed, 0x8ecULL + idx++)), dims);
      SubnormalizedDecomposition d = decompose(rho);
      ConcurrenceTensor S = symmetrize(build_A(d));
      TmatrixSet T = extract_T(S, dims);
      const int r = d.r();
      ComplexMatrix rebuilt = ComplexMatrix::Zero(r * r, r * r);
      for (const ComplexMatrix& t : T.matrices)
        for (int j = 0; j < r; ++j)
          for (int k = 0; k < r; ++k)
            for (int l = 0; l < r; ++l)
              for (int m = 0; m < r; ++m)
                rebuilt(j * r + k, l * r + m) += t(j, k) * std::conj(t(l, m));
      const double err = (rebuilt - S.unfolding).cwiseAbs().maxCoeff();
      detail::record(s, err <= 1e-9,
                     "reconstruction error " + std::to_string(err) + " at dims (" +
                         std::to_string(dims.n1) + "," + std::to_string(dims.n2) + ")");
    }
  }
  return s;
}

// Four routes to the ensemble objective agree: the rank-4 tensor contraction,
// the T-matrix form, the per-member f-based concurrence sum, and the
// per-member Schmidt-value route (which shares no code with f and therefore
// catches sign mutations inside f).
inline SuiteResult suite_evaluator_equivalence(std::uint64_t seed) {
  SuiteResult s{"evaluator-equivalence"};
  const BipartiteDims cases[2] = {{2, 3}, {3, 3}};
  int idx = 0;
  for (const BipartiteDims& dims : cases) {
    for (int trial = 0; trial < 5; ++trial) {
      const int rank = 2 + (trial % 3);
      DensityMatrix rho = validate(random_density_matrix(dims, rank, mix_seed(seed, 0xE0AULL + idx)), dims);
      SubnormalizedDecomposition d = decompose(rho);
      ConcurrenceTensor A = build_A(d);
      TmatrixSet T = extract_T(symmetrize(A), dims);
      for (int v = 0; v < 3; ++v) {
        const int N = d.r() + (v % 2);
        ComplexMatrix V = detail::random_isometry(N, d.r(), mix_seed(seed, 0x15e7ULL + 10 * idx + v));
        const double via_A = capc_via_A(A, V);
        const double via_T = capc_C(T, V);
        SubnormalizedDecomposition moved = transform_decomposition(d, V);
        double via_members = 0.0;
        double via_schmidt = 0.0;
        for (const StateVector& phi : moved.vectors) {
          via_members += pure_concurrence(phi);
          via_schmidt += schmidt_concurrence(phi);
        }
        detail::record(s, std::abs(via_A - via_T) <= 1e-9, "tensor vs T-matrix route");
        detail::record(s, std::abs(via_T - via_members) <= 1e-9, "T-matrix vs member-sum route");
        detail::record(s, std::abs(via_members - via_schmidt) <= 1e-9,
                       "member-sum vs Schmidt route");
      }
      ++idx;
    }
  }
  return s;
}

// The pipeline outputs do not depend on which decomposition represents rho:
// the retained spectrum and the algebraic bound match between the spectral
// decomposition and an isometry-transformed one.
inline SuiteResult suite_decomposition_invariance(std::uint64_t seed) {
  SuiteResult s{"decomposition-invariance"};
  const BipartiteDims cases[2] = {{2, 3}, {3, 3}};
  int idx = 0;
  for (const BipartiteDims& dims : cases) {
    for (int trial = 0; trial < 5; ++trial) {
      const int rank = 2 + (trial % 2);
      DensityMatrix rho = validate(random_density_matrix(dims, rank, mix_seed(seed, 0xD1CULL + idx)), dims);
      SubnormalizedDecomposition d = decompose(rho);
      const int N = d.r() + 1 + (trial % 2);
      ComplexMatrix V = detail::random_isometry(N, d.r(), mix_seed(seed, 0xF0CULL + idx));
      SubnormalizedDecomposition moved = transform_decomposition(d, V);

      const double rho_err = (moved.reconstruct() - rho.matrix).cwiseAbs().maxCoeff();
      detail::record(s, rho_err <= 1e-10, "transformed decomposition reconstructs rho");

      TmatrixSet T1 = extract_T(symmetrize(build_A(d)), dims);
      TmatrixSet T2 = extract_T(symmetrize(build_A(moved)), dims);
      bool mu_match = (T1.m_eff() == T2.m_eff());
      if (mu_match)
        for (int a = 0; a < T1.m_eff(); ++a)
          mu_match = mu_match && std::abs(T1.mu(a) - T2.mu(a)) <= 1e-9;
      detail::record(s, mu_match, "retained spectrum is decomposition-invariant");
      if (T1.m_eff() > 0 && T2.m_eff() > 0)
        detail::record(s, std::abs(algebraic_lower(T1) - algebraic_lower(T2)) <= 1e-8,
                       "algebraic bound is decomposition-invariant");
      ++idx;
    }
  }
  return s;
}

// Pure-state concurrence from f equals the Schmidt-coefficient expression.
inline SuiteResult suite_schmidt_crosscheck(std::uint64_t seed) {
  SuiteResult s{"schmidt-crosscheck"};
  const BipartiteDims cases[4] = {{2, 2}, {2, 3}, {3, 3}, {3, 4}};
  int idx = 0;
  for (const BipartiteDims& dims : cases) {
    Rng rng(mix_seed(seed, 0x5cccULL + idx++));
    for (int trial = 0; trial < 10; ++trial) {
      const double scale = 0.25 + 1.5 * rng.uniform();  // subnormalized and supernormalized
      StateVector psi = detail::random_unnormalized_state(dims, rng, scale);
      const double via_f = pure_concurrence(psi);
      const double via_schmidt = schmidt_concurrence(psi);
      detail::record(s, std::abs(via_f - via_schmidt) <= 1e-10,
                     "pure concurrence routes differ by " + std::to_string(via_f - via_schmidt));
    }
  }
  return s;
}

// Two-qubit pipeline values agree with the independent spin-flip closed form
// up to the convention factor fixed by the Bell state.
inline SuiteResult suite_two_qubit_consistency(std::uint64_t seed) {
  SuiteResult s{"two-qubit-consistency"};
  const double kappa = convention_kappa();
  for (int trial = 0; trial < 40; ++trial) {
    const int rank = 1 + (trial % 4);
    DensityMatrix rho = validate(random_density_matrix({2, 2}, rank, mix_seed(seed, 0x22bULL + trial)), {2, 2});
    const double mine = two_qubit_exact(rho);
    const double reference = kappa * wootters_reference(rho);
    detail::record(s, std::abs(mine - reference) <= 1e-8,
                   "pipeline vs spin-flip mismatch " + std::to_string(mine - reference));
    TmatrixSet T = extract_T(symmetrize(build_A(decompose(rho))), rho.dims);
    detail::record(s, T.m_eff() <= 1, "two-qubit retained count exceeds 1");
  }
  return s;
}

// The retained T count never exceeds the antisymmetric-subspace dimension,
// and everything past it is numerically zero relative to the leading mu.
inline SuiteResult suite_rank_bound(std::uint64_t seed) {
  SuiteResult s{"rank-bound"};
  const BipartiteDims cases[3] = {{2, 2}, {2, 3}, {3, 3}};
  int idx = 0;
  for (const BipartiteDims& dims : cases) {
    const int m = antisym_dim(dims);
    for (int trial = 0; trial < 12; ++trial) {
      const int max_rank = dims.total();
      const int rank = 1 + (trial % max_rank);
      DensityMatrix rho = validate(random_density_matrix(dims, rank, mix_seed(seed, 0x7a2bULL + idx++)), dims);
      TmatrixSet T = extract_T(symmetrize(build_A(decompose(rho))), dims);
      detail::record(s, T.m_eff() <= m,
                     "retained count " + std::to_string(T.m_eff()) + " exceeds bound " +
                         std::to_string(m));
      const double mu1 = (T.mu_all.size() > 0) ? T.mu_all(0) : 0.0;
      bool tail_ok = true;
      for (int k = m; k < T.mu_all.size(); ++k)
        tail_ok = tail_ok && (T.mu_all(k) <= 1e-10 * std::max(mu1, 1e-300));
      detail::record(s, tail_ok, "spectrum tail above 1e-10 * mu_1");
    }
  }
  return s;
}

inline std::vector<SuiteResult> run_selfcheck(std::uint64_t seed = 0) {
  return {
      suite_f_linearity(seed),
      suite_tensor_reconstruction(seed),
      suite_evaluator_equivalence(seed),
      suite_decomposition_invariance(seed),
      suite_schmidt_crosscheck(seed),
      suite_two_qubit_consistency(seed),
      suite_rank_bound(seed),
  };
}

}  // namespace conc
