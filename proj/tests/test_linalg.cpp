#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "conc/linalg.hpp"
#include "conc/states.hpp"

using namespace conc;

TEST_CASE("splitmix64 mixing decorrelates seeds and streams") {
  CHECK(mix_seed(0, 0) != mix_seed(0, 1));
  CHECK(mix_seed(0, 0) != mix_seed(1, 0));
  CHECK(mix_seed(7, 3) == mix_seed(7, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 64; ++s)
    for (std::uint64_t t = 0; t < 8; ++t) seen.insert(mix_seed(s, t));
  CHECK(seen.size() == 64 * 8);
}

TEST_CASE("rng streams are deterministic and sane") {
  Rng a(42), b(42), c(43);
  bool identical = true;
  bool all_in_range = true;
  double mean = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double x = a.uniform();
    identical = identical && (x == b.uniform());
    all_in_range = all_in_range && (x >= 0.0 && x < 1.0);
    mean += x;
  }
  mean /= 2000.0;
  CHECK(identical);
  CHECK(all_in_range);
  CHECK(std::abs(mean - 0.5) < 0.05);
  CHECK(c.uniform() != Rng(42).uniform());

  Rng n1(5), n2(5);
  double var = 0.0;
  bool norm_identical = true;
  for (int i = 0; i < 4000; ++i) {
    const double x = n1.normal();
    norm_identical = norm_identical && (x == n2.normal());
    var += x * x;
  }
  CHECK(norm_identical);
  CHECK(std::abs(var / 4000.0 - 1.0) < 0.1);
}

TEST_CASE("herm_eig sorts descending and reproduces the matrix") {
  ComplexMatrix H(3, 3);
  H << Complex(2, 0), Complex(0, 1), Complex(0.5, 0),
       Complex(0, -1), Complex(-1, 0), Complex(0, 0),
       Complex(0.5, 0), Complex(0, 0), Complex(0.5, 0);
  HermEig e = herm_eig(H);
  REQUIRE(e.values.size() == 3);
  CHECK(e.values(0) >= e.values(1));
  CHECK(e.values(1) >= e.values(2));
  ComplexMatrix rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.adjoint();
  CHECK((rebuilt - H).cwiseAbs().maxCoeff() < 1e-12);
  ComplexMatrix gram = e.vectors.adjoint() * e.vectors;
  CHECK((gram - ComplexMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("herm_eig identity eigenvalues are all one") {
  HermEig e = herm_eig(ComplexMatrix::Identity(3, 3));
  for (int k = 0; k < 3; ++k) CHECK(e.values(k) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("herm_eig rejects non-hermitian input") {
  ComplexMatrix M(2, 2);
  M << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  CHECK_THROWS_AS(herm_eig(M), NotHermitian);
  CHECK_THROWS_AS(herm_eig(ComplexMatrix::Zero(2, 3)), DimensionMismatch);
}

TEST_CASE("singular values are descending and match a known matrix") {
  ComplexMatrix M(2, 2);
  M << Complex(3, 0), Complex(0, 0), Complex(0, 0), Complex(-2, 0);
  RealVector s = singular_values(M);
  CHECK(s(0) == Catch::Approx(3.0).margin(1e-13));
  CHECK(s(1) == Catch::Approx(2.0).margin(1e-13));
}

TEST_CASE("cross_reduced matches the dense partial trace") {
  const BipartiteDims dims{2, 3};
  StateVector a = random_state_vector(dims, 11);
  StateVector b = random_state_vector(dims, 12);
  const ComplexMatrix outer = a.amplitudes * b.amplitudes.adjoint();

  // traced subsystem 2: result is n1 x n1
  ComplexMatrix r2 = cross_reduced(a, b, 2);
  ComplexMatrix expect2 = ComplexMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 3; ++j) expect2(i, k) += outer(i * 3 + j, k * 3 + j);
  CHECK((r2 - expect2).cwiseAbs().maxCoeff() < 1e-14);

  // traced subsystem 1: result is n2 x n2
  ComplexMatrix r1 = cross_reduced(a, b, 1);
  ComplexMatrix expect1 = ComplexMatrix::Zero(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 2; ++i) expect1(j, l) += outer(i * 3 + j, i * 3 + l);
  CHECK((r1 - expect1).cwiseAbs().maxCoeff() < 1e-14);

  // diagonal case: tr(reduced) = <b|a>
  ComplexMatrix d = cross_reduced(a, a, 2);
  CHECK(std::abs(d.trace() - Complex(1.0, 0.0)) < 1e-12);
}

TEST_CASE("partial transpose is an involution and preserves the trace") {
  const BipartiteDims dims{2, 3};
  ComplexMatrix rho = random_density_matrix(dims, 4, 99);
  ComplexMatrix pt = partial_transpose(rho, dims, 2);
  CHECK(std::abs(pt.trace() - rho.trace()) < 1e-14);
  CHECK((partial_transpose(pt, dims, 2) - rho).cwiseAbs().maxCoeff() == 0.0);
  // transposing both subsystems gives the full transpose
  ComplexMatrix both = partial_transpose(partial_transpose(rho, dims, 1), dims, 2);
  CHECK((both - rho.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random unitaries are unitary and deterministic") {
  ComplexMatrix U = random_unitary(5, 7);
  CHECK((U.adjoint() * U - ComplexMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((U - random_unitary(5, 7)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((U - random_unitary(5, 8)).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("random density matrices are states with the requested rank") {
  const BipartiteDims dims{3, 3};
  ComplexMatrix rho = random_density_matrix(dims, 2, 5);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-13);
  CHECK((rho - rho.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  HermEig e = herm_eig(rho);
  CHECK(e.values(0) > 0.0);
  CHECK(e.values(1) > 0.0);
  for (int k = 2; k < 9; ++k) CHECK(std::abs(e.values(k)) < 1e-12);
  CHECK_THROWS_AS(random_density_matrix(dims, 0, 1), BadRank);
  CHECK_THROWS_AS(random_density_matrix(dims, 10, 1), BadRank);
}

TEST_CASE("random state vectors are normalized and reproducible") {
  StateVector v = random_state_vector({3, 4}, 2);
  CHECK(v.amplitudes.size() == 12);
  CHECK(std::abs(v.norm() - 1.0) < 1e-13);
  StateVector w = random_state_vector({3, 4}, 2);
  CHECK((v.amplitudes - w.amplitudes).cwiseAbs().maxCoeff() == 0.0);
}
