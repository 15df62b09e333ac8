#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qnl/linalg.hpp"
#include "qnl/states.hpp"
#include "test_util.hpp"

using namespace qnl;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix basis_projector(std::size_t n, std::size_t k) {
  Matrix m(n, n);
  m(k, k) = 1.0;
  return m;
}

}  // namespace

TEST(Tensor, IdentityTimesIdentity) {
  EXPECT_TRUE(approx_equal(tensor(Matrix::identity(2), Matrix::identity(2)), Matrix::identity(4), 0.0));
}

TEST(Tensor, BasisProjectorProduct) {
  const Matrix got = tensor(basis_projector(2, 0), basis_projector(2, 1));
  EXPECT_TRUE(approx_equal(got, basis_projector(4, 1), 0.0));
}

TEST(Tensor, BlockLayoutOfControlledFlip) {
  // P+ x sigma_x + P- x 1 is [[sigma_x, 0], [0, 1]] with the left factor most significant.
  const Matrix u = tensor(projector_up(), pauli::x()) + tensor(projector_down(), pauli::identity());
  const Matrix expected{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  EXPECT_TRUE(approx_equal(u, expected, 0.0));
}

TEST(Tensor, AssociativeAndMixedProduct) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testutil::random_matrix(2, 2, gen), b = testutil::random_matrix(3, 3, gen);
    const auto c = testutil::random_matrix(2, 2, gen), d = testutil::random_matrix(3, 3, gen);
    EXPECT_LE(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))), 1e-14);
    EXPECT_LE(max_abs_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)), 1e-12);
  }
}

TEST(PartialTrace, RecoversProductFactor) {
  const auto rho = spin_state(1.1, 0.3).density().matrix();
  const Matrix m = tensor(rho, projector_down());
  EXPECT_LE(max_abs_diff(partial_trace(m, {2, 2}, {0}), rho), 1e-15);
}

TEST(PartialTrace, IdentityGivesScaledIdentity) {
  EXPECT_TRUE(approx_equal(partial_trace(Matrix::identity(4), {2, 2}, {1}), 2.0 * Matrix::identity(2), 0.0));
}

TEST(PartialTrace, SingletMarginalsAreMaximallyMixed) {
  const Matrix singlet = bell_state(BellState::PsiMinus).projector();
  EXPECT_LE(max_abs_diff(partial_trace(singlet, {2, 2}, {0}), 0.5 * Matrix::identity(2)), 1e-15);
  EXPECT_LE(max_abs_diff(partial_trace(singlet, {2, 2}, {1}), 0.5 * Matrix::identity(2)), 1e-15);
}

TEST(PartialTrace, KeepAllIsIdentityMap) {
  std::mt19937_64 gen(3);
  const auto m = testutil::random_matrix(6, 6, gen);
  EXPECT_TRUE(approx_equal(partial_trace(m, {2, 3}, {0, 1}), m, 0.0));
}

TEST(PartialTrace, DimensionMismatchThrows) {
  EXPECT_THROW(partial_trace(Matrix::identity(4), {2, 3}, {0}), DimensionError);
  EXPECT_THROW(partial_trace(Matrix(2, 3), {2}, {0}), DimensionError);
}

TEST(PartialTrace, ProductPropertyRandom) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testutil::random_matrix(3, 3, gen), b = testutil::random_matrix(2, 2, gen);
    EXPECT_LE(max_abs_diff(partial_trace(tensor(a, b), {3, 2}, {0}), a * b.trace()), 1e-12);
    EXPECT_LE(max_abs_diff(partial_trace(tensor(a, b), {3, 2}, {1}), b * a.trace()), 1e-12);
  }
}

TEST(Eigen, PauliAndProjectorSpectra) {
  const auto z = eigvals_hermitian(pauli::z());
  EXPECT_NEAR(z[0], -1.0, 1e-14);
  EXPECT_NEAR(z[1], 1.0, 1e-14);
  const auto p = eigvals_hermitian(projector_down());
  EXPECT_NEAR(p[0], 0.0, 1e-14);
  EXPECT_NEAR(p[1], 1.0, 1e-14);
  const auto y = eigvals_hermitian(pauli::y());
  EXPECT_NEAR(y[0], -1.0, 1e-14);
  EXPECT_NEAR(y[1], 1.0, 1e-14);
}

TEST(Eigen, SumOfTwoProjectorsMatchesQuadraticFormula) {
  // Oracle: eigenvalues of a 2x2 Hermitian matrix from its trace and determinant.
  for (double alpha : {0.2, 0.7, 1.0, 1.4}) {
    const PureState a({std::cos(alpha / 2), std::sin(alpha / 2)});
    const PureState b({std::cos(alpha / 2), -std::sin(alpha / 2)});
    const Matrix m = a.projector() + b.projector();
    const double tr = m.trace().real();
    const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    const double disc = std::sqrt(tr * tr / 4 - det);
    const auto ev = eigvals_hermitian(m);
    EXPECT_NEAR(ev[0], tr / 2 - disc, 1e-12);
    EXPECT_NEAR(ev[1], tr / 2 + disc, 1e-12);
    EXPECT_NEAR(ev[0], 1.0 - std::cos(alpha), 1e-12);
    EXPECT_NEAR(ev[1], 1.0 + std::cos(alpha), 1e-12);
  }
}

TEST(Eigen, RecoversKnownSpectrumUnderRandomUnitary) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t n : {2u, 3u, 4u, 8u, 16u}) {
    std::vector<double> d(n);
    for (auto& v : d) v = u(gen);
    const Matrix q = testutil::random_unitary(n, gen);
    const Matrix m = q * Matrix::diagonal(d) * q.adjoint();
    auto ev = eigvals_hermitian(m);
    std::sort(d.begin(), d.end());
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(ev[k], d[k], 1e-8) << "n=" << n;
    EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), m.trace().real(), 1e-9);
  }
}

TEST(Eigen, EigenvectorsDiagonalize) {
  std::mt19937_64 gen(9);
  const Matrix h = testutil::to_matrix(oracle::random_density(6, gen));
  const auto [values, vecs] = eigh(h);
  EXPECT_TRUE(is_unitary(vecs, 1e-12));
  EXPECT_LE(max_abs_diff(vecs.adjoint() * h * vecs, Matrix::diagonal(values)), 1e-12);
}

TEST(Eigen, RejectsNonHermitian) {
  Matrix m{{1, 2}, {0, 1}};
  EXPECT_THROW(eigvals_hermitian(m), NotHermitianError);
  EXPECT_THROW(eigvals_hermitian(Matrix(2, 3)), DimensionError);
}

TEST(Expi, ZeroGeneratorIsIdentity) {
  EXPECT_LE(max_abs_diff(expi_hermitian(Matrix(3, 3)), Matrix::identity(3)), 1e-15);
}

TEST(Expi, PauliHalfTurn) {
  // cos(pi/2) 1 + i sin(pi/2) sigma_x = i sigma_x
  const Matrix got = expi_hermitian((kPi / 2) * pauli::x());
  EXPECT_LE(max_abs_diff(got, Complex{0, 1} * pauli::x()), 1e-14);
}

TEST(Expi, ZxGateIsBlockDiagonalInSourceBasis) {
  const Matrix u = expi_hermitian((kPi / 8) * tensor(pauli::z(), pauli::x()));
  EXPECT_TRUE(is_unitary(u, 1e-10));
  // Source up block: exp(+i pi/8 sigma_x); source down block: exp(-i pi/8 sigma_x).
  const double c = std::cos(kPi / 8), s = std::sin(kPi / 8);
  const Matrix expected{{c, Complex{0, s}, 0, 0}, {Complex{0, s}, c, 0, 0},
                        {0, 0, c, Complex{0, -s}}, {0, 0, Complex{0, -s}, c}};
  EXPECT_LE(max_abs_diff(u, expected), 1e-14);
}

TEST(Expi, InverseProperty) {
  std::mt19937_64 gen(21);
  for (std::size_t n : {2u, 4u, 16u}) {
    const Matrix h = 5.0 * testutil::to_matrix(oracle::random_density(n, gen));
    EXPECT_LE(max_abs_diff(expi_hermitian(h) * expi_hermitian(-h), Matrix::identity(n)), 1e-10);
    EXPECT_TRUE(is_unitary(expi_hermitian(h), 1e-10));
  }
}

TEST(Expi, RejectsNonHermitian) { EXPECT_THROW(expi_hermitian(Matrix{{0, 1}, {0, 0}}), NotHermitianError); }

TEST(EmbedTwoQubit, MatchesTensorOnAdjacentQubits) {
  std::mt19937_64 gen(2);
  const Matrix g = testutil::random_unitary(4, gen);
  EXPECT_LE(max_abs_diff(embed_two_qubit(g, 3, 0, 1), tensor(g, Matrix::identity(2))), 1e-15);
  EXPECT_LE(max_abs_diff(embed_two_qubit(g, 3, 1, 2), tensor(Matrix::identity(2), g)), 1e-15);
}

TEST(EmbedTwoQubit, ReversedOrderSwapsFactors) {
  const Matrix a{{1, 2}, {3, 4}}, b{{5, 6}, {7, 8}};
  EXPECT_LE(max_abs_diff(embed_two_qubit(tensor(a, b), 2, 1, 0), tensor(b, a)), 1e-15);
}
