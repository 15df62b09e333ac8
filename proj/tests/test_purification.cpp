#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qnl/purification.hpp"
#include "test_util.hpp"

using namespace qnl;

namespace {

Matrix bell_projector(BellState b) { return bell_state(b).projector(); }

}  // namespace

TEST(Gates, ActionOnBasis) {
  const auto [ua, ub] = alice_bob_gates();
  EXPECT_TRUE(is_unitary(ua.matrix(), 1e-12));
  EXPECT_TRUE(is_unitary(ub.matrix(), 1e-12));
  const std::vector<Complex> pp{1, 0, 0, 0}, pm{0, 1, 0, 0}, mp{0, 0, 1, 0}, mm{0, 0, 0, 1};
  EXPECT_EQ(qnl::apply(ua.matrix(), pp), pm);
  EXPECT_EQ(qnl::apply(ua.matrix(), mp), mp);
  EXPECT_EQ(qnl::apply(ua.matrix(), mm), mm);
  const std::vector<Complex> minus_pm{0, -1, 0, 0};
  EXPECT_EQ(qnl::apply(ub.matrix(), pp), minus_pm);
}

TEST(Gates, SourceUpBlocksArePauliY) {
  const auto [ua, ub] = alice_bob_gates();
  const Matrix minus_i_sy = Complex{0, -1} * pauli::y();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      EXPECT_EQ(ua.matrix()(i, j), minus_i_sy(i, j));
      EXPECT_EQ(ub.matrix()(i, j), -minus_i_sy(i, j));
    }
}

TEST(PurifyStep, SingletHalved) {
  const auto r = purify_step(bell_state(BellState::PsiMinus).density(), Branch::MinusMinus);
  EXPECT_LE(max_abs_diff(r.rho_out.matrix(), 0.5 * bell_projector(BellState::PsiMinus)), 1e-12);
  EXPECT_NEAR(r.yield_probability, 0.5, 1e-12);
}

TEST(PurifyStep, MaximallyMixed) {
  const auto r = purify_step(DensityMatrix(0.25 * Matrix::identity(4)), Branch::MinusMinus);
  EXPECT_LE(max_abs_diff(r.rho_out.matrix(), (1.0 / 16.0) * Matrix::identity(4)), 1e-15);
  EXPECT_NEAR(r.yield_probability, 0.25, 1e-15);
}

TEST(PurifyStep, ClosedFormMatchesOracleAndPipeline) {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto raw = oracle::random_density(4, gen);
    const auto rho = DensityMatrix(testutil::to_matrix(raw));
    const Matrix expected = testutil::to_matrix(oracle::purify_filter(raw, true));
    EXPECT_LE(max_abs_diff(signed_square(rho.matrix()), expected), 1e-12);
    EXPECT_LE(max_abs_diff(purify_pipeline(rho, Branch::MinusMinus), expected), 1e-12);
    EXPECT_LE(max_abs_diff(purify_step(rho, Branch::MinusMinus).rho_out.matrix(), expected), 1e-12);
  }
}

TEST(PurifyStep, PlusBranchMatchesOracle) {
  std::mt19937_64 gen(24);
  for (int trial = 0; trial < 50; ++trial) {
    const auto raw = oracle::random_density(4, gen);
    const auto rho = DensityMatrix(testutil::to_matrix(raw));
    const Matrix expected = testutil::to_matrix(oracle::purify_filter(raw, false));
    const auto r = purify_step(rho, Branch::PlusPlus);
    EXPECT_LE(max_abs_diff(r.rho_out.matrix(), expected), 1e-12);
    EXPECT_EQ(r.branch, Branch::PlusPlus);
  }
}

TEST(PurifyStep, PlusBranchIsNotTheSignedSquare) {
  std::mt19937_64 gen(25);
  const auto rho = testutil::random_density(4, gen);
  EXPECT_GT(max_abs_diff(purify_step(rho, Branch::PlusPlus).rho_out.matrix(), signed_square(rho.matrix())), 1e-3);
}

TEST(PurifyStep, OutputsArePositive) {
  std::mt19937_64 gen(26);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rho = testutil::random_density(4, gen);
    for (auto b : {Branch::MinusMinus, Branch::PlusPlus}) {
      const auto r = purify_step(rho, b);
      EXPECT_TRUE(is_hermitian(r.rho_out.matrix(), 1e-12));
      EXPECT_GE(min_eigenvalue(r.rho_out.matrix()), -1e-10);
      EXPECT_GE(r.yield_probability, 0.0);
      EXPECT_LE(r.yield_probability, 1.0);
    }
  }
}

TEST(PurifyStep, RejectsWrongDimension) {
  EXPECT_THROW(purify_step(DensityMatrix(projector_up()), Branch::MinusMinus), DimensionError);
}

TEST(BilateralRotation, PermutesBellProjectors) {
  const auto rot = [](BellState b) { return bilateral_rotation(bell_state(b).density()).matrix(); };
  EXPECT_LE(max_abs_diff(rot(BellState::PsiMinus), bell_projector(BellState::PsiMinus)), 1e-12);
  EXPECT_LE(max_abs_diff(rot(BellState::PhiMinus), bell_projector(BellState::PhiMinus)), 1e-12);
  EXPECT_LE(max_abs_diff(rot(BellState::PsiPlus), bell_projector(BellState::PhiPlus)), 1e-12);
  EXPECT_LE(max_abs_diff(rot(BellState::PhiPlus), bell_projector(BellState::PsiPlus)), 1e-12);
}

TEST(BilateralRotation, InvolutionOnBellDiagonalStates) {
  std::mt19937_64 gen(27);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, 4> w{u(gen), u(gen), u(gen), u(gen)};
    const double total = w[0] + w[1] + w[2] + w[3];
    Matrix m(4, 4);
    for (std::size_t k = 0; k < 4; ++k) m += (w[k] / total) * bell_projector(kBellStates[k]);
    const DensityMatrix rho(m);
    EXPECT_LE(max_abs_diff(bilateral_rotation(bilateral_rotation(rho)).matrix(), m), 1e-12);
  }
}

TEST(BilateralRotation, PreservesTraceAndSingletPhiMinusWeights) {
  std::mt19937_64 gen(28);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rho = testutil::random_density(4, gen);
    const auto rotated = bilateral_rotation(rho);
    EXPECT_NEAR(rotated.trace(), rho.trace(), 1e-12);
    EXPECT_NEAR(bell_weight(rotated, BellState::PsiMinus), bell_weight(rho, BellState::PsiMinus), 1e-12);
    EXPECT_NEAR(bell_weight(rotated, BellState::PhiMinus), bell_weight(rho, BellState::PhiMinus), 1e-12);
    EXPECT_NEAR(bell_weight(rotated, BellState::PsiPlus), bell_weight(rho, BellState::PhiPlus), 1e-12);
  }
}

TEST(Iterate, SingletIsFixedPoint) {
  const auto t = iterate(1.0, 5, PurifyVariant::MinusOnly);
  for (const auto& s : t.steps) EXPECT_NEAR(s.fidelity, 1.0, 1e-12);
}

TEST(Iterate, MaximallyMixedIsFixedPoint) {
  const auto t = iterate(0.25, 5, PurifyVariant::MinusOnly);
  for (const auto& s : t.steps) EXPECT_NEAR(s.fidelity, 0.25, 1e-12);
  EXPECT_LE(max_abs_diff(t.final_state.matrix(), 0.25 * Matrix::identity(4)), 1e-12);
}

TEST(Iterate, ReportedTrajectory) {
  const auto t = iterate(0.51, 15, PurifyVariant::MinusOnly);
  ASSERT_EQ(t.steps.size(), 16u);
  for (std::size_t i = 0; i < t.steps.size(); ++i) EXPECT_EQ(t.steps[i].iteration, static_cast<int>(i));
  EXPECT_NEAR(t.steps[0].fidelity, 0.51, 1e-15);
  EXPECT_NEAR(t.steps[10].fidelity, 0.809, 0.02);
  EXPECT_GE(t.steps[15].fidelity, 0.999);
  // Regression values from an independent 16x16 numpy evaluation.
  EXPECT_NEAR(t.steps[10].fidelity, 0.8086932073415107, 1e-10);
  EXPECT_NEAR(t.steps[15].fidelity, 0.9999700977033233, 1e-10);
  EXPECT_NEAR(t.steps[1].yield, 0.2800444444444444, 1e-12);
  EXPECT_NEAR(t.steps[10].yield, 0.3280931461984548, 1e-10);
}

TEST(Iterate, AboveHalfConverges) {
  for (double f0 : {0.6, 0.75}) {
    const auto t = iterate(f0, 15, PurifyVariant::MinusOnly);
    EXPECT_GT(t.steps[10].fidelity, f0);
    EXPECT_GT(t.steps[15].fidelity, 0.99);
  }
  EXPECT_NEAR(iterate(0.6, 10, PurifyVariant::MinusOnly).steps[10].fidelity, 0.9999999930772793, 1e-10);
}

TEST(Iterate, StatesStayPhysical) {
  DensityMatrix rho = werner(0.55);
  for (int i = 0; i < 12; ++i) {
    rho = purify_round(rho, PurifyVariant::MinusOnly).first;
    EXPECT_GE(min_eigenvalue(rho.matrix()), -1e-10);
    EXPECT_TRUE(is_hermitian(rho.matrix(), 1e-12));
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
  }
}

TEST(Iterate, BothVariantYieldsMore) {
  const auto minus = iterate(0.51, 15, PurifyVariant::MinusOnly);
  const auto both = iterate(0.51, 15, PurifyVariant::Both);
  for (std::size_t i = 1; i < minus.steps.size(); ++i) {
    EXPECT_GE(both.steps[i].yield, minus.steps[i].yield);
    EXPECT_GE(both.steps[i].cumulative_yield, minus.steps[i].cumulative_yield);
  }
  EXPECT_NEAR(both.steps[1].yield, 0.5600888888888887, 1e-12);
}

TEST(Iterate, CumulativeYieldIsProduct) {
  const auto t = iterate(0.7, 6, PurifyVariant::Both);
  double acc = 1.0;
  for (const auto& s : t.steps) {
    if (s.iteration > 0) acc *= s.yield;
    EXPECT_NEAR(s.cumulative_yield, acc, 1e-15);
  }
}

TEST(Iterate, RangeErrors) {
  EXPECT_THROW(iterate(1.5, 3, PurifyVariant::MinusOnly), RangeError);
  EXPECT_THROW(iterate(0.5, 0, PurifyVariant::MinusOnly), RangeError);
}
