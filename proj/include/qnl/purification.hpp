#pragma once

// Entanglement purification towards the singlet.
//
// Two copies of a pair state rho (Alice spin, Bob spin) are combined into a
// 16-dimensional register ordered (A_source, B_source, A_target, B_target).
// Alice applies U_A on (A_source, A_target), Bob applies U_B on (B_source,
// B_target); both keep the source pair only for a chosen target outcome.

#include <cmath>
#include <numbers>
#include <string_view>
#include <utility>
#include <vector>

#include "qnl/linalg.hpp"
#include "qnl/states.hpp"
#include "qnl/transform.hpp"

namespace qnl {

enum class Branch { MinusMinus, PlusPlus };

enum class PurifyVariant { MinusOnly, Both };

inline std::string_view to_string(PurifyVariant v) { return v == PurifyVariant::MinusOnly ? "minus-only" : "both"; }

/// U_A = [[-i sigma_y, 0], [0, 1]], U_B = [[i sigma_y, 0], [0, 1]].
inline std::pair<TwoQubitGate, TwoQubitGate> alice_bob_gates() {
  Matrix ua(4, 4), ub(4, 4);
  ua(0, 1) = -1.0;
  ua(1, 0) = 1.0;
  ub(0, 1) = 1.0;
  ub(1, 0) = -1.0;
  ua(2, 2) = ua(3, 3) = ub(2, 2) = ub(3, 3) = 1.0;
  return {TwoQubitGate(std::move(ua)), TwoQubitGate(std::move(ub))};
}

/// Closed form of the (--) branch: entry (I, J) becomes (-1)^(I+J) rho_IJ^2.
inline Matrix signed_square(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw DimensionError("signed_square expects a 4x4 matrix");
  Matrix out(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out(i, j) = ((i + j) % 2 == 0 ? 1.0 : -1.0) * rho(i, j) * rho(i, j);
  return out;
}

/// The literal 16-dimensional route: gates, target projections, partial trace
/// over the target pair.
inline Matrix purify_pipeline(const DensityMatrix& rho, Branch branch) {
  if (rho.dim() != 4) throw DimensionError("purification expects a 4x4 density matrix");
  const auto [ua, ub] = alice_bob_gates();
  const Matrix u = embed_two_qubit(ub.matrix(), 4, 1, 3) * embed_two_qubit(ua.matrix(), 4, 0, 2);
  const Matrix p = branch == Branch::MinusMinus ? projector_down() : projector_up();
  const Matrix filter = tensor(Matrix::identity(4), tensor(p, p));
  const Matrix projected = filter * (u * tensor(rho.matrix(), rho.matrix()) * u.adjoint()) * filter;
  return partial_trace(projected, {2, 2, 2, 2}, {0, 1});
}

struct PurifyStepResult {
  DensityMatrix rho_out;    // subnormalized
  double yield_probability; // tr(rho_out) / tr(rho)^2
  Branch branch;
};

/// One filtering step. The (--) branch is cross-checked against
/// signed_square; the (++) branch has no closed form and comes from the
/// tensor route.
inline PurifyStepResult purify_step(const DensityMatrix& rho, Branch branch) {
  if (rho.dim() != 4) throw DimensionError("purification expects a 4x4 density matrix");
  Matrix out = purify_pipeline(rho, branch);
  if (branch == Branch::MinusMinus && !approx_equal(out, signed_square(rho.matrix()), 1e-12))
    throw VerificationError("signed-square closed form disagrees with the 16-dimensional pipeline");
  const double tin = rho.trace();
  const double y = out.trace().real() / (tin * tin);
  return {DensityMatrix::trusted(std::move(out)), y, branch};
}

/// R = exp(-i pi/4 sigma_x) on each spin.
inline Matrix bilateral_rotation_operator() {
  const Matrix r = expi_hermitian((-std::numbers::pi / 4.0) * pauli::x());
  return tensor(r, r);
}

/// Exchanges psi+ and phi+; psi- and phi- are left unchanged.
inline DensityMatrix bilateral_rotation(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw DimensionError("bilateral rotation expects a 4x4 density matrix");
  const Matrix rr = bilateral_rotation_operator();
  return DensityMatrix::trusted(rr * rho.matrix() * rr.adjoint());
}

struct TrajectoryStep {
  int iteration;
  double fidelity;          // singlet fidelity of the renormalized, rotated state
  double yield;             // survival probability of this step
  double cumulative_yield;  // product of the step yields so far
};

struct Trajectory {
  double initial_fidelity;
  PurifyVariant variant;
  std::vector<TrajectoryStep> steps;  // steps[0] is the input state
  DensityMatrix final_state;
};

/// One full round: filter, renormalize, rotate. For the Both variant the
/// kept state is the mixture of the (--) and (++) outputs.
inline std::pair<DensityMatrix, double> purify_round(const DensityMatrix& rho, PurifyVariant variant) {
  const auto minus = purify_step(rho, Branch::MinusMinus);
  Matrix kept = minus.rho_out.matrix();
  double y = minus.yield_probability;
  if (variant == PurifyVariant::Both) {
    const auto plus = purify_step(rho, Branch::PlusPlus);
    kept += plus.rho_out.matrix();
    y += plus.yield_probability;
  }
  return {bilateral_rotation(DensityMatrix::trusted(std::move(kept)).renormalized()), y};
}

/// Starts from werner(f0) and runs k rounds.
inline Trajectory iterate(double f0, int k, PurifyVariant variant) {
  if (!(f0 >= 0.0 && f0 <= 1.0)) throw RangeError("f0 must lie in [0, 1]");
  if (k < 1) throw RangeError("iteration count must be >= 1");

  DensityMatrix rho = werner(f0);
  Trajectory t{f0, variant, {}, rho};
  t.steps.reserve(static_cast<std::size_t>(k) + 1);
  t.steps.push_back({0, fidelity_singlet(rho), 1.0, 1.0});
  double cumulative = 1.0;
  for (int i = 1; i <= k; ++i) {
    auto [next, y] = purify_round(rho, variant);
    rho = std::move(next);
    cumulative *= y;
    t.steps.push_back({i, fidelity_singlet(rho), y, cumulative});
  }
  t.final_state = rho;
  return t;
}

}  // namespace qnl
