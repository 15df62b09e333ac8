#pragma once

// The filtering transformation on two copies of a spin-1/2 state:
//
//   (1 x P-) U (rho x rho) U^dag (1 x P-) = rho_out x P-
//
// With U = XOR the source spin leaves with every matrix element squared.
// The element-wise closed form is the fast path; the tensor pipeline is kept
// as the cross-check.

#include <cmath>
#include <numbers>
#include <vector>

#include "qnl/linalg.hpp"
#include "qnl/states.hpp"

namespace qnl {

class TwoQubitGate {
 public:
  explicit TwoQubitGate(Matrix u) : u_(std::move(u)) {
    if (u_.rows() != 4 || u_.cols() != 4) throw DimensionError("two-qubit gate must be 4x4");
    if (!is_unitary(u_, 1e-10)) throw RangeError("two-qubit gate is not unitary");
  }
  const Matrix& matrix() const { return u_; }

 private:
  Matrix u_;
};

/// Block matrix [[sigma_x, 0], [0, 1]]: flips the target iff the source is up.
inline TwoQubitGate xor_gate() {
  Matrix u(4, 4);
  u(0, 1) = u(1, 0) = 1.0;
  u(2, 2) = u(3, 3) = 1.0;
  return TwoQubitGate(std::move(u));
}

/// exp(i pi/8 sigma_z x sigma_x).
inline TwoQubitGate exp_zx_gate() {
  return TwoQubitGate(expi_hermitian((std::numbers::pi / 8.0) * tensor(pauli::z(), pauli::x())));
}

struct TransformResult {
  DensityMatrix rho_out;       // trace == success_probability
  double success_probability;  // conditional on the input trace
  bool factored = true;        // projected state equals rho_out x P- (within 1e-10)
};

/// Runs the literal two-copy pipeline with an arbitrary gate. For a
/// subnormalized input the output is scaled by 1/tr(rho)^2, so its trace is
/// the conditional success probability.
inline TransformResult pipeline(const DensityMatrix& rho, const TwoQubitGate& gate) {
  if (rho.dim() != 2) throw DimensionError("pipeline expects a 2x2 density matrix");
  const double tin = rho.trace();
  const Matrix& u = gate.matrix();
  const Matrix filter = tensor(pauli::identity(), projector_down());
  const Matrix projected = filter * (u * tensor(rho.matrix(), rho.matrix()) * u.adjoint()) * filter;

  Matrix source = partial_trace(projected, {2, 2}, {0});
  const bool factored = approx_equal(projected, tensor(source, projector_down()), 1e-10);
  source *= Complex{1.0 / (tin * tin), 0.0};
  const double p = source.trace().real();
  return {DensityMatrix::trusted(std::move(source)), p, factored};
}

/// Element-wise squaring (rho_ij)^2. Equal to pipeline(rho, xor_gate()).
inline TransformResult square_elements(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionError("square_elements expects a 2x2 density matrix");
  const double tin = rho.trace();
  Matrix out(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out(i, j) = rho(i, j) * rho(i, j) / (tin * tin);
  const double p = out.trace().real();
  return {DensityMatrix::trusted(std::move(out)), p, true};
}

/// Generalized XOR on 1 source + n_targets targets (source most significant):
/// flips every target iff the source is up.
inline Matrix generalized_xor(std::size_t n_targets) {
  const std::size_t dim = std::size_t{1} << (n_targets + 1);
  const std::size_t half = dim / 2;
  Matrix u(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const bool source_up = col < half;
    const std::size_t row = source_up ? (col ^ (half - 1)) : col;
    u(row, col) = 1.0;
  }
  return u;
}

/// Tensor-product route for the (n+1)-th power: n+1 copies, generalized XOR,
/// all targets projected onto spin down, source kept.
inline Matrix power_pipeline(const DensityMatrix& rho, int n) {
  if (n < 1 || n > 5) throw RangeError("power pipeline supports 1 <= n <= 5");
  const auto copies = static_cast<std::size_t>(n) + 1;
  Matrix big = rho.matrix();
  Matrix filter = pauli::identity();
  for (std::size_t k = 1; k < copies; ++k) {
    big = tensor(big, rho.matrix());
    filter = tensor(filter, projector_down());
  }
  const Matrix u = generalized_xor(copies - 1);
  const Matrix projected = filter * (u * big * u.adjoint()) * filter;
  const std::vector<std::size_t> dims(copies, 2);
  const std::size_t keep = 0;
  return partial_trace(projected, dims, std::span<const std::size_t>(&keep, 1));
}

/// Every element raised to the power n+1. For n <= 3 the result is checked
/// against power_pipeline.
inline TransformResult power_transform(const DensityMatrix& rho, int n) {
  if (rho.dim() != 2) throw DimensionError("power_transform expects a 2x2 density matrix");
  if (n < 1) throw RangeError("power_transform requires n >= 1");
  const double tin = rho.trace();
  const double scale = std::pow(tin, n + 1);
  Matrix out(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) out(i, j) = std::pow(rho(i, j), n + 1) / scale;

  if (n <= 3) {
    Matrix check = power_pipeline(rho, n);
    check *= Complex{1.0 / scale, 0.0};
    if (!approx_equal(out, check, 1e-12))
      throw VerificationError("power transform disagrees with the generalized-XOR pipeline");
  }
  const double p = out.trace().real();
  return {DensityMatrix::trusted(std::move(out)), p, true};
}

/// Involution on C^d x C^d exchanging |i,i> and |i,d-1> for every i < d-1.
inline Matrix qudit_permutation(std::size_t d) {
  const std::size_t dim = d * d;
  Matrix p(dim, dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const std::size_t src = idx / d, tgt = idx % d;
    std::size_t image = idx;
    if (src != d - 1) {
      if (tgt == src) image = src * d + (d - 1);
      else if (tgt == d - 1) image = src * d + src;
    }
    p(image, idx) = 1.0;
  }
  return p;
}

/// Qudit squaring of a pure state: psi x psi, permute, project the target
/// onto level d-1. Output components are psi_i^2 (subnormalized).
inline PureState qudit_square(const PureState& psi) {
  const std::size_t d = psi.dim();
  if (d < 2) throw DimensionError("qudit_square requires d >= 2");
  if (!psi.normalized) throw RangeError("qudit_square requires a normalized state");

  const auto rotated = qnl::apply(qudit_permutation(d), kron(psi.vec, psi.vec));
  std::vector<Complex> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = rotated[i * d + (d - 1)];

  for (std::size_t i = 0; i < d; ++i)
    if (std::abs(out[i] - psi.vec[i] * psi.vec[i]) > 1e-12)
      throw VerificationError("qudit permutation pipeline disagrees with component squaring");
  return PureState(std::move(out), false);
}

struct SpherePoint {
  double theta;
  double phi;
  BlochVector input;
  BlochVector output;             // unnormalized
  BlochVector output_normalized;  // divided by the success probability
  double success_probability;
};

/// Grid over the sphere: theta_i = pi i/(n_theta-1) (both poles included),
/// phi_j = 2 pi j/n_phi. Rows are theta-major.
inline std::vector<SpherePoint> sphere_map(const TwoQubitGate& gate, int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2) throw RangeError("sphere_map grid counts must be >= 2");
  std::vector<SpherePoint> points;
  points.reserve(static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi));
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::numbers::pi * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      const auto in = spin_state(theta, phi).density();
      const auto result = pipeline(in, gate);
      points.push_back({theta, phi, bloch_from_density(in), bloch_from_density(result.rho_out),
                        bloch_from_density(result.rho_out, BlochConvention::Normalized),
                        result.success_probability});
    }
  }
  return points;
}

}  // namespace qnl
