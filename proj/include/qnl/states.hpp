#pragma once

// Spin-1/2 state representations.
//
// Basis ordering: |+> (spin up) is index 0, |-> (spin down) is index 1. Two
// spins are ordered |++>, |+->, |-+>, |-->.

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "qnl/linalg.hpp"

namespace qnl {

namespace pauli {

inline Matrix identity() { return Matrix::identity(2); }
inline Matrix x() { return Matrix{{0, 1}, {1, 0}}; }
inline Matrix y() { return Matrix{{0, Complex{0, -1}}, {Complex{0, 1}, 0}}; }
inline Matrix z() { return Matrix{{1, 0}, {0, -1}}; }

}  // namespace pauli

/// Projector onto spin up, |+><+|.
inline Matrix projector_up() { return Matrix{{1, 0}, {0, 0}}; }
/// Projector onto spin down, |-><-|.
inline Matrix projector_down() { return Matrix{{0, 0}, {0, 1}}; }

/// Hermitian, positive semidefinite, trace in (0, 1]. Traces below one are
/// legitimate: they carry the survival probability after post-selection.
class DensityMatrix {
 public:
  static constexpr double kTol = 1e-10;

  explicit DensityMatrix(Matrix m) : mat_(std::move(m)) { validate(); }

  /// Skips the positivity eigensolve; used for results whose construction
  /// already guarantees the invariants.
  static DensityMatrix trusted(Matrix m) { return DensityMatrix(std::move(m), Trusted{}); }

  const Matrix& matrix() const { return mat_; }
  std::size_t dim() const { return mat_.rows(); }
  double trace() const { return mat_.trace().real(); }
  const Complex& operator()(std::size_t r, std::size_t c) const { return mat_(r, c); }

  /// Divides by the trace. Never applied implicitly.
  DensityMatrix renormalized() const {
    const double t = trace();
    if (t <= 0.0) throw RangeError("cannot renormalize a zero-trace state");
    return trusted(mat_ * Complex{1.0 / t, 0.0});
  }

 private:
  struct Trusted {};
  DensityMatrix(Matrix m, Trusted) : mat_(std::move(m)) {
    if (!mat_.square() || mat_.rows() < 2) throw DimensionError("density matrix must be square with d >= 2");
  }

  void validate() const {
    if (!mat_.square() || mat_.rows() < 2) throw DimensionError("density matrix must be square with d >= 2");
    if (!mat_.all_finite()) throw RangeError("density matrix has non-finite entries");
    if (!is_hermitian(mat_, kTol)) throw NotHermitianError("density matrix is not Hermitian");
    const double t = mat_.trace().real();
    if (!(t > 0.0) || t > 1.0 + kTol) throw RangeError("density matrix trace outside (0, 1]");
    if (min_eigenvalue(mat_) < -kTol) throw RangeError("density matrix is not positive semidefinite");
  }

  Matrix mat_;
};

/// State vector. `normalized` is false for the subnormalized outputs of
/// filtering operations.
struct PureState {
  std::vector<Complex> vec;
  bool normalized = true;

  PureState() = default;
  PureState(std::vector<Complex> v, bool is_normalized = true) : vec(std::move(v)), normalized(is_normalized) {
    if (vec.size() < 2) throw DimensionError("pure state must have dimension >= 2");
    if (normalized && std::abs(norm() - 1.0) > 1e-10) throw RangeError("state flagged normalized has norm != 1");
  }

  std::size_t dim() const { return vec.size(); }
  double norm() const { return std::sqrt(std::real(inner(vec, vec))); }
  Matrix projector() const { return outer(vec, vec); }
  DensityMatrix density() const { return DensityMatrix::trusted(projector()); }
};

inline PureState tensor(const PureState& a, const PureState& b) {
  return PureState(kron(a.vec, b.vec), a.normalized && b.normalized);
}

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }

  static BlochVector spherical(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }
};

/// rho = (1 + P.sigma) / 2.
inline DensityMatrix density_from_bloch(const BlochVector& p) {
  if (p.norm() > 1.0 + 1e-10) throw RangeError("Bloch vector outside the unit ball");
  Matrix m{{Complex{0.5 * (1.0 + p.z), 0.0}, Complex{0.5 * p.x, -0.5 * p.y}},
           {Complex{0.5 * p.x, 0.5 * p.y}, Complex{0.5 * (1.0 - p.z), 0.0}}};
  return DensityMatrix::trusted(std::move(m));
}

enum class BlochConvention { Unnormalized, Normalized };

/// Polarization vector of a 2x2 density matrix. The default keeps the
/// subnormalized scale of filtered states; Normalized divides by the trace.
inline BlochVector bloch_from_density(const DensityMatrix& rho,
                                      BlochConvention conv = BlochConvention::Unnormalized) {
  if (rho.dim() != 2) throw DimensionError("Bloch vector requires a 2x2 density matrix");
  const Complex r01 = rho(0, 1), r10 = rho(1, 0);
  BlochVector p{(r01 + r10).real(), (Complex{0, 1} * (r01 - r10)).real(), (rho(0, 0) - rho(1, 1)).real()};
  if (conv == BlochConvention::Normalized) {
    const double t = rho.trace();
    p = {p.x / t, p.y / t, p.z / t};
  }
  return p;
}

/// Pure spin state with polarization (theta, phi) on the sphere.
inline PureState spin_state(double theta, double phi) {
  return PureState({Complex{std::cos(theta / 2), 0.0}, std::polar(std::sin(theta / 2), phi)});
}

/// |<a|b>|.
inline double overlap(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DimensionError("overlap of states with different dimensions");
  if (!a.normalized || !b.normalized) throw RangeError("overlap requires normalized states");
  return std::min(1.0, std::abs(inner(a.vec, b.vec)));
}

enum class BellState { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

/// psi+- = (|+-> +- |-+>)/sqrt2, phi+- = (|++> +- |-->)/sqrt2.
inline PureState bell_state(BellState which) {
  const double h = std::numbers::sqrt2 / 2.0;
  switch (which) {
    case BellState::PsiMinus: return PureState({0.0, h, -h, 0.0});
    case BellState::PsiPlus: return PureState({0.0, h, h, 0.0});
    case BellState::PhiMinus: return PureState({h, 0.0, 0.0, -h});
    case BellState::PhiPlus: return PureState({h, 0.0, 0.0, h});
  }
  throw RangeError("unknown Bell state");
}

inline constexpr std::array<BellState, 4> kBellStates{BellState::PsiMinus, BellState::PsiPlus,
                                                      BellState::PhiMinus, BellState::PhiPlus};

/// <psi|rho|psi> for the trace-normalized rho.
inline double bell_weight(const DensityMatrix& rho, BellState which) {
  if (rho.dim() != 4) throw DimensionError("Bell-state weight requires a 4x4 density matrix");
  const auto psi = bell_state(which);
  const auto v = qnl::apply(rho.matrix(), psi.vec);
  return std::real(inner(psi.vec, v)) / rho.trace();
}

/// Singlet fraction <psi-|rho|psi->, evaluated on the trace-normalized state.
inline double fidelity_singlet(const DensityMatrix& rho) { return bell_weight(rho, BellState::PsiMinus); }

/// F |psi-><psi-| + (1 - F)/3 (1 - |psi-><psi-|).
inline DensityMatrix werner(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw RangeError("Werner fidelity must lie in [0, 1]");
  const Matrix singlet = bell_state(BellState::PsiMinus).projector();
  Matrix m = f * singlet + ((1.0 - f) / 3.0) * (Matrix::identity(4) - singlet);
  return DensityMatrix::trusted(std::move(m));
}

}  // namespace qnl
