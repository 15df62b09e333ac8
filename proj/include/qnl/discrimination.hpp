#pragma once

// Unambiguous discrimination of two equiprobable non-orthogonal spin states.
//
// Four strategies, all zero-error:
//   Nonlinear      element squaring on two copies, then a von Neumann measurement
//   LigeTwoCopies  two independent loss-induced generalized measurements
//   LigeProduct    one loss-induced measurement on the two-copy product state
//   Povm           the optimal three-outcome POVM on the product state

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <string_view>

#include "qnl/linalg.hpp"
#include "qnl/rng.hpp"
#include "qnl/states.hpp"
#include "qnl/transform.hpp"

namespace qnl {

enum class Outcome { State1, State2, Inconclusive };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::State1: return "state1";
    case Outcome::State2: return "state2";
    case Outcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Outcome probabilities for one known input state.
struct OutcomeDistribution {
  double state1 = 0.0;
  double state2 = 0.0;
  double inconclusive = 0.0;

  double correct(int which) const { return which == 1 ? state1 : state2; }
  double wrong(int which) const { return which == 1 ? state2 : state1; }
};

inline void require_which(int which) {
  if (which != 1 && which != 2) throw RangeError("input state index must be 1 or 2");
}

// ---------------------------------------------------------------------------
// Nonlinear route

/// Pair with polarizations (theta, phi) and (theta + pi, phi + pi/2). Their
/// squared-element images are orthogonal.
struct DiscriminationPair {
  double theta;
  double phi;
  PureState psi1;
  PureState psi2;
  DensityMatrix rho1;
  DensityMatrix rho2;
  bool degenerate;  // theta in {0, pi}: inputs already orthogonal
};

inline DiscriminationPair build_pair(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw RangeError("theta must lie in [0, pi]");
  if (!std::isfinite(phi)) throw RangeError("phi must be finite");
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  PureState psi1({Complex{c, 0.0}, std::polar(s, phi)});
  PureState psi2({Complex{s, 0.0}, Complex{0.0, -1.0} * std::polar(c, phi)});
  auto rho1 = psi1.density();
  auto rho2 = psi2.density();
  const bool degenerate = std::abs(std::sin(theta)) < 1e-12;
  return {theta, phi, std::move(psi1), std::move(psi2), std::move(rho1), std::move(rho2), degenerate};
}

/// Square the chosen input, then measure along the Bloch axis of the
/// normalized image of state 1 (its antipode is the image of state 2).
inline OutcomeDistribution discriminate_nonlinear(const DiscriminationPair& pair, int which) {
  require_which(which);
  const auto out1 = square_elements(pair.rho1);
  const auto axis = bloch_from_density(out1.rho_out, BlochConvention::Normalized);
  const Matrix project1 = density_from_bloch(axis).matrix();
  const Matrix project2 = Matrix::identity(2) - project1;

  const auto out = which == 1 ? out1 : square_elements(pair.rho2);
  OutcomeDistribution d;
  d.state1 = (project1 * out.rho_out.matrix()).trace().real();
  d.state2 = (project2 * out.rho_out.matrix()).trace().real();
  d.inconclusive = 1.0 - out.success_probability;
  return d;
}

/// Average success over equiprobable inputs, 1 - sin^2(theta)/2.
inline double nonlinear_success(const DiscriminationPair& pair) {
  return 0.5 * (discriminate_nonlinear(pair, 1).state1 + discriminate_nonlinear(pair, 2).state2);
}

// ---------------------------------------------------------------------------
// Loss-induced generalized measurement (LIGe)

/// The two states are written as cos(a/2)|phi1> +- sin(a/2)|phi2>; an extra
/// level |phi0> is appended (index 0 of the embedded space). An in-plane
/// alignment (phi1 -> v, phi2 -> u, phi0 -> -phi0) followed by a rotation by
/// beta about u = (phi1 - phi2)/sqrt2, with cos(beta) = tan(a/2), leaves
///   |psi1> -> sqrt2 sin(a/2)|phi1> + sqrt(cos a)|phi0>
///   |psi2> -> sqrt2 sin(a/2)|phi2> + sqrt(cos a)|phi0>.
struct LigeConstruction {
  double alpha;      // cos(alpha) = |<psi1|psi2>|
  PureState phi0;    // embedded basis, dimension n+1
  PureState phi1;
  PureState phi2;
  Matrix rotation;   // 3x3 in the (phi0, phi1, phi2) basis
  Matrix unitary;    // (n+1)x(n+1), identity off the three-dimensional block
  PureState input1;  // embedded inputs
  PureState input2;
  PureState output1;
  PureState output2;

  OutcomeDistribution distribution(int which) const {
    require_which(which);
    const auto& out = which == 1 ? output1 : output2;
    OutcomeDistribution d;
    d.state1 = std::norm(inner(phi1.vec, out.vec));
    d.state2 = std::norm(inner(phi2.vec, out.vec));
    d.inconclusive = 1.0 - d.state1 - d.state2;
    return d;
  }

  double success() const { return 0.5 * (distribution(1).state1 + distribution(2).state2); }
};

namespace detail {

inline Matrix lige_rotation(double alpha) {
  const double cb = std::tan(alpha / 2);
  const double sb = std::sqrt(std::max(0.0, std::cos(alpha))) / std::cos(alpha / 2);  // sqrt(1 - cb^2)
  const double h = std::numbers::sqrt2 / 2.0;
  // Rodrigues rotation about u = (0, 1, -1)/sqrt2.
  const std::array<double, 3> u{0.0, h, -h};
  Matrix about_u(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double k = 0.0;  // cross-product matrix [u]_x
      if (i == 0 && j == 1) k = -u[2];
      if (i == 0 && j == 2) k = u[1];
      if (i == 1 && j == 0) k = u[2];
      if (i == 1 && j == 2) k = -u[0];
      if (i == 2 && j == 0) k = -u[1];
      if (i == 2 && j == 1) k = u[0];
      about_u(i, j) = (i == j ? cb : 0.0) + sb * k + (1.0 - cb) * u[i] * u[j];
    }
  const Matrix align{{-1, 0, 0}, {0, h, h}, {0, h, -h}};
  return about_u * align;
}

inline PureState embed(std::span<const Complex> v) {
  std::vector<Complex> out(v.size() + 1);
  std::copy(v.begin(), v.end(), out.begin() + 1);
  return PureState(std::move(out));
}

}  // namespace detail

/// Builds the LIGe for any two normalized states of equal dimension with
/// overlap in [0, 1).
inline LigeConstruction lige_construct(const PureState& psi1, const PureState& psi2) {
  if (psi1.dim() != psi2.dim()) throw DimensionError("LIGe states must have equal dimension");
  const Complex ov = inner(psi1.vec, psi2.vec);
  const double s = std::min(1.0, std::abs(ov));
  if (s > 1.0 - 1e-12) throw DegenerateError("LIGe undefined for identical states");
  const double alpha = std::acos(s);

  // Remove the relative phase so the overlap is real and non-negative.
  const Complex phase = s > 0.0 ? std::conj(ov) / s : Complex{1.0, 0.0};
  const std::size_t n = psi1.dim();
  std::vector<Complex> sum(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] = psi1.vec[i] + phase * psi2.vec[i];
    diff[i] = psi1.vec[i] - phase * psi2.vec[i];
  }
  const double cn = std::sqrt(std::real(inner(sum, sum)));
  const double sn = std::sqrt(std::real(inner(diff, diff)));
  for (auto& v : sum) v /= cn;
  for (auto& v : diff) v /= sn;

  std::vector<Complex> e0(n + 1);
  e0[0] = 1.0;
  PureState phi0(std::move(e0));
  PureState phi1 = detail::embed(sum);
  PureState phi2 = detail::embed(diff);

  Matrix rotation = detail::lige_rotation(alpha);

  // W = B R B^dag + (1 - B B^dag), B = [phi0 phi1 phi2].
  Matrix basis(n + 1, 3);
  for (std::size_t r = 0; r < n + 1; ++r) {
    basis(r, 0) = phi0.vec[r];
    basis(r, 1) = phi1.vec[r];
    basis(r, 2) = phi2.vec[r];
  }
  Matrix unitary = basis * rotation * basis.adjoint() + Matrix::identity(n + 1) - basis * basis.adjoint();

  PureState input1 = detail::embed(psi1.vec);
  PureState input2 = detail::embed(psi2.vec);
  PureState output1(qnl::apply(unitary, input1.vec));
  PureState output2(qnl::apply(unitary, input2.vec));

  // Closed-form check; output2 carries the phase removed above.
  const double a = std::numbers::sqrt2 * std::sin(alpha / 2), b = std::sqrt(std::max(0.0, std::cos(alpha)));
  for (std::size_t r = 0; r < n + 1; ++r) {
    const Complex want1 = a * phi1.vec[r] + b * phi0.vec[r];
    const Complex want2 = std::conj(phase) * (a * phi2.vec[r] + b * phi0.vec[r]);
    if (std::abs(output1.vec[r] - want1) > 1e-10 || std::abs(output2.vec[r] - want2) > 1e-10)
      throw VerificationError("LIGe rotation does not reproduce the closed-form outputs");
  }

  return {alpha,  std::move(phi0),  std::move(phi1),  std::move(phi2),    std::move(rotation),
          std::move(unitary), std::move(input1), std::move(input2), std::move(output1), std::move(output2)};
}

inline void require_lige_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= std::numbers::pi / 2 + 1e-15))
    throw RangeError("LIGe requires alpha in (0, pi/2] so that tan(alpha/2) <= 1");
}

/// The qubit pair cos(a/2)|+> +- sin(a/2)|-> (overlap cos a).
inline std::pair<PureState, PureState> lige_qubit_pair(double alpha) {
  const double c = std::cos(alpha / 2), s = std::sin(alpha / 2);
  return {PureState({c, s}), PureState({c, -s})};
}

inline LigeConstruction lige_single_construction(double alpha) {
  require_lige_alpha(alpha);
  const auto [psi1, psi2] = lige_qubit_pair(alpha);
  return lige_construct(psi1, psi2);
}

/// Single copy: correct with 1 - cos(alpha), inconclusive with cos(alpha).
inline OutcomeDistribution lige_single(double alpha, int which) {
  return lige_single_construction(alpha).distribution(which);
}

/// Two independent LIGe measurements: the second copy is used only when the
/// first is inconclusive.
inline double lige_two_copies(double alpha) {
  const auto d = lige_single(alpha, 1);
  return d.state1 + d.inconclusive * d.state1;
}

inline LigeConstruction lige_product_construction(double alpha) {
  require_lige_alpha(alpha);
  const auto [psi1, psi2] = lige_qubit_pair(alpha);
  return lige_construct(tensor(psi1, psi1), tensor(psi2, psi2));
}

/// One LIGe on the product states (overlap cos^2 alpha), embedding dimension 5.
inline double lige_product(double alpha) { return lige_product_construction(alpha).success(); }

// ---------------------------------------------------------------------------
// Optimal POVM

struct PovmElement {
  Outcome label;
  Matrix op;
};

struct Povm {
  std::vector<PovmElement> elements;
  double x;        // 1 / (1 + overlap)
  double overlap;

  OutcomeDistribution distribution(const PureState& psi) const {
    OutcomeDistribution d;
    for (const auto& e : elements) {
      const double p = std::real(inner(psi.vec, qnl::apply(e.op, psi.vec)));
      switch (e.label) {
        case Outcome::State1: d.state1 += p; break;
        case Outcome::State2: d.state2 += p; break;
        case Outcome::Inconclusive: d.inconclusive += p; break;
      }
    }
    return d;
  }
};

/// A1 = x(1 - |psi2><psi2|), A2 = x(1 - |psi1><psi1|), A? = 1 - A1 - A2 with
/// x = 1/(1 + |<psi1|psi2>|). Above dimension two the identity inside A1, A2
/// is the projector onto span{psi1, psi2}; the complement goes to A?.
inline Povm optimal_povm(const PureState& psi1, const PureState& psi2) {
  const double s = overlap(psi1, psi2);
  if (s < 1e-15 || s > 1.0 - 1e-12) throw DegenerateError("optimal POVM requires 0 < overlap < 1");
  const double x = 1.0 / (1.0 + s);
  const std::size_t n = psi1.dim();

  const Matrix p1 = psi1.projector(), p2 = psi2.projector();
  Matrix span_proj = Matrix::identity(n);
  if (n > 2) {
    // Orthonormal basis {psi1, w} of the span.
    const Complex ov = inner(psi1.vec, psi2.vec);
    std::vector<Complex> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = psi2.vec[i] - ov * psi1.vec[i];
    const double wn = std::sqrt(std::real(inner(w, w)));
    for (auto& v : w) v /= wn;
    span_proj = p1 + outer(w, w);
  }
  Matrix a1 = x * (span_proj - p2);
  Matrix a2 = x * (span_proj - p1);
  Matrix a0 = Matrix::identity(n) - a1 - a2;

  Povm povm{{{Outcome::State1, std::move(a1)}, {Outcome::State2, std::move(a2)}, {Outcome::Inconclusive, std::move(a0)}},
            x, s};
  for (const auto& e : povm.elements)
    if (min_eigenvalue(e.op) < -1e-10) throw VerificationError("POVM element is not positive");
  return povm;
}

/// States cos(a/2)|+> +- sin(a/2)|-> used by the `povm` command.
inline Povm optimal_povm_for_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi / 2)) throw RangeError("alpha must lie in (0, pi/2)");
  const auto [psi1, psi2] = lige_qubit_pair(alpha);
  return optimal_povm(psi1, psi2);
}

// ---------------------------------------------------------------------------
// Monte Carlo

enum class Strategy { Nonlinear, LigeTwoCopies, LigeProduct, Povm };

inline constexpr std::array<Strategy, 4> kStrategies{Strategy::Nonlinear, Strategy::LigeTwoCopies,
                                                     Strategy::LigeProduct, Strategy::Povm};

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Nonlinear: return "nonlinear";
    case Strategy::LigeTwoCopies: return "lige2";
    case Strategy::LigeProduct: return "lige-product";
    case Strategy::Povm: return "povm";
  }
  return "?";
}

inline Strategy strategy_from_string(std::string_view name) {
  for (auto s : kStrategies)
    if (to_string(s) == name) return s;
  throw RangeError("unknown strategy: " + std::string(name));
}

struct TrialStats {
  Strategy strategy;
  std::uint64_t n_trials = 0;
  std::map<Outcome, std::uint64_t> counts;  // reported outcomes
  std::uint64_t n_correct = 0;
  std::uint64_t n_wrong = 0;
  double empirical_success = 0.0;
  double analytic_success = 0.0;
  std::uint64_t seed = 0;
  std::string_view generator = SplitMix64::kName;

  bool operator==(const TrialStats&) const = default;
};

namespace detail {

// Zero-error strategies have analytic wrong-outcome mass at rounding level;
// it is dropped before sampling so that a reported state is always correct.
inline OutcomeDistribution sampling_distribution(OutcomeDistribution d, int which) {
  if (d.wrong(which) > 1e-12) throw VerificationError("strategy has non-zero error probability");
  if (which == 1) d.state2 = 0.0;
  else d.state1 = 0.0;
  return d;
}

inline Outcome sample(const OutcomeDistribution& d, SplitMix64& rng) {
  const double u = rng.uniform();
  if (u < d.state1) return Outcome::State1;
  if (u < d.state1 + d.state2) return Outcome::State2;
  return Outcome::Inconclusive;
}

}  // namespace detail

/// Analytic per-input distributions of a strategy for the pair. The LIGe and
/// POVM strategies act on states with the pair's overlap.
inline std::array<OutcomeDistribution, 2> strategy_distributions(Strategy strategy,
                                                                  const DiscriminationPair& pair) {
  const double s = overlap(pair.psi1, pair.psi2);
  switch (strategy) {
    case Strategy::Nonlinear: return {discriminate_nonlinear(pair, 1), discriminate_nonlinear(pair, 2)};
    case Strategy::LigeTwoCopies: {
      const auto lige = lige_single_construction(std::acos(s));
      std::array<OutcomeDistribution, 2> out{};
      for (int which = 1; which <= 2; ++which) {
        const auto d = lige.distribution(which);
        auto& o = out[which - 1];
        o.state1 = d.state1 + d.inconclusive * d.state1;
        o.state2 = d.state2 + d.inconclusive * d.state2;
        o.inconclusive = d.inconclusive * d.inconclusive;
      }
      return out;
    }
    case Strategy::LigeProduct: {
      const auto lige = lige_product_construction(std::acos(s));
      return {lige.distribution(1), lige.distribution(2)};
    }
    case Strategy::Povm: {
      const auto a = tensor(pair.psi1, pair.psi1), b = tensor(pair.psi2, pair.psi2);
      const auto povm = optimal_povm(a, b);
      return {povm.distribution(a), povm.distribution(b)};
    }
  }
  throw RangeError("unknown strategy");
}

inline double analytic_success(Strategy strategy, const DiscriminationPair& pair) {
  const auto d = strategy_distributions(strategy, pair);
  return 0.5 * (d[0].state1 + d[1].state2);
}

/// Each trial draws the input (1 or 2, equiprobable) and the outcome from its
/// own SplitMix64 stream (seed, trial index). LigeTwoCopies samples the two
/// single-copy measurements in sequence.
inline TrialStats simulate_trials(Strategy strategy, const DiscriminationPair& pair, std::uint64_t n_trials,
                                  std::uint64_t seed) {
  if (n_trials < 1) throw RangeError("n_trials must be >= 1");
  if (pair.degenerate) throw DegenerateError("pair is degenerate (theta in {0, pi})");

  std::array<OutcomeDistribution, 2> per_input{};
  for (int which = 1; which <= 2; ++which) {
    const auto d = strategy == Strategy::LigeTwoCopies
                       ? lige_single(std::acos(overlap(pair.psi1, pair.psi2)), which)
                       : strategy_distributions(strategy, pair)[which - 1];
    per_input[which - 1] = detail::sampling_distribution(d, which);
  }

  TrialStats stats;
  stats.strategy = strategy;
  stats.n_trials = n_trials;
  stats.seed = seed;
  stats.analytic_success = analytic_success(strategy, pair);
  for (auto o : {Outcome::State1, Outcome::State2, Outcome::Inconclusive}) stats.counts[o] = 0;

  for (std::uint64_t t = 0; t < n_trials; ++t) {
    SplitMix64 rng(seed, t);
    const int which = rng.uniform() < 0.5 ? 1 : 2;
    const auto& d = per_input[which - 1];
    Outcome o = detail::sample(d, rng);
    if (strategy == Strategy::LigeTwoCopies && o == Outcome::Inconclusive) o = detail::sample(d, rng);

    ++stats.counts[o];
    if (o == Outcome::Inconclusive) continue;
    const bool correct = (o == Outcome::State1) == (which == 1);
    ++(correct ? stats.n_correct : stats.n_wrong);
  }
  stats.empirical_success = static_cast<double>(stats.n_correct) / static_cast<double>(n_trials);
  return stats;
}

/// Half-width of the k-sigma binomial band around p for n trials.
inline double binomial_band(double p, std::uint64_t n, double k = 4.0) {
  return k * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace qnl
