#pragma once

// Stationary two-atom state after the excitation has decayed through the
// weak transition, and its concurrence.

#include <array>
#include <complex>
#include <optional>

#include "spherent/dynamics.hpp"

namespace spherent {

/// rho = a+ |+_12><+_12| + a- |-_12><-_12| + (beta |+_12><-_12| + h.c.)
///       + (1 - a+ - a-) |1,1><1,1|
struct SteadyState {
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
    cplx beta{0.0, 0.0};

    /// Throws InvariantError unless 0 <= a+-, a+ + a- <= 1, |beta|^2 <= a+ a- + 1e-9.
    void validate() const;
};

/// Basis order {|1,1>, |1,2>, |2,1>, |2,2>}; |+-_12> = (|2,1> +- |1,2>)/sqrt 2.
struct TwoQubitDensity {
    std::array<std::array<cplx, 4>, 4> m{};

    [[nodiscard]] cplx trace() const;
    /// Throws InvariantError unless Hermitian and unit trace to 1e-12 and
    /// eigenvalues >= -1e-10.
    void validate() const;
};

inline constexpr int kBasis11 = 0;
inline constexpr int kBasis12 = 1;
inline constexpr int kBasis21 = 2;
inline constexpr int kBasis22 = 3;

struct Gamma32Pm {
    double plus = 0.0;
    double minus = 0.0;
};

Gamma32Pm gamma32_pm(const CouplingParams& p);

/// alpha_+- = int_0^inf (Gamma32_+-/2 |C+|^2 + Gamma32_-+/2 |C-|^2) dt
/// beta     = int_0^inf (Gamma32_+/2 C+ C-* + Gamma32_-/2 C+* C-) dt
///
/// Integrated in closed form from the two-exponential amplitudes fixed by
/// traj.params and traj.drive. The samples in traj are only used to check
/// that the amplitudes have decayed (|C(T_end)| < 1e-6).
SteadyState integrate_alpha_beta(const AmplitudeTrajectory& traj, Gamma32Pm gamma32);

/// Same integrals by trapezoid quadrature of the sampled amplitudes.
SteadyState integrate_alpha_beta_quadrature(const AmplitudeTrajectory& traj, Gamma32Pm gamma32);

/// Closed-form integrals straight from the parameters, without samples.
SteadyState steady_state_exact(const CouplingParams& p, const DriveSpec& d);

/// Asymptotic alpha/beta of regimes A, B, C. beta is empty when neither
/// Rabi frequency dominates (g+ == g-). Throws RegimeError for Regime::None.
struct RegimeSteadyState {
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
    std::optional<cplx> beta;
};

RegimeSteadyState alpha_beta_regime(const CouplingParams& p, const DriveSpec& d, Regime regime);

TwoQubitDensity assemble_density(const SteadyState& s);

/// sqrt(lambda+) - sqrt(lambda-) from the two nonzero eigenvalues of rho rho~.
double concurrence_paper(const SteadyState& s);

/// Wootters concurrence of a general two-qubit density matrix:
/// max(0, l1 - l2 - l3 - l4), l_i the decreasing square roots of the
/// eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence_oracle(const TwoQubitDensity& rho);

/// True iff one alpha exceeds dominance times both the other alpha and |beta|.
bool entanglement_check(const SteadyState& s, double dominance);

}  // namespace spherent
