#pragma once

// Single-excitation amplitudes C_+-(t) of the symmetric and antisymmetric
// states |+-_13> driven by a Lorentzian field resonance.
//
// Any consistent rate unit works; the command-line tool measures everything
// in units of gamma32_aa.

#include <complex>
#include <vector>

namespace spherent {

using cplx = std::complex<double>;

enum class Branch { Plus, Minus };

const char* to_string(Branch b);
Branch other(Branch b);

struct CouplingParams {
    double gamma31_aa = 1.0;     ///< strong transition, same-atom rate
    double gamma31_ab = 0.0;     ///< strong transition, cross rate
    double gamma32_aa = 1.0;     ///< weak (decay) transition, same-atom rate
    double gamma32_ab = 0.0;     ///< weak transition, cross rate
    double delta_omega_c = 0.1;  ///< resonance half width
    double detuning = 0.0;       ///< Delta = omega_C - omega_31
    double dipole_shift = 0.0;   ///< Delta^31_AB, an input here

    /// Gamma^31_+- = Gamma^31_AA +- Gamma^31_AB
    [[nodiscard]] double gamma31(Branch b) const;
    /// Gamma^32_+- = Gamma^32_AA +- Gamma^32_AB
    [[nodiscard]] double gamma32(Branch b) const;
    void validate() const;
};

/// F_+-(t) = F_+-(0) exp(-(i Delta + delta_omega_c) t)
struct DriveSpec {
    cplx f_plus_0{0.0, 0.0};
    cplx f_minus_0{0.0, 0.0};

    [[nodiscard]] cplx f0(Branch b) const { return b == Branch::Plus ? f_plus_0 : f_minus_0; }
};

/// Sampled amplitudes. A single-branch solver leaves the other branch empty.
struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<cplx> c_plus;
    std::vector<cplx> c_minus;
    CouplingParams params;
    DriveSpec drive;

    [[nodiscard]] const std::vector<cplx>& branch(Branch b) const {
        return b == Branch::Plus ? c_plus : c_minus;
    }
};

/// g = sqrt(gamma31_pm * delta_omega_c / 2)
double rabi_g(double gamma31_pm, double delta_omega_c);
double rabi_g(const CouplingParams& p, Branch b);

/// C'' + a1 C' + a2 C = 0 for the branch amplitude.
struct OdeCoeffs {
    cplx a1;
    cplx a2;
};

OdeCoeffs ode_coeffs(const CouplingParams& p, Branch b);

/// Closed-form solution with C(0) = 0 and C'(0) = F(0).
cplx amplitude_closed(const CouplingParams& p, const DriveSpec& d, Branch b, double t);

/// Both branches of the closed form sampled at the given times.
AmplitudeTrajectory trajectory_closed(const CouplingParams& p, const DriveSpec& d,
                                      const std::vector<double>& times);

/// Uniform grid 0, dt, ..., covering [0, t_end].
std::vector<double> uniform_times(double t_end, double dt);

/// Direct numerical solution of the integro-differential equation
///   C' = (+-i Delta_AB - Gamma32_AA/2) C + int_0^t K(t - u) C(u) du + F(t),
///   K(t) = -g^2 exp(-(i Delta + delta_omega_c) t),
/// on the grid 0, step, 2 step, ... up to t_max. The memory integral is
/// summed in full at every step (O(N^2)); trapezoid results at step and
/// step/2 are combined by Richardson extrapolation.
///
/// Requires step * max(|a1|, sqrt|a2|) <= 0.01.
AmplitudeTrajectory amplitude_volterra(const CouplingParams& p, const DriveSpec& d, Branch b,
                                       double t_max, double step);

/// Largest step accepted by amplitude_volterra for this branch.
double volterra_max_step(const CouplingParams& p, Branch b);

/// Strong-transition rates involving the auxiliary atom D that prepares the field.
struct DriveRates {
    double gamma_dd = 1.0;
    double gamma_ad = 0.0;
    double gamma_bd = 0.0;
};

/// F_+-(0) after atom D has emitted into the resonance for a quarter Rabi period:
///   g_D = sqrt(Gamma_DD dw / 2)
///   F_+-(0) = -(1/sqrt 2) ((Gamma_AD +- Gamma_BD) dw / 2) / g_D * exp(-pi dw / (2 g_D))
DriveSpec prepare_drive(const DriveRates& rates, double delta_omega_c);

/// exp(-pi dw / (2 g_D)), the photon loss during preparation.
double drive_loss_factor(double gamma_dd, double delta_omega_c);

/// Atom D at the site of atom A with the same dipole orientation.
DriveRates drive_at_site_of_a(const CouplingParams& p);
/// Atom D equidistant from A and B: both cross rates equal gamma_dd_cross.
DriveRates drive_equidistant(double gamma_dd, double gamma_cross);

enum class Regime { A, B, C, None };

const char* to_string(Regime r);

struct RegimeInputs {
    double g_plus = 0.0;
    double g_minus = 0.0;
    double gamma32 = 0.0;
    double delta_omega_c = 0.0;
};

RegimeInputs regime_inputs(const CouplingParams& p);

/// First matching chain, each ">>" read as "ratio >= ratio_min":
///   A: g_s >> Gamma32 >> dw >> g_w
///   B: g_s >> g_w >> Gamma32 >> dw
///   C: Gamma32 >> g_s >> g_w and g_s >> dw
/// where g_s (g_w) is the larger (smaller) of g_+, g_-.
Regime regime_classify(const RegimeInputs& in, double ratio_min);
Regime regime_classify(const CouplingParams& p, double ratio_min);

/// Branch with the larger Rabi frequency (Plus on a tie).
Branch strong_branch(const CouplingParams& p);

/// Asymptotic amplitude of the given regime:
///   strong branch in A, both in B:  F/g exp(-Gamma32 t / 4) sin(g t)
///   weak branch in A, both in C:    2F/Gamma32 (exp(-dw t) - exp(-Gamma32 t / 2))
/// Throws RegimeError for Regime::None.
cplx regime_amplitude(const CouplingParams& p, const DriveSpec& d, Regime regime, Branch b, double t);

}  // namespace spherent
