#pragma once

// Radially oriented dipoles outside a dispersing, absorbing sphere.
//
// Units: frequencies in omega_T (the transverse resonance of the medium),
// lengths in lambda_T = 2 pi c / omega_T, decay rates in Gamma_0 (the
// free-space single-atom rate). In these units k r = 2 pi omega r.

#include <span>
#include <string>
#include <vector>

#include "spherent/special_functions.hpp"

namespace spherent {

/// Single-oscillator permittivity eps(w) = 1 + wp^2 / (1 - w^2 - i w gamma).
struct DrudeLorentzParams {
    double omega_p = 0.5;  ///< coupling strength; 0 means "no sphere" (eps = 1)
    double gamma = 1e-6;   ///< absorption, > 0

    /// omega_L = sqrt(1 + omega_p^2); the band gap is (1, omega_L).
    [[nodiscard]] double band_edge() const;
    void validate() const;
};

struct SphereSystem {
    DrudeLorentzParams material;
    double radius = 10.0;   ///< R
    double delta_r = 0.14;  ///< surface-to-atom distance r - R
    double theta = 3.141592653589793;  ///< angle between the two radial dipoles

    [[nodiscard]] double atom_radius() const { return radius + delta_r; }
    void validate() const;
};

enum class ResonanceKind { SurfaceGuided, WhisperingGallery };

const char* to_string(ResonanceKind kind);

/// A complex pole omega_c - i delta_omega_c of the TM Mie coefficient.
struct Resonance {
    double omega_c = 0.0;
    double delta_omega_c = 0.0;  ///< half width at half maximum
    int l = 0;
    ResonanceKind kind = ResonanceKind::SurfaceGuided;
};

cplx permittivity(const DrudeLorentzParams& p, cplx omega);
double band_gap_lower();

/// TM scattering coefficient B_l^N(omega); omega may be complex.
///
/// Assembled from Bessel ratios at z2 = sqrt(eps) k R so that the
/// exponentially large j_l(z2) inside the band gap never has to be formed.
/// Throws PoleError when the denominator vanishes to working precision.
cplx mie_coefficient(const SphereSystem& sys, int l, cplx omega);

/// Denominator of B_l^N divided by j_{l-1}(z2); same zeros, no overflow.
ScaledComplex mie_denominator(const SphereSystem& sys, int l, cplx omega);

struct RateOptions {
    double rel_tol = 1e-12;   ///< per-term cutoff relative to the running sum
    int consecutive = 5;      ///< terms in a row below the cutoff
    int l_cap = kMaxOrder;    ///< hard limit on the multipole order
};

struct CollectiveRates {
    double gamma_aa = 0.0;  ///< same-atom rate
    double gamma_ab = 0.0;  ///< cross rate at sys.theta
    int terms = 0;          ///< highest multipole order summed

    [[nodiscard]] double plus() const { return gamma_aa + gamma_ab; }
    [[nodiscard]] double minus() const { return gamma_aa - gamma_ab; }
};

/// Same-atom and cross decay rates at real frequency omega, from one pass
/// over the multipole series. The cross series is truncated against the
/// same-atom magnitude, which bounds it.
CollectiveRates collective_rates(const SphereSystem& sys, double omega, const RateOptions& opt = {});

/// Gamma_AA (same_atom) or Gamma_AB at sys.theta, in units of Gamma_0.
double collective_rate(const SphereSystem& sys, double omega, bool same_atom,
                       const RateOptions& opt = {});

struct RatesPm {
    double plus = 0.0;
    double minus = 0.0;
};

/// Gamma_+- = Gamma_AA +- Gamma_AB.
RatesPm rates_pm(const SphereSystem& sys, double omega, const RateOptions& opt = {});

/// The order-l term of the multipole series alone, at frequency omega.
///
/// Near a sharp resonance of order l this term dominates; away from it
/// (|omega - omega_c| of order 100 widths) it carries no guarantee.
double single_term_rate(const SphereSystem& sys, const Resonance& res, double omega, bool same_atom);

/// As above, evaluated at omega = res.omega_c.
double single_term_rate(const SphereSystem& sys, const Resonance& res, bool same_atom);

struct ResonanceSearchOptions {
    double points_per_unit = 2000.0;  ///< initial real-axis grid density
    int newton_max_iter = 50;
    double newton_tol = 1e-12;
    double derivative_step = 1e-7;    ///< relative to |omega|
    double acceptance = 1e-8;         ///< |D(root)| / |D(omega_c + 3 width)| bound
};

struct CandidateFailure {
    int l = 0;
    double omega_start = 0.0;
    std::string reason;
};

struct ResonanceSearch {
    std::vector<Resonance> resonances;  ///< sorted by omega_c, then l
    std::vector<CandidateFailure> failures;
};

/// Complex roots of the TM denominator with real part in [omega_lo, omega_hi]
/// for orders l_lo..l_hi: bracketing on a real grid, golden-section descent
/// to the real-axis minimum, then complex Newton.
ResonanceSearch find_resonances(const SphereSystem& sys, double omega_lo, double omega_hi, int l_lo,
                                int l_hi, const ResonanceSearchOptions& opt = {});

/// b + a / (1 + ((w - c) / hw)^2), fitted by Levenberg-Marquardt.
struct LorentzFit {
    double center = 0.0;
    double half_width = 0.0;
    double amplitude = 0.0;
    double background = 0.0;
    double rms_residual = 0.0;
};

LorentzFit fit_lorentzian(std::span<const double> omega, std::span<const double> values);

}  // namespace spherent
