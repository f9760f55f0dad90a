#include "spherent/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spherent/errors.hpp"

namespace spherent {

namespace {

constexpr cplx kI{0.0, 1.0};

double sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

void require(bool ok, const char* what) {
    if (!ok) {
        throw InvariantError(what);
    }
}

/// mu = i Delta + delta_omega_c; kernel and drive both decay as exp(-mu t).
cplx drive_rate(const CouplingParams& p) { return kI * p.detuning + p.delta_omega_c; }

double g_squared(const CouplingParams& p, Branch b) { return 0.5 * p.gamma31(b) * p.delta_omega_c; }

/// (e^{s1 t} - e^{s2 t}) / q with s1,2 = (-a1 +- q)/2, stable for small |q t|.
cplx two_exponential(cplx a1, cplx q, double t) {
    const cplx z = 0.5 * q * t;
    if (std::abs(z) < 1.0) {
        const cplx sinhc = (z == cplx{0.0, 0.0}) ? cplx{1.0, 0.0} : std::sinh(z) / z;
        return t * std::exp(-0.5 * a1 * t) * sinhc;
    }
    return (std::exp(0.5 * (-a1 + q) * t) - std::exp(0.5 * (-a1 - q) * t)) / q;
}

}  // namespace

const char* to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }

Branch other(Branch b) { return b == Branch::Plus ? Branch::Minus : Branch::Plus; }

double CouplingParams::gamma31(Branch b) const { return gamma31_aa + sign(b) * gamma31_ab; }

double CouplingParams::gamma32(Branch b) const { return gamma32_aa + sign(b) * gamma32_ab; }

void CouplingParams::validate() const {
    for (double v : {gamma31_aa, gamma31_ab, gamma32_aa, gamma32_ab, delta_omega_c, detuning, dipole_shift}) {
        require(std::isfinite(v), "coupling parameters must be finite");
    }
    require(gamma31_aa > 0.0, "gamma31_aa must be > 0");
    require(gamma32_aa > 0.0, "gamma32_aa must be > 0");
    require(delta_omega_c > 0.0, "delta_omega_c must be > 0");
    require(std::abs(gamma31_ab) <= gamma31_aa, "|gamma31_ab| must not exceed gamma31_aa");
    require(std::abs(gamma32_ab) <= gamma32_aa, "|gamma32_ab| must not exceed gamma32_aa");
}

double rabi_g(double gamma31_pm, double delta_omega_c) {
    if (!(gamma31_pm >= 0.0) || !(delta_omega_c >= 0.0)) {
        throw DomainError("rabi_g needs non-negative rates");
    }
    return std::sqrt(0.5 * gamma31_pm * delta_omega_c);
}

double rabi_g(const CouplingParams& p, Branch b) {
    return rabi_g(std::max(0.0, p.gamma31(b)), p.delta_omega_c);
}

OdeCoeffs ode_coeffs(const CouplingParams& p, Branch b) {
    p.validate();
    const double s = sign(b);
    const double half32 = 0.5 * p.gamma32_aa;
    const cplx a1 = kI * (p.detuning - s * p.dipole_shift) + p.delta_omega_c + half32;
    const cplx a2 = g_squared(p, b) + cplx{p.detuning, -p.delta_omega_c} * cplx{s * p.dipole_shift, half32};
    return {a1, a2};
}

cplx amplitude_closed(const CouplingParams& p, const DriveSpec& d, Branch b, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("amplitude_closed needs t >= 0");
    }
    const OdeCoeffs c = ode_coeffs(p, b);
    const cplx q = std::sqrt(c.a1 * c.a1 - 4.0 * c.a2);
    const cplx f0 = d.f0(b);
    if (std::abs(q) < 1e-9 * std::abs(c.a1)) {
        return f0 * t * std::exp(-0.5 * c.a1 * t);
    }
    return f0 * two_exponential(c.a1, q, t);
}

AmplitudeTrajectory trajectory_closed(const CouplingParams& p, const DriveSpec& d,
                                      const std::vector<double>& times) {
    AmplitudeTrajectory out;
    out.params = p;
    out.drive = d;
    out.times = times;
    out.c_plus.reserve(times.size());
    out.c_minus.reserve(times.size());
    for (double t : times) {
        out.c_plus.push_back(amplitude_closed(p, d, Branch::Plus, t));
        out.c_minus.push_back(amplitude_closed(p, d, Branch::Minus, t));
    }
    return out;
}

std::vector<double> uniform_times(double t_end, double dt) {
    if (!(t_end >= 0.0) || !(dt > 0.0) || !std::isfinite(t_end)) {
        throw DomainError("uniform_times needs t_end >= 0 and dt > 0");
    }
    const auto n = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        t[i] = static_cast<double>(i) * dt;
    }
    return t;
}

namespace {

/// Trapezoid rule for the second-kind form obtained by integrating the
/// equation once:
///   C(t) = G(t) + int_0^t [lambda + Q(t - u)] C(u) du
/// with G = int_0^t F and Q = int_0^tau K, both elementary.
std::vector<cplx> volterra_trapezoid(cplx lambda, double g2, cplx mu, cplx f0, double h, std::size_t n) {
    std::vector<cplx> kernel(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double tau = static_cast<double>(k) * h;
        kernel[k] = lambda - g2 * (1.0 - std::exp(-mu * tau)) / mu;
    }
    std::vector<cplx> c(n + 1, cplx{0.0, 0.0});
    const cplx diag = 1.0 - 0.5 * h * kernel[0];
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) * h;
        cplx history{0.0, 0.0};
        // C(0) = 0, so the left endpoint drops out
        for (std::size_t k = 1; k < i; ++k) {
            history += kernel[i - k] * c[k];
        }
        const cplx g = f0 * (1.0 - std::exp(-mu * t)) / mu;
        c[i] = (g + h * history) / diag;
    }
    return c;
}

}  // namespace

double volterra_max_step(const CouplingParams& p, Branch b) {
    const OdeCoeffs c = ode_coeffs(p, b);
    const double scale = std::max(std::abs(c.a1), std::sqrt(std::abs(c.a2)));
    return 0.01 / scale;
}

AmplitudeTrajectory amplitude_volterra(const CouplingParams& p, const DriveSpec& d, Branch b,
                                       double t_max, double step) {
    p.validate();
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) {
        throw DomainError("amplitude_volterra needs t_max >= 0");
    }
    if (!(step > 0.0) || step > volterra_max_step(p, b) * (1.0 + 1e-12)) {
        throw DomainError("amplitude_volterra step-size violation: need step * max(|a1|, sqrt|a2|) <= 0.01");
    }
    const auto n = static_cast<std::size_t>(std::ceil(t_max / step - 1e-9));
    const cplx lambda = kI * (sign(b) * p.dipole_shift) - 0.5 * p.gamma32_aa;
    const double g2 = g_squared(p, b);
    const cplx mu = drive_rate(p);
    const cplx f0 = d.f0(b);
    const auto coarse = volterra_trapezoid(lambda, g2, mu, f0, step, n);
    const auto fine = volterra_trapezoid(lambda, g2, mu, f0, 0.5 * step, 2 * n);

    AmplitudeTrajectory out;
    out.params = p;
    out.drive = d;
    out.times = uniform_times(static_cast<double>(n) * step, step);
    out.times.resize(n + 1);
    auto& dst = (b == Branch::Plus) ? out.c_plus : out.c_minus;
    dst.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        dst[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
    }
    return out;
}

double drive_loss_factor(double gamma_dd, double delta_omega_c) {
    const double gd = rabi_g(gamma_dd, delta_omega_c);
    if (!(gd > 0.0)) {
        throw DomainError("drive preparation needs gamma_dd > 0 and delta_omega_c > 0");
    }
    return std::exp(-std::numbers::pi * delta_omega_c / (2.0 * gd));
}

DriveSpec prepare_drive(const DriveRates& rates, double delta_omega_c) {
    if (!(rates.gamma_dd > 0.0) || !(delta_omega_c > 0.0)) {
        throw DomainError("drive preparation needs gamma_dd > 0 and delta_omega_c > 0");
    }
    const double gd = rabi_g(rates.gamma_dd, delta_omega_c);
    const double loss = drive_loss_factor(rates.gamma_dd, delta_omega_c);
    // signed g_D+-^2; the minus combination may be negative
    const double gp2 = (rates.gamma_ad + rates.gamma_bd) * delta_omega_c / 2.0;
    const double gm2 = (rates.gamma_ad - rates.gamma_bd) * delta_omega_c / 2.0;
    const double pref = -loss / (std::numbers::sqrt2 * gd);
    return {cplx{pref * gp2, 0.0}, cplx{pref * gm2, 0.0}};
}

DriveRates drive_at_site_of_a(const CouplingParams& p) {
    return {p.gamma31_aa, p.gamma31_aa, p.gamma31_ab};
}

DriveRates drive_equidistant(double gamma_dd, double gamma_cross) {
    return {gamma_dd, gamma_cross, gamma_cross};
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::A: return "A";
        case Regime::B: return "B";
        case Regime::C: return "C";
        case Regime::None: break;
    }
    return "none";
}

RegimeInputs regime_inputs(const CouplingParams& p) {
    p.validate();
    return {rabi_g(p, Branch::Plus), rabi_g(p, Branch::Minus), p.gamma32_aa, p.delta_omega_c};
}

Regime regime_classify(const RegimeInputs& in, double ratio_min) {
    if (!(ratio_min > 1.0)) {
        throw DomainError("ratio_min must be > 1");
    }
    const double gs = std::max(in.g_plus, in.g_minus);
    const double gw = std::min(in.g_plus, in.g_minus);
    const double g32 = in.gamma32;
    const double dw = in.delta_omega_c;
    auto gg = [ratio_min](double big, double small) { return big >= ratio_min * small; };
    if (gg(gs, g32) && gg(g32, dw) && gg(dw, gw)) {
        return Regime::A;
    }
    if (gg(gs, gw) && gg(gw, g32) && gg(g32, dw)) {
        return Regime::B;
    }
    if (gg(g32, gs) && gg(gs, gw) && gg(gs, dw)) {
        return Regime::C;
    }
    return Regime::None;
}

Regime regime_classify(const CouplingParams& p, double ratio_min) {
    return regime_classify(regime_inputs(p), ratio_min);
}

Branch strong_branch(const CouplingParams& p) {
    return rabi_g(p, Branch::Plus) >= rabi_g(p, Branch::Minus) ? Branch::Plus : Branch::Minus;
}

cplx regime_amplitude(const CouplingParams& p, const DriveSpec& d, Regime regime, Branch b, double t) {
    p.validate();
    if (!(t >= 0.0)) {
        throw DomainError("regime_amplitude needs t >= 0");
    }
    const double g32 = p.gamma32_aa;
    const cplx f0 = d.f0(b);
    auto rabi = [&] {
        const double g = rabi_g(p, b);
        if (g == 0.0) {
            throw RegimeError("oscillating form needs g > 0");
        }
        return f0 / g * std::exp(-g32 * t / 4.0) * std::sin(g * t);
    };
    auto two_channel = [&] {
        return 2.0 * f0 / g32 * (std::exp(-p.delta_omega_c * t) - std::exp(-g32 * t / 2.0));
    };
    switch (regime) {
        case Regime::A: return b == strong_branch(p) ? rabi() : two_channel();
        case Regime::B: return rabi();
        case Regime::C: return two_channel();
        case Regime::None: break;
    }
    throw RegimeError("no asymptotic amplitude outside regimes A, B, C");
}

}  // namespace spherent
