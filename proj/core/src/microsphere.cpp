#include "spherent/microsphere.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "spherent/errors.hpp"

namespace spherent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw InvariantError(std::string(what) + " must be finite");
    }
}

bool has_sphere(const SphereSystem& sys) { return sys.material.omega_p > 0.0; }

/// Bessel data at one frequency needed for the TM coefficient up to lmax.
struct MieTables {
    cplx eps;
    cplx z1;
    cplx z2;
    std::vector<ScaledComplex> j1;
    std::vector<ScaledComplex> h1;
    std::vector<cplx> r2;

    MieTables(const SphereSystem& sys, int lmax, cplx omega)
        : eps(permittivity(sys.material, omega)),
          z1(kTwoPi * omega * sys.radius),
          z2(std::sqrt(eps) * z1),
          j1(spherical_j_table(lmax, z1)),
          h1(spherical_h1_table(lmax, z1)),
          r2(spherical_j_ratio_table(lmax, z2)) {}

    /// Numerator and denominator of B_l, both divided by j_{l-1}(z2):
    ///   eps [z1 f(z1)]' r - f(z1) (z2 - l r),  r = j_l(z2) / j_{l-1}(z2)
    [[nodiscard]] ScaledComplex part(const std::vector<ScaledComplex>& f, int l) const {
        const auto lu = static_cast<std::size_t>(l);
        const cplx r = r2[lu];
        const ScaledComplex deriv = f[lu - 1] * z1 + f[lu] * cplx{-static_cast<double>(l), 0.0};
        return deriv * (eps * r) + f[lu] * (-(z2 - static_cast<double>(l) * r));
    }
    [[nodiscard]] ScaledComplex numerator(int l) const { return part(j1, l); }
    [[nodiscard]] ScaledComplex denominator(int l) const { return part(h1, l); }
};

void check_mie_args(const SphereSystem& sys, int l, cplx omega) {
    sys.validate();
    if (l < 1 || l > kMaxOrder) {
        throw DomainError("multipole order " + std::to_string(l) + " outside [1, " +
                          std::to_string(kMaxOrder) + "]");
    }
    if (!std::isfinite(omega.real()) || !std::isfinite(omega.imag()) || omega == cplx{0.0, 0.0}) {
        throw DomainError("frequency must be finite and nonzero");
    }
}

void check_rate_args(const SphereSystem& sys, double omega) {
    sys.validate();
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError("frequency must be positive and finite, got " + std::to_string(omega));
    }
}

/// Per-order weights w_l with Gamma_AA = sum w_l and Gamma_AB = sum w_l P_l(cos theta):
///   w_l = 3/2 l(l+1)(2l+1)/(kr)^2 Re[h_l(kr) (j_l(kr) + B_l h_l(kr))]
std::vector<double> rate_weights(const SphereSystem& sys, double omega, int lmax) {
    const double x = kTwoPi * omega * sys.atom_radius();
    const auto jx = spherical_j_table(lmax, x);
    std::vector<double> w(static_cast<std::size_t>(lmax) + 1, 0.0);
    std::vector<ScaledComplex> hx;
    std::optional<MieTables> mie;
    if (has_sphere(sys)) {
        hx = spherical_h1_table(lmax, x);
        mie.emplace(sys, lmax, cplx{omega, 0.0});
    }
    for (int l = 1; l <= lmax; ++l) {
        const auto lu = static_cast<std::size_t>(l);
        double value = (jx[lu] * jx[lu]).value().real();
        if (mie) {
            const ScaledComplex den = mie->denominator(l);
            if (den.is_zero()) {
                throw PoleError("TM denominator vanishes at l = " + std::to_string(l));
            }
            const ScaledComplex refl = mie->numerator(l) * hx[lu] * hx[lu] / den;
            value -= refl.value().real();
        }
        const double ld = l;
        w[lu] = 1.5 * ld * (ld + 1.0) * (2.0 * ld + 1.0) / (x * x) * value;
    }
    return w;
}

/// Order beyond which both the free and the reflected series are negligible.
int initial_order(const SphereSystem& sys, double omega, int cap) {
    const double x = kTwoPi * omega * sys.atom_radius();
    double l = x + 20.0;
    if (has_sphere(sys)) {
        // reflected terms fall off like (R/r)^(2l)
        l = std::max(l, x + 20.0 + 19.0 / std::log(sys.atom_radius() / sys.radius));
    }
    return static_cast<int>(std::min<double>(cap, std::ceil(l)));
}

}  // namespace

double DrudeLorentzParams::band_edge() const { return std::sqrt(1.0 + omega_p * omega_p); }

void DrudeLorentzParams::validate() const {
    require_finite(omega_p, "omega_p");
    require_finite(gamma, "gamma");
    if (omega_p < 0.0) {
        throw InvariantError("omega_p must be >= 0");
    }
    if (!(gamma > 0.0)) {
        throw InvariantError("gamma must be > 0");
    }
}

void SphereSystem::validate() const {
    material.validate();
    require_finite(radius, "radius");
    require_finite(delta_r, "delta_r");
    require_finite(theta, "theta");
    if (!(radius > 0.0)) {
        throw InvariantError("radius must be > 0");
    }
    if (!(delta_r > 0.0)) {
        throw InvariantError("delta_r must be > 0 (atoms outside the sphere)");
    }
    if (theta < 0.0 || theta > std::numbers::pi) {
        throw InvariantError("theta must lie in [0, pi]");
    }
}

const char* to_string(ResonanceKind kind) {
    return kind == ResonanceKind::SurfaceGuided ? "SG" : "WG";
}

double band_gap_lower() { return 1.0; }

cplx permittivity(const DrudeLorentzParams& p, cplx omega) {
    const cplx d = 1.0 - omega * omega - cplx{0.0, 1.0} * omega * p.gamma;
    if (d == cplx{0.0, 0.0}) {
        throw PoleError("permittivity pole");
    }
    return 1.0 + p.omega_p * p.omega_p / d;
}

ScaledComplex mie_denominator(const SphereSystem& sys, int l, cplx omega) {
    check_mie_args(sys, l, omega);
    return MieTables(sys, l, omega).denominator(l);
}

cplx mie_coefficient(const SphereSystem& sys, int l, cplx omega) {
    check_mie_args(sys, l, omega);
    if (!has_sphere(sys)) {
        return {0.0, 0.0};
    }
    const MieTables t(sys, l, omega);
    const ScaledComplex num = t.numerator(l);
    const ScaledComplex den = t.denominator(l);
    if (den.is_zero() || den.log2_abs() < num.log2_abs() - 1000.0) {
        throw PoleError("B_l evaluated at a pole (l = " + std::to_string(l) + ")");
    }
    const cplx b = -(num / den).value();
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) {
        throw PoleError("B_l not representable (l = " + std::to_string(l) + ")");
    }
    return b;
}

CollectiveRates collective_rates(const SphereSystem& sys, double omega, const RateOptions& opt) {
    check_rate_args(sys, omega);
    const int cap = std::clamp(opt.l_cap, 1, kMaxOrder);
    const double x = kTwoPi * omega * sys.atom_radius();
    const double cos_theta = std::cos(sys.theta);
    int lmax = initial_order(sys, omega, cap);
    for (;;) {
        const auto w = rate_weights(sys, omega, lmax);
        const auto p = legendre_table(lmax, cos_theta);
        CollectiveRates out;
        int quiet = 0;
        for (int l = 1; l <= lmax; ++l) {
            const auto lu = static_cast<std::size_t>(l);
            out.gamma_aa += w[lu];
            out.gamma_ab += w[lu] * p[lu];
            quiet = (std::abs(w[lu]) <= opt.rel_tol * std::abs(out.gamma_aa)) ? quiet + 1 : 0;
            if (quiet >= opt.consecutive && l > x) {
                out.terms = l;
                return out;
            }
        }
        if (lmax >= cap) {
            throw ConvergenceError("multipole series not converged by l = " + std::to_string(cap) +
                                   " (omega = " + std::to_string(omega) +
                                   ", delta_r = " + std::to_string(sys.delta_r) + ")");
        }
        lmax = std::min(cap, 2 * lmax);
    }
}

double collective_rate(const SphereSystem& sys, double omega, bool same_atom, const RateOptions& opt) {
    const auto r = collective_rates(sys, omega, opt);
    return same_atom ? r.gamma_aa : r.gamma_ab;
}

RatesPm rates_pm(const SphereSystem& sys, double omega, const RateOptions& opt) {
    const auto r = collective_rates(sys, omega, opt);
    return {r.plus(), r.minus()};
}

double single_term_rate(const SphereSystem& sys, const Resonance& res, double omega, bool same_atom) {
    check_rate_args(sys, omega);
    if (res.l < 1 || res.l > kMaxOrder) {
        throw DomainError("resonance order outside [1, kMaxOrder]");
    }
    const double w = rate_weights(sys, omega, res.l)[static_cast<std::size_t>(res.l)];
    return same_atom ? w : w * legendre_p(res.l, std::cos(sys.theta));
}

double single_term_rate(const SphereSystem& sys, const Resonance& res, bool same_atom) {
    return single_term_rate(sys, res, res.omega_c, same_atom);
}

namespace {

constexpr double kGolden = 0.6180339887498949;

double log2_den(const SphereSystem& sys, int l, double omega) {
    return MieTables(sys, l, cplx{omega, 0.0}).denominator(l).log2_abs();
}

double golden_minimum(const SphereSystem& sys, int l, double a, double b) {
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = log2_den(sys, l, c);
    double fd = log2_den(sys, l, d);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = log2_den(sys, l, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = log2_den(sys, l, d);
        }
    }
    return 0.5 * (a + b);
}

struct NewtonResult {
    cplx root;
    bool converged = false;
    std::string reason;
};

NewtonResult newton_root(const SphereSystem& sys, int l, double start, const ResonanceSearchOptions& opt) {
    cplx w{start, 0.0};
    for (int it = 0; it < opt.newton_max_iter; ++it) {
        const double h = opt.derivative_step * std::abs(w);
        const ScaledComplex f = MieTables(sys, l, w).denominator(l);
        if (f.is_zero()) {
            return {w, true, {}};
        }
        const ScaledComplex fp = MieTables(sys, l, w + h).denominator(l);
        const ScaledComplex fm = MieTables(sys, l, w - h).denominator(l);
        const ScaledComplex df = (fp + fm * cplx{-1.0, 0.0}) * cplx{1.0 / (2.0 * h), 0.0};
        if (df.is_zero()) {
            return {w, false, "vanishing derivative"};
        }
        const cplx step = (f / df).value();
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
            return {w, false, "non-finite Newton step"};
        }
        w -= step;
        if (std::abs(step) < opt.newton_tol * std::max(1.0, std::abs(w))) {
            return {w, true, {}};
        }
    }
    return {w, false, "no convergence in " + std::to_string(opt.newton_max_iter) + " iterations"};
}

}  // namespace

ResonanceSearch find_resonances(const SphereSystem& sys, double omega_lo, double omega_hi, int l_lo,
                                int l_hi, const ResonanceSearchOptions& opt) {
    sys.validate();
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo) || !std::isfinite(omega_hi)) {
        throw DomainError("resonance window must satisfy 0 < omega_lo < omega_hi");
    }
    if (l_lo < 1 || l_hi < l_lo || l_hi > kMaxOrder) {
        throw DomainError("multipole range must satisfy 1 <= l_lo <= l_hi <= kMaxOrder");
    }
    ResonanceSearch out;
    if (!has_sphere(sys)) {
        return out;
    }
    // two padding points either side so roots near the window edges still
    // show up as interior minima
    const int inner = std::max(3, static_cast<int>(std::ceil((omega_hi - omega_lo) * opt.points_per_unit)) + 1);
    const double step = (omega_hi - omega_lo) / (inner - 1);
    const int pad = std::min(2, static_cast<int>(std::floor((omega_lo - 1e-12) / step)));
    const double grid_lo = omega_lo - pad * step;
    const int n = inner + pad + 2;
    const auto nl = static_cast<std::size_t>(l_hi - l_lo + 1);
    std::vector<double> grid(static_cast<std::size_t>(n) * nl);
    for (int i = 0; i < n; ++i) {
        const MieTables t(sys, l_hi, cplx{grid_lo + i * step, 0.0});
        for (int l = l_lo; l <= l_hi; ++l) {
            grid[static_cast<std::size_t>(i) * nl + static_cast<std::size_t>(l - l_lo)] =
                t.denominator(l).log2_abs();
        }
    }
    const double omega_l = sys.material.band_edge();
    for (int l = l_lo; l <= l_hi; ++l) {
        const auto col = static_cast<std::size_t>(l - l_lo);
        auto g = [&](int i) { return grid[static_cast<std::size_t>(i) * nl + col]; };
        std::vector<Resonance> found;
        for (int i = 0; i < n; ++i) {
            if (i == 0 || i == n - 1 || !(g(i) < g(i - 1)) || !(g(i) < g(i + 1))) {
                continue;
            }
            const double a = grid_lo + (i - 1) * step;
            const double b = grid_lo + (i + 1) * step;
            const double start = golden_minimum(sys, l, a, b);
            const NewtonResult nr = newton_root(sys, l, start, opt);
            if (!nr.converged) {
                out.failures.push_back({l, start, nr.reason});
                continue;
            }
            const double wc = nr.root.real();
            const double dw = -nr.root.imag();
            if (wc < omega_lo || wc > omega_hi) {
                continue;  // belongs to a neighbouring window
            }
            if (!(dw > 0.0)) {
                out.failures.push_back({l, start, "root not below the real axis"});
                continue;
            }
            const double at_root = MieTables(sys, l, nr.root).denominator(l).log2_abs();
            const double off = log2_den(sys, l, wc + 3.0 * dw);
            if (at_root - off > std::log2(opt.acceptance)) {
                out.failures.push_back({l, start, "denominator not small at the refined root"});
                continue;
            }
            const bool dup = std::any_of(found.begin(), found.end(), [&](const Resonance& r) {
                return std::abs(r.omega_c - wc) < 1e-9 * std::max(1.0, wc) &&
                       std::abs(r.delta_omega_c - dw) < 1e-9 * std::max(1.0, wc);
            });
            if (dup) {
                continue;
            }
            const ResonanceKind kind = (wc > band_gap_lower() && wc < omega_l)
                                           ? ResonanceKind::SurfaceGuided
                                           : ResonanceKind::WhisperingGallery;
            found.push_back({wc, dw, l, kind});
        }
        out.resonances.insert(out.resonances.end(), found.begin(), found.end());
    }
    std::sort(out.resonances.begin(), out.resonances.end(), [](const Resonance& a, const Resonance& b) {
        return a.omega_c != b.omega_c ? a.omega_c < b.omega_c : a.l < b.l;
    });
    return out;
}

LorentzFit fit_lorentzian(std::span<const double> omega, std::span<const double> values) {
    const std::size_t n = omega.size();
    if (n != values.size() || n < 5) {
        throw DomainError("Lorentzian fit needs at least 5 paired samples");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(omega[i]) || !std::isfinite(values[i])) {
            throw DomainError("Lorentzian fit samples must be finite");
        }
    }
    const auto imax = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
    const double vmin = *std::min_element(values.begin(), values.end());
    const double c0 = omega[imax];
    const double half = 0.5 * (values[imax] + vmin);
    // half width from the first half-maximum crossings on either side of the peak
    double lo = omega.front();
    double hi = omega.back();
    for (std::size_t i = imax; i-- > 0;) {
        if (values[i] < half) {
            lo = omega[i];
            break;
        }
    }
    for (std::size_t i = imax + 1; i < n; ++i) {
        if (values[i] < half) {
            hi = omega[i];
            break;
        }
    }
    // parameters: center offset from c0, half width, amplitude, background
    Eigen::Vector4d p(0.0, std::max(0.5 * std::abs(hi - lo), 1e-300), values[imax] - vmin, vmin);
    auto residuals = [&](const Eigen::Vector4d& q, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        r.resize(static_cast<Eigen::Index>(n));
        if (jac != nullptr) {
            jac->resize(static_cast<Eigen::Index>(n), 4);
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            const double u = (omega[i] - c0 - q[0]) / q[1];
            const double den = 1.0 + u * u;
            r[k] = q[3] + q[2] / den - values[i];
            if (jac != nullptr) {
                const double d_du = -2.0 * q[2] * u / (den * den);
                (*jac)(k, 0) = -d_du / q[1];
                (*jac)(k, 1) = -d_du * u / q[1];
                (*jac)(k, 2) = 1.0 / den;
                (*jac)(k, 3) = 1.0;
            }
        }
    };
    Eigen::VectorXd r;
    Eigen::MatrixXd jac;
    residuals(p, r, &jac);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    for (int it = 0; it < 500; ++it) {
        const Eigen::Matrix4d jtj = jac.transpose() * jac;
        const Eigen::Vector4d jtr = jac.transpose() * r;
        Eigen::Matrix4d a = jtj;
        a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
        const Eigen::Vector4d delta = a.ldlt().solve(-jtr);
        Eigen::Vector4d trial = p + delta;
        trial[1] = std::abs(trial[1]);
        Eigen::VectorXd rt;
        residuals(trial, rt, nullptr);
        const double trial_cost = rt.squaredNorm();
        if (std::isfinite(trial_cost) && trial_cost < cost) {
            const double gain = (cost - trial_cost) / std::max(cost, 1e-300);
            p = trial;
            cost = trial_cost;
            residuals(p, r, &jac);
            lambda = std::max(lambda / 5.0, 1e-12);
            if (gain < 1e-14 && delta.cwiseAbs().maxCoeff() < 1e-12 * p[1]) {
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) {
                break;
            }
        }
    }
    if (!std::isfinite(cost)) {
        throw ConvergenceError("Lorentzian fit diverged");
    }
    return {c0 + p[0], p[1], p[2], p[3], std::sqrt(cost / static_cast<double>(n))};
}

}  // namespace spherent
