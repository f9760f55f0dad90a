#include "spherent/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "spherent/errors.hpp"

namespace spherent {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr int kRescaleBits = 600;
const double kRescaleThreshold = std::ldexp(1.0, kRescaleBits);

double max_abs_component(cplx v) { return std::max(std::abs(v.real()), std::abs(v.imag())); }

cplx ldexp_c(cplx v, long e) {
    const int ei = static_cast<int>(std::clamp<long>(e, -100000, 100000));
    return {std::ldexp(v.real(), ei), std::ldexp(v.imag(), ei)};
}

ScaledComplex normalized(cplx m, long e) {
    if (m == cplx{0.0, 0.0}) {
        return {};
    }
    int shift = 0;
    std::frexp(max_abs_component(m), &shift);
    return {ldexp_c(m, -shift), e + shift};
}

/// e^w without overflow: the real part of w goes into the binary exponent.
ScaledComplex scaled_exp(cplx w) {
    const double log2_mag = w.real() / std::numbers::ln2;
    const double e = std::floor(log2_mag);
    const double frac = w.real() - e * std::numbers::ln2;
    return normalized(std::exp(frac) * cplx{std::cos(w.imag()), std::sin(w.imag())},
                      static_cast<long>(e));
}

void check_order(int l, int lmax_allowed = kMaxOrder) {
    if (l < 0 || l > lmax_allowed) {
        throw DomainError("spherical Bessel order " + std::to_string(l) + " outside [0, " +
                          std::to_string(lmax_allowed) + "]");
    }
}

void check_argument(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("spherical Bessel argument is not finite");
    }
}

/// Rescales the working pair so that the next step, which multiplies by
/// |coef|, stays below 2^1000. Returns the number of bits removed.
long prescale(cplx& a, cplx& b, double coef_abs) {
    const double mag = std::max(max_abs_component(a), max_abs_component(b));
    if (mag == 0.0) {
        return 0;
    }
    const double log2_next = std::log2(mag) + std::log2(coef_abs);
    if (log2_next < 1000.0 && mag < kRescaleThreshold) {
        return 0;
    }
    const long bits = std::max<long>(kRescaleBits, static_cast<long>(std::ceil(log2_next)) - 400);
    a = ldexp_c(a, -bits);
    b = ldexp_c(b, -bits);
    return bits;
}

/// Highest order touched by the downward recurrences. The minimal solution
/// dominates the start error once l is well past both lmax and |z|.
int miller_start(int lmax, cplx z) {
    const double l0 = std::max<double>(lmax, std::ceil(std::abs(z)));
    return static_cast<int>(l0 + 16.0 + std::ceil(std::sqrt(40.0 * l0)));
}

/// sin z / z and sin z / z^2 - cos z / z in scaled form.
std::pair<ScaledComplex, ScaledComplex> j0_j1_closed(cplx z) {
    if (std::abs(z) < 1e-3) {
        const cplx z2 = z * z;
        const cplx j0 = 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0;
        const cplx j1 = z / 3.0 * (1.0 - z2 / 10.0 + z2 * z2 / 280.0 - z2 * z2 * z2 / 15120.0);
        return {ScaledComplex::from(j0), ScaledComplex::from(j1)};
    }
    const ScaledComplex ep = scaled_exp(kI * z);
    const ScaledComplex em = scaled_exp(-kI * z);
    const ScaledComplex sin_z = (ep + em * cplx{-1.0, 0.0}) * (1.0 / (2.0 * kI));
    const ScaledComplex cos_z = (ep + em) * cplx{0.5, 0.0};
    const ScaledComplex j0 = sin_z * (1.0 / z);
    const ScaledComplex j1 = sin_z * (1.0 / (z * z)) + cos_z * (-1.0 / z);
    return {j0, j1};
}

std::pair<ScaledComplex, ScaledComplex> y0_y1_closed(cplx z) {
    const ScaledComplex ep = scaled_exp(kI * z);
    const ScaledComplex em = scaled_exp(-kI * z);
    const ScaledComplex sin_z = (ep + em * cplx{-1.0, 0.0}) * (1.0 / (2.0 * kI));
    const ScaledComplex cos_z = (ep + em) * cplx{0.5, 0.0};
    const ScaledComplex y0 = cos_z * (-1.0 / z);
    const ScaledComplex y1 = cos_z * (-1.0 / (z * z)) + sin_z * (-1.0 / z);
    return {y0, y1};
}

/// Upward three-term recurrence f_{k+1} = (2k+1)/z f_k - f_{k-1} from two
/// scaled seeds, rescaling the working pair to stay inside double range.
std::vector<ScaledComplex> upward(int lmax, cplx z, ScaledComplex f0, ScaledComplex f1) {
    std::vector<ScaledComplex> out(static_cast<std::size_t>(lmax) + 1);
    out[0] = f0;
    if (lmax == 0) {
        return out;
    }
    out[1] = f1;
    // Bring both seeds to a common exponent so the recurrence runs on plain doubles.
    const long e = std::max(f0.exponent, f1.exponent);
    cplx prev = ldexp_c(f0.mantissa, f0.exponent - e);
    cplx cur = ldexp_c(f1.mantissa, f1.exponent - e);
    long scale = e;
    const double inv_abs_z = 1.0 / std::abs(z);
    for (int k = 1; k < lmax; ++k) {
        scale += prescale(prev, cur, (2.0 * k + 1.0) * inv_abs_z + 1.0);
        const cplx next = (2.0 * k + 1.0) / z * cur - prev;
        prev = cur;
        cur = next;
        if (!std::isfinite(cur.real()) || !std::isfinite(cur.imag())) {
            throw OverflowError("upward spherical Bessel recurrence left the representable range");
        }
        out[static_cast<std::size_t>(k) + 1] = normalized(cur, scale);
    }
    return out;
}

}  // namespace

cplx ScaledComplex::value() const { return ldexp_c(mantissa, exponent); }

double ScaledComplex::log2_abs() const {
    if (is_zero()) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log2(std::abs(mantissa)) + static_cast<double>(exponent);
}

ScaledComplex ScaledComplex::from(cplx v) { return normalized(v, 0); }

ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b) {
    return normalized(a.mantissa * b.mantissa, a.exponent + b.exponent);
}

ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b) {
    if (b.is_zero()) {
        throw DomainError("division by an exact zero in scaled arithmetic");
    }
    return normalized(a.mantissa / b.mantissa, a.exponent - b.exponent);
}

ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
    if (a.is_zero()) {
        return b;
    }
    if (b.is_zero()) {
        return a;
    }
    if (a.exponent >= b.exponent) {
        return normalized(a.mantissa + ldexp_c(b.mantissa, b.exponent - a.exponent), a.exponent);
    }
    return normalized(ldexp_c(a.mantissa, a.exponent - b.exponent) + b.mantissa, b.exponent);
}

ScaledComplex operator*(const ScaledComplex& a, cplx b) {
    return normalized(a.mantissa * b, a.exponent);
}

std::vector<ScaledComplex> spherical_j_table(int lmax, cplx z) {
    check_order(lmax);
    check_argument(z);
    std::vector<ScaledComplex> out(static_cast<std::size_t>(lmax) + 1);
    if (z == cplx{0.0, 0.0}) {
        out[0] = ScaledComplex::from(1.0);
        return out;
    }

    const int start = miller_start(lmax, z);
    cplx upper{0.0, 0.0};
    cplx cur{1.0, 0.0};
    long scale = 0;
    ScaledComplex f1_unnorm;
    const double inv_abs_z = 1.0 / std::abs(z);
    for (int k = start; k >= 1; --k) {
        if (k <= lmax) {
            out[static_cast<std::size_t>(k)] = normalized(cur, scale);
        }
        if (k == 1) {
            f1_unnorm = normalized(cur, scale);
        }
        scale += prescale(upper, cur, (2.0 * k + 1.0) * inv_abs_z + 1.0);
        const cplx lower = (2.0 * k + 1.0) / z * cur - upper;
        upper = cur;
        cur = lower;
    }
    const ScaledComplex f0_unnorm = normalized(cur, scale);
    out[0] = f0_unnorm;

    const auto [j0, j1] = j0_j1_closed(z);
    // Normalize against whichever closed form is better conditioned; j_0 and
    // j_1 never vanish together.
    const ScaledComplex factor =
        (j0.log2_abs() >= j1.log2_abs()) ? j0 / f0_unnorm : j1 / f1_unnorm;
    for (auto& v : out) {
        v = v * factor;
    }
    return out;
}

std::vector<ScaledComplex> spherical_y_table(int lmax, cplx z) {
    check_order(lmax);
    check_argument(z);
    if (z == cplx{0.0, 0.0}) {
        throw DomainError("y_l diverges at z = 0");
    }
    const auto [y0, y1] = y0_y1_closed(z);
    return upward(lmax, z, y0, y1);
}

std::vector<ScaledComplex> spherical_h1_table(int lmax, cplx z) {
    check_order(lmax);
    check_argument(z);
    if (z == cplx{0.0, 0.0}) {
        throw DomainError("h_l^(1) diverges at z = 0");
    }
    if (z.imag() == 0.0) {
        const auto j = spherical_j_table(lmax, z);
        const auto y = spherical_y_table(lmax, z);
        std::vector<ScaledComplex> out(j.size());
        for (std::size_t l = 0; l < j.size(); ++l) {
            out[l] = j[l] + y[l] * kI;
        }
        return out;
    }
    // h_0 = -i e^{iz}/z, h_1 = -e^{iz}(z + i)/z^2
    const ScaledComplex e = scaled_exp(kI * z);
    return upward(lmax, z, e * (-kI / z), e * (-(z + kI) / (z * z)));
}

std::vector<cplx> spherical_j_ratio_table(int lmax, cplx z) {
    check_order(lmax);
    check_argument(z);
    std::vector<cplx> ratio(static_cast<std::size_t>(lmax) + 1, cplx{0.0, 0.0});
    if (z == cplx{0.0, 0.0}) {
        return ratio;
    }
    const int start = miller_start(lmax, z);
    cplx r = z / (2.0 * start + 3.0);
    for (int k = start; k >= 1; --k) {
        cplx denom = (2.0 * k + 1.0) - z * r;
        if (denom == cplx{0.0, 0.0}) {
            // j_{k-1} vanishes exactly; nudge off the zero.
            denom = cplx{std::numeric_limits<double>::min(), 0.0};
        }
        r = z / denom;
        if (k <= lmax) {
            ratio[static_cast<std::size_t>(k)] = r;
        }
    }
    return ratio;
}

namespace {

cplx finite_or_throw(cplx v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw OverflowError(std::string(what) + " is not representable in double precision");
    }
    return v;
}

}  // namespace

cplx spherical_j(int l, cplx z) {
    check_order(l);
    check_argument(z);
    if (z == cplx{0.0, 0.0}) {
        if (l == 0) {
            return {1.0, 0.0};
        }
        throw DomainError("j_l(0) requested for l > 0; only the l = 0 value is defined here");
    }
    return finite_or_throw(spherical_j_table(l, z)[static_cast<std::size_t>(l)].value(), "j_l(z)");
}

cplx spherical_y(int l, cplx z) {
    check_order(l);
    return finite_or_throw(spherical_y_table(l, z)[static_cast<std::size_t>(l)].value(), "y_l(z)");
}

cplx spherical_h1(int l, cplx z) {
    check_order(l);
    check_argument(z);
    if (z.imag() == 0.0 && z.real() != 0.0) {
        // Re h = j and Im h = y exactly; rounding them separately keeps j
        // even when |y| exceeds |j| by more than the double exponent range.
        const auto lu = static_cast<std::size_t>(l);
        const double y = finite_or_throw(spherical_y_table(l, z)[lu].value(), "h_l(z)").real();
        return {spherical_j_table(l, z)[lu].value().real(), y};
    }
    return finite_or_throw(spherical_h1_table(l, z)[static_cast<std::size_t>(l)].value(),
                           "h_l(z)");
}

cplx riccati_deriv(RiccatiKind kind, int l, cplx z) {
    check_order(l);
    check_argument(z);
    if (l == 0) {
        // z j_0 = sin z, z h_0 = -i e^{iz}
        if (kind == RiccatiKind::J) {
            return finite_or_throw(std::cos(z), "[z j_0]'");
        }
        if (z == cplx{0.0, 0.0}) {
            throw DomainError("h_0 diverges at z = 0");
        }
        return finite_or_throw(std::exp(kI * z), "[z h_0]'");
    }
    if (z == cplx{0.0, 0.0}) {
        throw DomainError("Riccati derivative requested at z = 0 for l > 0");
    }
    const auto table = (kind == RiccatiKind::J) ? spherical_j_table(l, z) : spherical_h1_table(l, z);
    const auto lu = static_cast<std::size_t>(l);
    const ScaledComplex d = table[lu - 1] * z + table[lu] * cplx{-static_cast<double>(l), 0.0};
    return finite_or_throw(d.value(), "Riccati derivative");
}

std::vector<double> legendre_table(int lmax, double x) {
    if (lmax < 0) {
        throw DomainError("Legendre order must be non-negative");
    }
    if (!(std::abs(x) <= 1.0)) {
        throw DomainError("Legendre argument outside [-1, 1]");
    }
    std::vector<double> p(static_cast<std::size_t>(lmax) + 1);
    p[0] = 1.0;
    if (lmax >= 1) {
        p[1] = x;
    }
    for (int k = 1; k < lmax; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        p[ku + 1] = ((2.0 * k + 1.0) * x * p[ku] - k * p[ku - 1]) / (k + 1.0);
    }
    return p;
}

double legendre_p(int l, double x) { return legendre_table(l, x)[static_cast<std::size_t>(l)]; }

}  // namespace spherent
