#pragma once

#include <complex>
#include <vector>

namespace spherent {

using cplx = std::complex<double>;

/// Highest multipole order accepted by the spherical Bessel routines.
inline constexpr int kMaxOrder = 20000;

/// A complex number stored as mantissa * 2^exponent.
///
/// Spherical Bessel functions of high order span far more than the double
/// exponent range (y_l(x) for l >> x behaves like (2l-1)!!/x^(l+1)), yet the
/// physical combinations built from them are moderate. Tables carry the
/// exponent separately so those combinations can be formed before rounding.
struct ScaledComplex {
    cplx mantissa{0.0, 0.0};
    long exponent = 0;

    /// Rounds to a plain complex; overflows to inf and underflows to 0.
    [[nodiscard]] cplx value() const;
    /// log2 |value|, or -inf for an exact zero.
    [[nodiscard]] double log2_abs() const;
    [[nodiscard]] bool is_zero() const { return mantissa == cplx{0.0, 0.0}; }

    static ScaledComplex from(cplx v);
};

ScaledComplex operator*(const ScaledComplex& a, const ScaledComplex& b);
ScaledComplex operator/(const ScaledComplex& a, const ScaledComplex& b);
ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b);
ScaledComplex operator*(const ScaledComplex& a, cplx b);

/// j_l(z). Downward (Miller) recurrence normalized against the closed forms
/// of j_0 or j_1, whichever is larger in magnitude.
cplx spherical_j(int l, cplx z);

/// y_l(z), the spherical Neumann function.
cplx spherical_y(int l, cplx z);

/// h_l^(1)(z) = j_l(z) + i y_l(z). Throws OverflowError when |h| is not
/// representable and DomainError at z = 0.
cplx spherical_h1(int l, cplx z);

enum class RiccatiKind { J, H1 };

/// [z f_l(z)]' = z f_{l-1}(z) - l f_l(z) for f = j_l or h_l^(1).
cplx riccati_deriv(RiccatiKind kind, int l, cplx z);

/// Legendre polynomial P_l(x) on [-1, 1].
double legendre_p(int l, double x);

/// P_0(x) .. P_lmax(x).
std::vector<double> legendre_table(int lmax, double x);

/// j_0(z) .. j_lmax(z), each with its own binary exponent.
std::vector<ScaledComplex> spherical_j_table(int lmax, cplx z);

/// y_0(z) .. y_lmax(z) by upward recurrence.
std::vector<ScaledComplex> spherical_y_table(int lmax, cplx z);

/// h^(1)_0(z) .. h^(1)_lmax(z). For real z this is j_l + i y_l; otherwise
/// upward recurrence on h. Accuracy is relative to |h_l|, so for l >> |z|
/// the real part of a table entry does not resolve j_l (use the j table).
std::vector<ScaledComplex> spherical_h1_table(int lmax, cplx z);

/// r_l = j_l(z) / j_{l-1}(z) for l = 1..lmax (entry 0 unused, set to 0).
///
/// Evaluated by the downward continued-fraction recurrence, which never
/// touches j_l itself and therefore works for |Im z| far beyond the range
/// where j_l overflows.
std::vector<cplx> spherical_j_ratio_table(int lmax, cplx z);

}  // namespace spherent
