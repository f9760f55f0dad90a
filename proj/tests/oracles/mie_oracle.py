"""Reference TM Mie coefficients and collective rates at 30+ digits.

B_l is assembled straight from the textbook ratio of Riccati-Bessel
combinations; the rates sum the multipole series in mpmath until the real
parts of the terms stop contributing. Prints the C++ tables embedded in
tests/unit/test_microsphere.cpp.
"""
import mpmath as mp

mp.mp.dps = 40


def sj(l, z):
    return mp.sqrt(mp.pi / (2 * z)) * mp.besselj(l + mp.mpf(1) / 2, z)


def sh(l, z):
    return mp.sqrt(mp.pi / (2 * z)) * mp.hankel1(l + mp.mpf(1) / 2, z)


def rd(f, l, z):
    return z * f(l - 1, z) - l * f(l, z)


def eps(wp, gam, w):
    return 1 + wp**2 / (1 - w**2 - 1j * w * gam)


def mie_b(wp, gam, R, l, w):
    e = mp.mpc(eps(wp, gam, w))
    z1 = 2 * mp.pi * w * R
    z2 = mp.sqrt(e) * z1
    j2 = sj(l, z2)
    d2 = rd(sj, l, z2)
    num = e * j2 * rd(sj, l, z1) - sj(l, z1) * d2
    den = e * j2 * rd(sh, l, z1) - sh(l, z1) * d2
    return -num / den


def rates(wp, gam, R, dr, theta, w, lmax):
    r = R + dr
    x = 2 * mp.pi * w * r
    ct = mp.cos(theta)
    aa = mp.mpf(0)
    ab = mp.mpf(0)
    for l in range(1, lmax + 1):
        h = sh(l, x)
        t = h * (sj(l, x) + mie_b(wp, gam, R, l, w) * h)
        c = mp.mpf(3) / 2 * l * (l + 1) * (2 * l + 1) / x**2 * t.real
        aa += c
        ab += c * mp.legendre(l, ct)
    return aa, ab


B_CASES = [
    # (omega_p, gamma, R, l, omega)
    (0.5, 1e-6, 10.0, 121, mp.mpf("1.0501")),
    (0.5, 1e-6, 10.0, 30, mp.mpf("1.0501")),
    (0.5, 1e-6, 10.0, 5, mp.mpf("0.7")),
    (0.5, 1e-3, 2.0, 3, mp.mpc("0.9", "-0.01")),
    (1.0, 1e-2, 1.0, 12, mp.mpf("1.2")),
]

RATE_CASES = [
    # (omega_p, gamma, R, dr, theta, omega, lmax)
    (0.5, 1e-6, 10.0, 0.14, mp.pi, mp.mpf("1.0501"), 1300),
    (0.5, 1e-6, 10.0, 0.14, mp.pi, mp.mpf("1.05"), 1300),
    (0.5, 1e-2, 1.0, 0.3, mp.pi / 3, mp.mpf("0.8"), 120),
]


def fmt(v):
    return mp.nstr(v, 17, min_fixed=-1, max_fixed=-1)


if __name__ == "__main__":
    for wp, gam, R, l, w in B_CASES:
        b = mie_b(wp, gam, R, l, w)
        w = mp.mpc(w)
        print("    {%s, %s, %s, %d, {%s, %s}, {%s, %s}}," % (
            wp, gam, R, l, fmt(w.real), fmt(w.imag), fmt(b.real), fmt(b.imag)))
    for wp, gam, R, dr, th, w, lmax in RATE_CASES:
        aa, ab = rates(wp, gam, R, dr, th, w, lmax)
        print("    {%s, %s, %s, %s, %s, %s, %s, %s}," % (
            wp, gam, R, dr, fmt(th), fmt(w), fmt(aa), fmt(ab)))
