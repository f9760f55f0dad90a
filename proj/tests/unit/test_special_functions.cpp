#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "series_oracle.hpp"
#include "spherent/errors.hpp"
#include "spherent/special_functions.hpp"

using spherent::cplx;
using spherent::legendre_p;
using spherent::riccati_deriv;
using spherent::spherical_h1;
using spherent::spherical_j;
using spherent::spherical_y;

namespace {

double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

cplx to_c(oracle::lcplx v) {
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

struct Reference {
    int l;
    cplx z;
    cplx j;
    cplx y;
    cplx h;
};

// Generated by tests/oracles/bessel_oracle.py (mpmath, 60 digits).
const Reference kReference[] = {
    {5, {1.0e+1, 1.0000000000000001e-1}, {-5.5801299344828602e-2, -7.233828792161405e-3}, {9.4104147631433999e-2, -5.8034414733958559e-3}, {-4.9997857871432746e-2, 8.6870318839272594e-2}},
    {0, {1.0, 0.0}, {8.4147098480789651e-1, 0.0}, {-5.4030230586813972e-1, 0.0}, {8.4147098480789651e-1, -5.4030230586813972e-1}},
    {3, {5.0, 1.0}, {2.8300354871988547e-1, -5.2091797029079711e-2}, {1.4791676815047446e-2, 1.8676911997446949e-1}, {9.623442874541598e-2, -3.7300120214032266e-2}},
    {20, {6.6e+1, 0.0}, {1.4384911132083924e-3, 0.0}, {-1.5473581885453395e-2, 0.0}, {1.4384911132083924e-3, -1.5473581885453395e-2}},
    {121, {6.6900000000000006e+1, 0.0}, {2.0814690080248071e-22, 0.0}, {-3.5403920635037734e+17, 0.0}, {2.0814690080248071e-22, -3.5403920635037734e+17}},
    {150, {6.6e+1, 0.0}, {4.7669290558811287e-40, 0.0}, {-1.1749888455194309e+35, 0.0}, {4.7669290558811287e-40, -1.1749888455194309e+35}},
    {300, {6.6e+1, 0.0}, {1.5800039608837876e-162, 0.0}, {-1.6355341486307437e+157, 0.0}, {1.5800039608837876e-162, -1.6355341486307437e+157}},
    {40, {2.5, 0.0}, {1.232746562370015e-45, 0.0}, {-4.0135685089996997e+42, 0.0}, {1.232746562370015e-45, -4.0135685089996997e+42}},
    {10, {3.0e+1, 4.0e+1}, {-1.7229894635028357e+14, -9.5648526598742759e+14}, {9.5648526598742759e+14, -1.7229894635028357e+14}, {2.0281201887950419e-19, -2.5778370560791406e-20}},
    {7, {-3.0, 1.2e+1}, {-1.115831424768472e+2, 7.0279057503691463e+2}, {-7.0279057171812994e+2, -1.1158314466174313e+2}, {2.1848959387195698e-6, 3.3187846922075818e-6}},
    {60, {4.5e+2, -2.0e+1}, {4.462996430892742e+5, 6.7181790588364285e+4}, {6.7181790588364285e+4, -4.462996430892742e+5}, {8.925992861785484e+5, 1.3436358117672857e+5}},
    {2, {1.0e-3, 0.0}, {6.666666190476204e-8, 0.0}, {-3.0000005000001248e+9, 0.0}, {6.666666190476204e-8, -3.0000005000001248e+9}},
};

}  // namespace

TEST_CASE("spherical_j closed forms and limits") {
    CHECK(std::abs(spherical_j(0, cplx{1.0, 0.0}) - std::sin(1.0)) < 1e-15);
    CHECK(spherical_j(0, cplx{0.0, 0.0}) == cplx{1.0, 0.0});
    // j_1(z) ~ z/3 as z -> 0
    const cplx tiny{1e-8, 0.0};
    CHECK(rel_err(spherical_j(1, tiny), tiny / 3.0) < 1e-12);
    CHECK(std::abs(spherical_j(1, cplx{1e-300, 0.0})) < 1e-299);
    CHECK_THROWS_AS(spherical_j(1, cplx{0.0, 0.0}), spherent::DomainError);
    CHECK_THROWS_AS(spherical_j(-1, cplx{1.0, 0.0}), spherent::DomainError);
    CHECK_THROWS_AS(spherical_j(spherent::kMaxOrder + 1, cplx{1.0, 0.0}), spherent::DomainError);
}

TEST_CASE("spherical_h1 closed forms") {
    const cplx i{0.0, 1.0};
    const cplx z{1.0, 0.0};
    CHECK(std::abs(spherical_h1(0, z) - (-i * std::exp(i * z) / z)) < 1e-15);
    CHECK(std::abs(spherical_h1(0, z) - cplx{std::sin(1.0), -std::cos(1.0)}) < 1e-15);
    CHECK(std::abs(spherical_h1(1, z) - (-std::exp(i * z) * (z + i) / (z * z))) < 1e-15);
    CHECK_THROWS_AS(spherical_h1(0, cplx{0.0, 0.0}), spherent::DomainError);
}

TEST_CASE("multiprecision reference values") {
    for (const auto& ref : kReference) {
        CAPTURE(ref.l);
        CAPTURE(ref.z);
        CHECK(rel_err(spherical_j(ref.l, ref.z), ref.j) < 1e-10);
        CHECK(rel_err(spherical_y(ref.l, ref.z), ref.y) < 1e-10);
        CHECK(rel_err(spherical_h1(ref.l, ref.z), ref.h) < 1e-10);
    }
}

TEST_CASE("orders beyond double range stay finite in scaled tables") {
    // j_250(1 + 0.5i) ~ 1e-557 and y_250 ~ 1e554: not representable as doubles.
    const cplx z{1.0, 0.5};
    CHECK_THROWS_AS(spherical_h1(250, z), spherent::OverflowError);
    const auto j = spherent::spherical_j_table(250, z);
    const auto h = spherent::spherical_h1_table(250, z);
    const double log2_10 = std::log2(10.0);
    CHECK(j[250].log2_abs() == doctest::Approx(std::log2(1.24242) - 557.0 * log2_10).epsilon(1e-5));
    CHECK(h[250].log2_abs() == doctest::Approx(std::log2(1.43695) + 554.0 * log2_10).epsilon(1e-5));
    // j_l h_l itself is moderate (mpmath: -7.9839524e-4 - 1.5968223e-3 i).
    const cplx prod = (j[250] * h[250]).value();
    CHECK(rel_err(prod, cplx{-7.9839524e-4, -1.5968223e-3}) < 1e-7);
}

TEST_CASE("series oracle at moderate argument") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> re(-8.0, 8.0);
    std::uniform_real_distribution<double> im(-4.0, 4.0);
    std::uniform_int_distribution<int> order(0, 25);
    for (int n = 0; n < 200; ++n) {
        const cplx z{re(rng), im(rng)};
        if (std::abs(z) < 0.05) {
            continue;
        }
        const int l = order(rng);
        const oracle::lcplx zl{z.real(), z.imag()};
        CAPTURE(l);
        CAPTURE(z);
        CHECK(rel_err(spherical_j(l, z), to_c(oracle::series_j(l, zl))) < 1e-10);
        CHECK(rel_err(spherical_y(l, z), to_c(oracle::series_y(l, zl))) < 1e-9);
    }
    // the specific case (5, 10 + 0.1i)
    const cplx z{10.0, 0.1};
    CHECK(rel_err(spherical_j(5, z), to_c(oracle::series_j(5, {10.0L, 0.1L}))) < 1e-10);
}

TEST_CASE("Re h equals j for real argument") {
    for (double x : {0.5, 3.0, 17.0, 66.0, 150.0}) {
        for (int l : {0, 1, 5, 40, 120, 200}) {
            if (spherent::spherical_y_table(l, cplx{x, 0.0})[static_cast<std::size_t>(l)].log2_abs() > 1000.0) {
                CHECK_THROWS_AS(spherical_h1(l, cplx{x, 0.0}), spherent::OverflowError);
                continue;
            }
            const cplx h = spherical_h1(l, cplx{x, 0.0});
            const cplx j = spherical_j(l, cplx{x, 0.0});
            CAPTURE(x);
            CAPTURE(l);
            CHECK(std::abs(h.real() - j.real()) <= 1e-12 * std::abs(j.real()));
        }
    }
}

TEST_CASE("Wronskian j_l y_l' - j_l' y_l = 1/z^2") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xs(0.5, 200.0);
    std::uniform_int_distribution<int> order(0, 150);
    int checked = 0;
    for (int n = 0; n < 400; ++n) {
        const double x = xs(rng);
        const int l = order(rng);
        const cplx z{x, 0.0};
        const auto j = spherent::spherical_j_table(l + 1, z);
        const auto y = spherent::spherical_y_table(l + 1, z);
        // f' = l/z f_l - f_{l+1}; the combination is formed in scaled arithmetic.
        using spherent::ScaledComplex;
        const auto lu = static_cast<std::size_t>(l);
        const ScaledComplex jp = j[lu] * cplx{l / x, 0.0} + j[lu + 1] * cplx{-1.0, 0.0};
        const ScaledComplex yp = y[lu] * cplx{l / x, 0.0} + y[lu + 1] * cplx{-1.0, 0.0};
        const ScaledComplex w = j[lu] * yp + (jp * y[lu]) * cplx{-1.0, 0.0};
        CAPTURE(x);
        CAPTURE(l);
        CHECK(std::abs(w.value() * (x * x) - 1.0) < 1e-8);
        ++checked;
    }
    CHECK(checked == 400);
}

TEST_CASE("Wronskian at (20, 66) cross-checks h_20(66)") {
    const cplx z{66.0, 0.0};
    const cplx h = spherical_h1(20, z);
    const cplx hp = spherical_h1(19, z) - 21.0 / z * h;
    const cplx j = spherical_j(20, z);
    const cplx jp = spherical_j(19, z) - 21.0 / z * j;
    // j y' - j' y with y = Im h for real z
    CHECK(std::abs((j * hp.imag() - jp * h.imag()) * (66.0 * 66.0) - 1.0) < 1e-10);
}

TEST_CASE("three-term recurrence consistency") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> re(0.5, 120.0);
    std::uniform_real_distribution<double> im(-30.0, 30.0);
    std::uniform_int_distribution<int> order(1, 150);
    for (int n = 0; n < 300; ++n) {
        const cplx z{re(rng), im(rng)};
        const int l = order(rng);
        CAPTURE(z);
        CAPTURE(l);
        for (const auto& table : {spherent::spherical_j_table(l + 1, z), spherent::spherical_h1_table(l + 1, z)}) {
            using spherent::ScaledComplex;
            const auto lu = static_cast<std::size_t>(l);
            const ScaledComplex lhs = table[lu - 1] + table[lu + 1];
            const ScaledComplex rhs = table[lu] * cplx{(2.0 * l + 1.0), 0.0} * (1.0 / z);
            const double scale = std::max({table[lu - 1].log2_abs(), table[lu + 1].log2_abs(),
                                           rhs.log2_abs()});
            const double diff = (lhs + rhs * cplx{-1.0, 0.0}).log2_abs();
            CHECK(diff - scale < std::log2(1e-9));
        }
    }
}

TEST_CASE("conjugation symmetry j_l(conj z) = conj j_l(z)") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-100.0, 100.0);
    std::uniform_real_distribution<double> im(-40.0, 40.0);
    std::uniform_int_distribution<int> order(0, 200);
    for (int n = 0; n < 200; ++n) {
        const cplx z{re(rng), im(rng)};
        const int l = order(rng);
        const cplx a = spherical_j(l, std::conj(z));
        const cplx b = std::conj(spherical_j(l, z));
        CHECK(std::abs(a - b) <= 1e-13 * std::abs(b));
    }
}

TEST_CASE("ratio table agrees with j_l / j_{l-1}") {
    for (const cplx z : {cplx{5.0, 1.0}, cplx{66.0, 0.0}, cplx{0.3, 79.0}, cplx{1.0, 700.0}}) {
        const auto r = spherent::spherical_j_ratio_table(160, z);
        if (std::abs(z.imag()) < 600.0) {
            const auto j = spherent::spherical_j_table(160, z);
            for (int l : {1, 20, 121, 160}) {
                const auto lu = static_cast<std::size_t>(l);
                CHECK(rel_err(r[lu], (j[lu] / j[lu - 1]).value()) < 1e-11);
            }
        }
        for (const auto& v : r) {
            CHECK(std::isfinite(std::abs(v)));
        }
    }
}

TEST_CASE("riccati_deriv") {
    const double pi = std::numbers::pi;
    CHECK(std::abs(riccati_deriv(spherent::RiccatiKind::J, 0, cplx{pi, 0.0}) - (-1.0)) < 1e-15);
    CHECK(std::abs(riccati_deriv(spherent::RiccatiKind::H1, 0, cplx{1.0, 0.0}) -
                   std::exp(cplx{0.0, 1.0})) < 1e-15);

    // central difference of z j_3(z) at 5 + i
    const cplx z{5.0, 1.0};
    const double h = 1e-6;
    auto zj = [](cplx w) { return w * spherical_j(3, w); };
    const cplx fd = (zj(z + h) - zj(z - h)) / (2.0 * h);
    CHECK(rel_err(riccati_deriv(spherent::RiccatiKind::J, 3, z), fd) < 1e-6);

    // matches a long-double series derivative for h_l
    const oracle::lcplx zl{5.0L, 1.0L};
    const oracle::lcplx ds = zl * oracle::series_h1(2, zl) - 3.0L * oracle::series_h1(3, zl);
    CHECK(rel_err(riccati_deriv(spherent::RiccatiKind::H1, 3, z), to_c(ds)) < 1e-10);
}

TEST_CASE("legendre_p") {
    for (int l = 0; l <= 200; ++l) {
        CHECK(legendre_p(l, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(legendre_p(l, -1.0) == doctest::Approx(l % 2 == 0 ? 1.0 : -1.0).epsilon(1e-13));
    }
    CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK_THROWS_AS(legendre_p(3, 1.0000001), spherent::DomainError);
    CHECK_THROWS_AS(legendre_p(3, std::nan("")), spherent::DomainError);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> xs(-1.0, 1.0);
    for (int n = 0; n < 200; ++n) {
        const double x = xs(rng);
        const auto p = spherent::legendre_table(300, x);
        const auto q = spherent::legendre_table(300, -x);
        for (int l = 0; l <= 300; ++l) {
            const auto lu = static_cast<std::size_t>(l);
            CHECK(std::abs(p[lu]) <= 1.0 + 1e-12);
            CHECK(std::abs(q[lu] - (l % 2 == 0 ? 1.0 : -1.0) * p[lu]) < 1e-12);
        }
    }
}
