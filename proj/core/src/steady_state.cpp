#include "spherent/steady_state.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spherent/errors.hpp"

namespace spherent {

namespace {

using Matrix4c = Eigen::Matrix<cplx, 4, 4>;

Matrix4c to_eigen(const TwoQubitDensity& rho) {
    Matrix4c m;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m(i, j) = rho.m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

struct Exponents {
    cplx s1;
    cplx s2;
    cplx a1;
};

Exponents exponents(const CouplingParams& p, Branch b) {
    const OdeCoeffs c = ode_coeffs(p, b);
    const cplx q = std::sqrt(c.a1 * c.a1 - 4.0 * c.a2);
    const Exponents e{0.5 * (-c.a1 + q), 0.5 * (-c.a1 - q), c.a1};
    if (!(e.s1.real() < 0.0) || !(e.s2.real() < 0.0)) {
        throw DomainError("amplitude of branch " + std::string(to_string(b)) + " does not decay");
    }
    return e;
}

/// int_0^inf C_x C_y^* dt for C = F (e^{s1 t} - e^{s2 t}) / q.
/// Expanding gives four exponentials; their sum collapses to
///   F_x F_y^* (a1_x + a1_y^*) / prod_{j,k} (s_j + u_k),  u = conj(s of y)
/// which stays finite as q -> 0.
cplx cross_integral(const Exponents& x, cplx fx, const Exponents& y, cplx fy) {
    const cplx u1 = std::conj(y.s1);
    const cplx u2 = std::conj(y.s2);
    const cplx prod = (x.s1 + u1) * (x.s2 + u1) * (x.s1 + u2) * (x.s2 + u2);
    return fx * std::conj(fy) * (x.a1 + std::conj(y.a1)) / prod;
}

SteadyState combine(cplx ipp, cplx imm, cplx ipm, Gamma32Pm g) {
    SteadyState s;
    s.alpha_plus = 0.5 * g.plus * ipp.real() + 0.5 * g.minus * imm.real();
    s.alpha_minus = 0.5 * g.minus * ipp.real() + 0.5 * g.plus * imm.real();
    s.beta = 0.5 * g.plus * ipm + 0.5 * g.minus * std::conj(ipm);
    return s;
}

void require_decayed(const AmplitudeTrajectory& traj) {
    if (traj.times.empty() || traj.c_plus.size() != traj.times.size() ||
        traj.c_minus.size() != traj.times.size()) {
        throw DomainError("trajectory must carry both branches on a common time grid");
    }
    const double tail = std::max(std::abs(traj.c_plus.back()), std::abs(traj.c_minus.back()));
    if (!(tail < 1e-6)) {
        throw DomainError("trajectory has not decayed: |C(T_end)| = " + std::to_string(tail) +
                          " at T_end = " + std::to_string(traj.times.back()));
    }
}

void check_gamma32(Gamma32Pm g) {
    if (!(g.plus >= 0.0) || !(g.minus >= 0.0)) {
        throw DomainError("Gamma32_+- must be non-negative");
    }
}

}  // namespace

void SteadyState::validate() const {
    if (!std::isfinite(alpha_plus) || !std::isfinite(alpha_minus) || !std::isfinite(beta.real()) ||
        !std::isfinite(beta.imag())) {
        throw InvariantError("steady state must be finite");
    }
    if (alpha_plus < 0.0 || alpha_minus < 0.0) {
        throw InvariantError("alpha_+- must be >= 0");
    }
    if (alpha_plus + alpha_minus > 1.0 + 1e-12) {
        throw InvariantError("alpha_+ + alpha_- must not exceed 1");
    }
    if (std::norm(beta) > alpha_plus * alpha_minus + 1e-9) {
        throw InvariantError("|beta|^2 exceeds alpha_+ alpha_-");
    }
}

cplx TwoQubitDensity::trace() const { return m[0][0] + m[1][1] + m[2][2] + m[3][3]; }

void TwoQubitDensity::validate() const {
    const Matrix4c a = to_eigen(*this);
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvariantError("density matrix is not Hermitian");
    }
    if (std::abs(trace() - 1.0) > 1e-12) {
        throw InvariantError("density matrix trace differs from 1");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix4c> es(a);
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("eigensolver failed on density matrix");
    }
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw InvariantError("density matrix has a negative eigenvalue");
    }
}

Gamma32Pm gamma32_pm(const CouplingParams& p) {
    return {p.gamma32(Branch::Plus), p.gamma32(Branch::Minus)};
}

SteadyState steady_state_exact(const CouplingParams& p, const DriveSpec& d) {
    const Exponents ep = exponents(p, Branch::Plus);
    const Exponents em = exponents(p, Branch::Minus);
    const cplx ipp = cross_integral(ep, d.f_plus_0, ep, d.f_plus_0);
    const cplx imm = cross_integral(em, d.f_minus_0, em, d.f_minus_0);
    const cplx ipm = cross_integral(ep, d.f_plus_0, em, d.f_minus_0);
    return combine(ipp, imm, ipm, gamma32_pm(p));
}

SteadyState integrate_alpha_beta(const AmplitudeTrajectory& traj, Gamma32Pm gamma32) {
    check_gamma32(gamma32);
    require_decayed(traj);
    const CouplingParams& p = traj.params;
    const Exponents ep = exponents(p, Branch::Plus);
    const Exponents em = exponents(p, Branch::Minus);
    const DriveSpec& d = traj.drive;
    return combine(cross_integral(ep, d.f_plus_0, ep, d.f_plus_0),
                   cross_integral(em, d.f_minus_0, em, d.f_minus_0),
                   cross_integral(ep, d.f_plus_0, em, d.f_minus_0), gamma32);
}

SteadyState integrate_alpha_beta_quadrature(const AmplitudeTrajectory& traj, Gamma32Pm gamma32) {
    check_gamma32(gamma32);
    require_decayed(traj);
    double ipp = 0.0;
    double imm = 0.0;
    cplx ipm{0.0, 0.0};
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
        const double h = 0.5 * (traj.times[k] - traj.times[k - 1]);
        ipp += h * (std::norm(traj.c_plus[k]) + std::norm(traj.c_plus[k - 1]));
        imm += h * (std::norm(traj.c_minus[k]) + std::norm(traj.c_minus[k - 1]));
        ipm += h * (traj.c_plus[k] * std::conj(traj.c_minus[k]) +
                    traj.c_plus[k - 1] * std::conj(traj.c_minus[k - 1]));
    }
    return combine(ipp, imm, ipm, gamma32);
}

RegimeSteadyState alpha_beta_regime(const CouplingParams& p, const DriveSpec& d, Regime regime) {
    p.validate();
    if (regime == Regime::None) {
        throw RegimeError("no asymptotic steady state outside regimes A, B, C");
    }
    const double g32 = p.gamma32_aa;
    const double dw = p.delta_omega_c;
    const Branch strong = strong_branch(p);
    // asymptotic int |C|^2 for one branch
    auto weight = [&](Branch b) {
        const double f2 = std::norm(d.f0(b));
        const double g = rabi_g(p, b);
        const bool oscillating = (regime == Regime::B) || (regime == Regime::A && b == strong);
        if (oscillating) {
            if (g == 0.0) {
                throw RegimeError("oscillating branch needs g > 0");
            }
            return f2 / (g * g * g32);
        }
        const double loss = (regime == Regime::C) ? dw + 2.0 * g * g / g32 : dw;
        return 2.0 * f2 / (g32 * g32 * loss);
    };
    const Gamma32Pm gp = gamma32_pm(p);
    const double ip = weight(Branch::Plus);
    const double im = weight(Branch::Minus);
    RegimeSteadyState out;
    out.alpha_plus = 0.5 * gp.plus * ip + 0.5 * gp.minus * im;
    out.alpha_minus = 0.5 * gp.minus * ip + 0.5 * gp.plus * im;
    const double gpl = rabi_g(p, Branch::Plus);
    const double gmi = rabi_g(p, Branch::Minus);
    if (gpl != gmi) {
        const double gs = std::max(gpl, gmi);
        const cplx mix = gp.plus * d.f_plus_0 * std::conj(d.f_minus_0) +
                         gp.minus * std::conj(d.f_plus_0) * d.f_minus_0;
        if (regime == Regime::C) {
            out.beta = mix / (g32 * g32 * (dw + gs * gs / g32));
        } else {
            out.beta = mix * g32 / (2.0 * std::pow(gs, 4));
        }
    }
    return out;
}

TwoQubitDensity assemble_density(const SteadyState& s) {
    s.validate();
    TwoQubitDensity rho;
    auto& m = rho.m;
    const double ap = s.alpha_plus;
    const double am = s.alpha_minus;
    const cplx b = s.beta;
    // |+> = (e21 + e12)/sqrt2, |-> = (e21 - e12)/sqrt2
    m[kBasis11][kBasis11] = 1.0 - ap - am;
    m[kBasis21][kBasis21] = 0.5 * (ap + am + b + std::conj(b));
    m[kBasis12][kBasis12] = 0.5 * (ap + am - b - std::conj(b));
    m[kBasis21][kBasis12] = 0.5 * (ap - am - b + std::conj(b));
    m[kBasis12][kBasis21] = std::conj(m[kBasis21][kBasis12]);
    return rho;
}

double concurrence_paper(const SteadyState& s) {
    s.validate();
    const double ap = s.alpha_plus;
    const double am = s.alpha_minus;
    const double rb = s.beta.real();
    const double ib = s.beta.imag();
    const double mean = 0.5 * (ap * ap + am * am - 2.0 * (rb * rb - ib * ib));
    const double disc = ((ap + am) * (ap + am) - 4.0 * rb * rb) * ((ap - am) * (ap - am) + 4.0 * ib * ib);
    if (disc < -1e-9) {
        throw DomainError("negative discriminant in concurrence: inconsistent steady state");
    }
    const double half_root = 0.5 * std::sqrt(std::max(0.0, disc));
    const double lp = mean + half_root;
    if (mean - half_root < -1e-9) {
        throw DomainError("eigenvalue of rho rho~ below -1e-9: inconsistent steady state");
    }
    if (lp <= 0.0) {
        return 0.0;
    }
    // lambda+ lambda- = (a+ a- - |beta|^2)^2; dividing avoids the cancellation in mean - half_root
    const double root_lm = std::abs(ap * am - std::norm(s.beta)) / std::sqrt(lp);
    return std::clamp(std::sqrt(lp) - root_lm, 0.0, 1.0);
}

double concurrence_oracle(const TwoQubitDensity& rho) {
    const Matrix4c r = to_eigen(rho);
    Eigen::Matrix2cd sy;
    sy << cplx{0.0, 0.0}, cplx{0.0, -1.0}, cplx{0.0, 1.0}, cplx{0.0, 0.0};
    Matrix4c yy = Matrix4c::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            yy.block<2, 2>(2 * i, 2 * j) = sy(i, j) * sy;
        }
    }
    // rho rho~ with rho~ = Y rho* Y is similar to A A^dagger, A = sqrt(rho) Y sqrt(rho)^*,
    // so the square roots of its eigenvalues are the singular values of A.
    const Eigen::SelfAdjointEigenSolver<Matrix4c> es(r);
    if (es.info() != Eigen::Success) {
        throw ConvergenceError("eigensolver failed in concurrence oracle");
    }
    const Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix4c root = es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    const Matrix4c a = root * yy * root.conjugate();
    const Eigen::JacobiSVD<Matrix4c> svd(a);
    const Eigen::Vector4d sv = svd.singularValues();  // descending
    return std::max(0.0, sv[0] - sv[1] - sv[2] - sv[3]);
}

bool entanglement_check(const SteadyState& s, double dominance) {
    if (!(dominance > 1.0)) {
        throw DomainError("dominance must be > 1");
    }
    const double b = std::abs(s.beta);
    return s.alpha_plus >= dominance * std::max(s.alpha_minus, b) ||
           s.alpha_minus >= dominance * std::max(s.alpha_plus, b);
}

}  // namespace spherent
