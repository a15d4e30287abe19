// Independent reference implementations used only by the tests: Bessel series
// in long double, the closed-form resonant state, and a dense-matrix version of
// the OTOC protocol that never touches an FFT.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using cld = std::complex<long double>;
using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;

/// J_n(z) = sum_m (-1)^m (z/2)^(2m+n) / (m! (m+n)!), for modest |z|.
inline cd bessel_j(int n, cd z)
{
    const cld h = cld(z) / 2.0L;
    cld term = 1.0L;
    for (int k = 1; k <= n; ++k)
        term *= h / static_cast<long double>(k);
    cld sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -h * h / static_cast<long double>(m * (m + n));
        sum += term;
        if (std::abs(term) < 1e-30L * std::abs(sum))
            break;
    }
    return cd(sum);
}

/// I_n(x) by the same series with all signs positive.
inline double bessel_i(int n, double x)
{
    const long double h = x / 2.0L;
    long double term = 1.0L;
    for (int k = 1; k <= n; ++k)
        term *= h / k;
    long double sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= h * h / (static_cast<long double>(m) * (m + n));
        sum += term;
        if (term < 1e-30L * sum)
            break;
    }
    return static_cast<double>(sum);
}

/// exp[-i (K + i lambda) t cos(theta) / 4 pi] / sqrt(2 pi): the resonant state after t kicks.
inline cd resonant_state(double K, double lambda, double t, double theta)
{
    const cd z = cd(K, lambda) * t * std::cos(theta) / (4.0 * pi);
    return std::exp(cd(0, -1) * z) / std::sqrt(2.0 * pi);
}

inline double theta(int j, int n) { return -pi + 2.0 * pi * j / n; }

/// Maps angle amplitudes to momentum amplitudes, psi_n = (sqrt(2 pi)/N) sum_j e^{-i n theta_j} a_j,
/// rows ordered n = -N/2 .. N/2-1.
template <typename Real>
Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> fourier(int n)
{
    const Real two_pi = 2 * std::numbers::pi_v<Real>;
    Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> F(n, n);
    for (int r = 0; r < n; ++r)
        for (int j = 0; j < n; ++j)
            F(r, j) = std::polar(std::sqrt(two_pi) / n, -(r - n / 2) * (-std::numbers::pi_v<Real> + two_pi * j / n));
    return F;
}

/// Dense one-period propagator, momentum and angle operators, in extended precision so that
/// the oracle's own rounding stays far below the tolerances it is used with.
struct Model
{
    using Real = long double;
    using C = std::complex<Real>;
    using M = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
    using V = Eigen::Matrix<C, Eigen::Dynamic, 1>;

    int n;
    M U, P, Theta;
    Real w;   // quadrature weight 2 pi / N

    Model(int n_, double K, double lambda, double hbar) : n(n_), w(2 * std::numbers::pi_v<Real> / n_)
    {
        const M F = fourier<Real>(n);
        const M Finv = F.inverse();
        M kick = M::Zero(n, n), free = M::Zero(n, n), pd = M::Zero(n, n);
        Theta = M::Zero(n, n);
        const Real h = hbar;
        for (int j = 0; j < n; ++j) {
            const Real th = -std::numbers::pi_v<Real> + 2 * std::numbers::pi_v<Real> * j / n;
            kick(j, j) = std::exp(C(0, -1) * C(K, lambda) * std::cos(th) / h);
            Theta(j, j) = th;
        }
        for (int r = 0; r < n; ++r) {
            const Real m = r - n / 2;
            free(r, r) = std::polar(Real(1), -m * m * h / 2);
            pd(r, r) = m * h;
        }
        U = Finv * free * F * kick;
        P = Finv * pd * F;
    }

    Real nrm(const V& v) const { return w * v.squaredNorm(); }
    C ip(const V& a, const V& b) const { return w * a.dot(b); }
};

struct Parts
{
    double c1, c2;
    cd c3;
};

/// Rescaled C1, C2, C3 for A = p, B = theta from the initial vector psi0, all by matrix products.
inline Parts protocol(const Model& m, const Vec& psi0_d, int t)
{
    using M = Model::M;
    using V = Model::V;
    const V psi0 = psi0_d.cast<Model::C>();
    M Ut = M::Identity(m.n, m.n);
    for (int s = 0; s < t; ++s)
        Ut = m.U * Ut;
    const M Uadj = Ut.adjoint();

    const V psi_t = Ut * psi0;
    const V psi_tilde = m.P * psi_t;
    const V psi_R = Uadj * psi_tilde;

    const V phi0 = m.Theta * psi0;
    const V phi_t = Ut * phi0;
    const V phi_tilde = m.P * phi_t;
    const V phi_R = Uadj * phi_tilde;

    const auto f_psi = m.nrm(psi0) * m.nrm(psi_tilde) / (m.nrm(psi_t) * m.nrm(psi_R));
    const auto f_phi = m.nrm(phi0) * m.nrm(phi_tilde) / (m.nrm(phi_t) * m.nrm(phi_R));

    Parts out;
    out.c1 = static_cast<double>(m.nrm(m.Theta * psi_R) * f_psi);
    out.c2 = static_cast<double>(m.nrm(phi_R) * f_phi);
    out.c3 = cd(m.ip(psi_R, m.Theta * phi_R) * std::sqrt(f_psi * f_phi));
    return out;
}

} // namespace oracle
