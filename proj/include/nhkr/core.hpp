// Domain types for the kicked rotor on the circle: model parameters, states in
// the angle and momentum representations, and the norm/moment primitives that
// every other module builds on.
//
// Conventions
//   angle grid      theta_j = -pi + 2 pi j / N,  j = 0 .. N-1  (pi itself excluded)
//   plane waves     <theta|n> = exp(i n theta) / sqrt(2 pi),  p_n = n hbar
//   momentum index  n in [-N/2, N/2), stored at vector position k = n + N/2
//   quadrature      <a|b> = (2 pi / N) sum_j conj(a_j) b_j
//
// A state carries amplitudes with discrete norm ~1 plus log_norm, the natural
// log of the norm factors stripped off so far. The physical vector is
// exp(log_norm / 2) * amps. Non-Hermitian evolution grows the norm like
// exp(lambda t / 2 pi), which leaves double range long before the runs of
// interest end, so norms are only ever handled in log form.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "nhkr/errors.hpp"

namespace nhkr {

inline constexpr double pi = std::numbers::pi;
inline constexpr double resonant_hbar = 4.0 * std::numbers::pi;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

constexpr bool is_power_of_two(std::int64_t n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

/// All model constants of one run.
struct SystemParams
{
    double K = 5.0;                    ///< real kick strength
    double lambda = 0.0;               ///< imaginary kick strength, >= 0
    double hbar_eff = resonant_hbar;   ///< effective Planck constant
    double epsilon = 1e-5;             ///< FOTOC displacement
    std::int64_t n_theta = 0;          ///< grid points; 0 picks the smallest admissible power of two
    std::int64_t t_max = 1000;         ///< number of kicks

    /// Throws ConfigError on a non power-of-two grid, lambda < 0, hbar <= 0,
    /// epsilon <= 0 or t_max < 0. Does not check spectral support.
    void validate() const;

    bool resonant() const noexcept
    {
        return std::abs(hbar_eff - resonant_hbar) <= 1e-12 * resonant_hbar;
    }

    bool epsilon_too_large() const noexcept { return epsilon > 1e-2; }
};

/// Lower bound on n_theta for a trajectory of t_max kicks: 8 (ceil(|K + i lambda| t_max / 4 pi) + 32).
/// The resonant state's harmonics decay like I_n(|K + i lambda| t / 4 pi), so past this
/// bound truncation stays below 1e-14.
inline std::int64_t min_grid_points(double K, double lambda, std::int64_t t_max)
{
    const double arg = std::hypot(K, lambda) * static_cast<double>(t_max) / (4.0 * pi);
    return 8 * (static_cast<std::int64_t>(std::ceil(arg)) + 32);
}

inline std::int64_t min_grid_points(const SystemParams& p) { return min_grid_points(p.K, p.lambda, p.t_max); }

inline std::int64_t required_grid_size(const SystemParams& p)
{
    std::int64_t n = 8;
    while (n < min_grid_points(p))
        n *= 2;
    return n;
}

inline void SystemParams::validate() const
{
    if (!std::isfinite(K))
        throw ConfigError("K must be finite");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw ConfigError("lambda must be finite and >= 0");
    if (!(hbar_eff > 0.0) || !std::isfinite(hbar_eff))
        throw ConfigError("hbar_eff must be > 0");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ConfigError("epsilon must be > 0");
    if (t_max < 0)
        throw ConfigError("t_max must be >= 0");
    if (n_theta != 0 && !is_power_of_two(n_theta))
        throw ConfigError("n_theta must be a power of two, got " + std::to_string(n_theta));
}

/// Throws ConfigError naming the required minimum when n_theta is too small for t_max.
inline void check_spectral_support(const SystemParams& p)
{
    const auto need = min_grid_points(p);
    if (p.n_theta < need)
        throw ConfigError("grid too small: n_theta=" + std::to_string(p.n_theta) + " but t_max="
                          + std::to_string(p.t_max) + " needs at least " + std::to_string(need)
                          + " (use " + std::to_string(required_grid_size(p)) + ")");
}

/// Copy of p with n_theta filled in when it was left at 0.
inline SystemParams with_auto_grid(SystemParams p)
{
    if (p.n_theta == 0)
        p.n_theta = required_grid_size(p);
    return p;
}

template <typename Scalar>
struct AngleState
{
    ComplexVector<Scalar> amps;
    Scalar log_norm{0};

    Eigen::Index size() const noexcept { return amps.size(); }
};

template <typename Scalar>
struct MomentumState
{
    ComplexVector<Scalar> amps;   // position k holds n = k - size()/2
    Scalar log_norm{0};

    Eigen::Index size() const noexcept { return amps.size(); }
    std::int64_t index_at(Eigen::Index k) const noexcept
    {
        return static_cast<std::int64_t>(k) - static_cast<std::int64_t>(amps.size() / 2);
    }
};

using AngleStated = AngleState<double>;
using MomentumStated = MomentumState<double>;

struct MomentMoments
{
    double mean_p = 0.0;
    double mean_p2 = 0.0;
};

/// Inner product in log form: the true value is value * exp(log_scale).
template <typename Scalar>
struct LogComplex
{
    std::complex<Scalar> value;
    Scalar log_scale{0};
};

namespace detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine()
{
    thread_local Eigen::FFT<Scalar> engine;
    return engine;
}

inline void require_grid(Eigen::Index n)
{
    if (!is_power_of_two(static_cast<std::int64_t>(n)) || n < 2)
        throw ConfigError("grid length must be a power of two >= 2, got " + std::to_string(n));
}

constexpr bool odd(std::int64_t n) noexcept { return (n % 2) != 0; }

} // namespace detail

template <typename Scalar = double>
RealArray<Scalar> angle_grid(Eigen::Index n)
{
    const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    RealArray<Scalar> theta(n);
    for (Eigen::Index j = 0; j < n; ++j)
        theta[j] = -std::numbers::pi_v<Scalar> + two_pi * Scalar(j) / Scalar(n);
    return theta;
}

/// p_n = n hbar in momentum-vector order.
template <typename Scalar = double>
RealArray<Scalar> momentum_grid(Eigen::Index n, Scalar hbar)
{
    RealArray<Scalar> p(n);
    for (Eigen::Index k = 0; k < n; ++k)
        p[k] = Scalar(k - n / 2) * hbar;
    return p;
}

/// Uniform state 1/sqrt(2 pi), i.e. the n = 0 plane wave.
template <typename Scalar = double>
AngleState<Scalar> ground_state(Eigen::Index n)
{
    AngleState<Scalar> s;
    s.amps = ComplexVector<Scalar>::Constant(
        n, std::complex<Scalar>(Scalar(1) / std::sqrt(2 * std::numbers::pi_v<Scalar>)));
    return s;
}

template <typename Derived>
auto discrete_norm(const Eigen::MatrixBase<Derived>& amps)
{
    using Scalar = typename Derived::RealScalar;
    return 2 * std::numbers::pi_v<Scalar> / Scalar(amps.size()) * amps.squaredNorm();
}

template <typename Scalar>
bool is_zero(const AngleState<Scalar>& s)
{
    return s.amps.squaredNorm() == Scalar(0);
}

/// Strips the discrete norm into log_norm so the stored amplitudes have unit
/// discrete norm. step only labels the error.
template <typename State>
void renormalize(State& s, std::int64_t step = -1)
{
    const auto q = discrete_norm(s.amps);
    if (!std::isfinite(q))
        throw ProtocolError("non-finite state norm", step);
    if (q == 0)
        throw DegenerateStateError("state vector underflowed to zero at step " + std::to_string(step));
    s.amps /= std::sqrt(q);
    s.log_norm += std::log(q);
}

/// log of <s|s>.
template <typename Scalar>
Scalar norm(const AngleState<Scalar>& s)
{
    const Scalar q = discrete_norm(s.amps);
    if (q == 0)
        throw DegenerateStateError("norm of a zero state");
    return s.log_norm + std::log(q);
}

template <typename Scalar>
Scalar norm(const MomentumState<Scalar>& s)
{
    const Scalar q = s.amps.squaredNorm();
    if (q == 0)
        throw DegenerateStateError("norm of a zero state");
    return s.log_norm + std::log(q);
}

template <typename Scalar>
LogComplex<Scalar> inner_product(const AngleState<Scalar>& a, const AngleState<Scalar>& b)
{
    if (a.size() != b.size())
        throw ConfigError("inner product of states on different grids");
    const Scalar w = 2 * std::numbers::pi_v<Scalar> / Scalar(a.size());
    return {w * a.amps.dot(b.amps), (a.log_norm + b.log_norm) / 2};
}

/// psi_n = (1/sqrt(2 pi)) integral exp(-i n theta) psi(theta), evaluated by FFT.
template <typename Scalar>
MomentumState<Scalar> to_momentum(const AngleState<Scalar>& s)
{
    const Eigen::Index n = s.size();
    detail::require_grid(n);
    ComplexVector<Scalar> dft(n);
    detail::fft_engine<Scalar>().fwd(dft, s.amps);

    const Scalar scale = std::sqrt(2 * std::numbers::pi_v<Scalar>) / Scalar(n);
    MomentumState<Scalar> m;
    m.amps.resize(n);
    m.log_norm = s.log_norm;
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::int64_t idx = k - n / 2;
        const Eigen::Index bin = (k + n / 2) % n;
        m.amps[k] = (detail::odd(idx) ? -scale : scale) * dft[bin];
    }
    return m;
}

template <typename Scalar>
AngleState<Scalar> to_angle(const MomentumState<Scalar>& m)
{
    const Eigen::Index n = m.size();
    detail::require_grid(n);
    ComplexVector<Scalar> coeff(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const std::int64_t idx = k - n / 2;
        const Eigen::Index bin = (k + n / 2) % n;
        coeff[bin] = detail::odd(idx) ? -m.amps[k] : m.amps[k];
    }
    AngleState<Scalar> s;
    s.amps.resize(n);
    detail::fft_engine<Scalar>().inv(s.amps, coeff);   // includes the 1/N
    s.amps *= Scalar(n) / std::sqrt(2 * std::numbers::pi_v<Scalar>);
    s.log_norm = m.log_norm;
    return s;
}

/// Norm-rescaled <p> and <p^2>, summed over the momentum representation.
template <typename Scalar>
MomentMoments momentum_moments(const AngleState<Scalar>& s, double hbar)
{
    const auto m = to_momentum(s);
    const RealArray<Scalar> w = m.amps.cwiseAbs2().array();
    const Scalar total = w.sum();
    if (total == 0)
        throw DegenerateStateError("moments of a zero state");
    const RealArray<Scalar> p = momentum_grid<Scalar>(m.size(), Scalar(hbar));
    return {static_cast<double>((w * p).sum() / total), static_cast<double>((w * p * p).sum() / total)};
}

} // namespace nhkr
