// One-period Floquet evolution U = U_f U_K of the kicked rotor, its adjoint
// U^dagger = U_K^dagger U_f^dagger, and multi-kick trajectories.
//
// The kick is diagonal on the angle grid, U_K(theta) = exp[-i (K + i lambda) cos(theta) / hbar],
// which at hbar = 4 pi gives the exp[-i (K + i lambda) t cos(theta) / 4 pi] resonant state.
// Its modulus exp[lambda cos(theta) / hbar] is what makes the evolution non-unitary.
// The free rotation exp(-i n^2 hbar / 2) is diagonal in momentum and is exactly
// the identity at hbar = 4 pi, in which case no transform is performed.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "nhkr/core.hpp"

namespace nhkr {

template <typename Scalar>
struct KickOperator
{
    ComplexVector<Scalar> phase_factors;
    ComplexVector<Scalar> adjoint_factors;

    static KickOperator make(const SystemParams& p, Eigen::Index n)
    {
        const RealArray<Scalar> theta = angle_grid<Scalar>(n);
        const Scalar K = Scalar(p.K), lambda = Scalar(p.lambda), hbar = Scalar(p.hbar_eff);
        KickOperator op;
        op.phase_factors.resize(n);
        for (Eigen::Index j = 0; j < n; ++j) {
            const Scalar c = std::cos(theta[j]);
            op.phase_factors[j] = std::polar(std::exp(lambda * c / hbar), -K * c / hbar);
        }
        op.adjoint_factors = op.phase_factors.conjugate();
        return op;
    }
};

template <typename Scalar>
struct FreeOperator
{
    ComplexVector<Scalar> phase_factors;   // momentum-vector order
    bool identity = false;

    static FreeOperator make(const SystemParams& p, Eigen::Index n)
    {
        // n^2 hbar / 2 = 2 pi n^2 q with q = hbar / 4 pi; reduce n^2 q mod 1 so that the
        // resonant case q = 1 yields phases of exactly zero.
        const double q = p.hbar_eff / resonant_hbar;
        FreeOperator op;
        op.phase_factors.resize(n);
        op.identity = true;
        for (Eigen::Index k = 0; k < n; ++k) {
            const double idx = static_cast<double>(k - n / 2);
            const double frac = std::fmod(idx * idx * q, 1.0);
            op.phase_factors[k] = std::polar(Scalar(1), Scalar(-2.0 * pi * frac));
            if (op.phase_factors[k] != std::complex<Scalar>(1))
                op.identity = false;
        }
        return op;
    }
};

/// Multiplies by the kick factors (or their conjugates) and renormalizes into log_norm.
template <typename Scalar>
AngleState<Scalar> apply_kick(AngleState<Scalar> s, const KickOperator<Scalar>& k, bool adjoint,
                              std::int64_t step = -1)
{
    if (s.size() != k.phase_factors.size())
        throw ConfigError("kick operator and state live on different grids");
    s.amps.array() *= (adjoint ? k.adjoint_factors : k.phase_factors).array();
    renormalize(s, step);
    return s;
}

template <typename Scalar>
MomentumState<Scalar> apply_free(MomentumState<Scalar> m, const FreeOperator<Scalar>& f, bool adjoint = false)
{
    if (m.size() != f.phase_factors.size())
        throw ConfigError("free operator and state live on different grids");
    if (adjoint)
        m.amps.array() *= f.phase_factors.array().conjugate();
    else
        m.amps.array() *= f.phase_factors.array();
    return m;
}

/// Kick and free operators for one grid, applied one period at a time in place.
template <typename Scalar>
class Propagator
{
public:
    Propagator(const SystemParams& p, Eigen::Index n)
        : kick_(KickOperator<Scalar>::make(p, n)), free_(FreeOperator<Scalar>::make(p, n))
    {
        p.validate();
        detail::require_grid(n);
    }

    Eigen::Index size() const noexcept { return kick_.phase_factors.size(); }
    const KickOperator<Scalar>& kick() const noexcept { return kick_; }
    const FreeOperator<Scalar>& free() const noexcept { return free_; }

    /// s <- U_f U_K s
    void forward(AngleState<Scalar>& s, std::int64_t step = -1) const
    {
        check(s);
        s.amps.array() *= kick_.phase_factors.array();
        if (!free_.identity)
            s = to_angle(apply_free(to_momentum(s), free_));
        renormalize(s, step);
    }

    /// s <- U_K^dagger U_f^dagger s
    void backward(AngleState<Scalar>& s, std::int64_t step = -1) const
    {
        check(s);
        if (!free_.identity)
            s = to_angle(apply_free(to_momentum(s), free_, true));
        s.amps.array() *= kick_.adjoint_factors.array();
        renormalize(s, step);
    }

private:
    void check(const AngleState<Scalar>& s) const
    {
        if (s.size() != size())
            throw ConfigError("state has " + std::to_string(s.size()) + " grid points, propagator "
                              + std::to_string(size()));
    }

    KickOperator<Scalar> kick_;
    FreeOperator<Scalar> free_;
};

template <typename Scalar>
struct Trajectory
{
    std::vector<std::int64_t> times;
    std::vector<AngleState<Scalar>> states;
};

/// Forward evolution, calling on_step(t, state) after every kick t = 1 .. steps.
template <typename Scalar, typename OnStep>
AngleState<Scalar> evolve_observed(AngleState<Scalar> s, const SystemParams& p, std::int64_t steps, OnStep&& on_step)
{
    if (steps < 0)
        throw ConfigError("steps must be >= 0");
    const Propagator<Scalar> prop(p, s.size());
    for (std::int64_t t = 1; t <= steps; ++t) {
        prop.forward(s, t);
        on_step(t, static_cast<const AngleState<Scalar>&>(s));
    }
    return s;
}

/// Forward trajectory sampled at t = 0, stride, 2 stride, ... and always at t = steps.
template <typename Scalar>
Trajectory<Scalar> evolve(const AngleState<Scalar>& s, const SystemParams& p, std::int64_t steps,
                          std::int64_t stride = 1)
{
    if (stride < 1)
        throw ConfigError("stride must be >= 1");
    Trajectory<Scalar> traj;
    traj.times.push_back(0);
    traj.states.push_back(s);
    evolve_observed(s, p, steps, [&](std::int64_t t, const AngleState<Scalar>& st) {
        if (t % stride == 0 || t == steps) {
            traj.times.push_back(t);
            traj.states.push_back(st);
        }
    });
    return traj;
}

template <typename Scalar>
AngleState<Scalar> evolve_to(const AngleState<Scalar>& s, const SystemParams& p, std::int64_t steps)
{
    return evolve_observed(s, p, steps, [](std::int64_t, const AngleState<Scalar>&) {});
}

/// Applies U^dagger steps times. Step labels in errors count down from steps.
template <typename Scalar>
AngleState<Scalar> evolve_backward(AngleState<Scalar> s, const SystemParams& p, std::int64_t steps)
{
    if (steps < 0)
        throw ConfigError("steps must be >= 0");
    const Propagator<Scalar> prop(p, s.size());
    for (std::int64_t t = steps; t >= 1; --t)
        prop.backward(s, t);
    return s;
}

} // namespace nhkr
