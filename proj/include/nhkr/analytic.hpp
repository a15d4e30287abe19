// Closed-form predictions for the resonant (hbar = 4 pi) rotor started from the
// uniform ground state. Everything is written in terms of the exponentially
// scaled Bessel functions e^{-x} I_0(x), e^{-x} I_1(x) so that the formulas
// share the log-norm bookkeeping of the simulation.
#pragma once

#include <cstdint>

#include "nhkr/core.hpp"

namespace nhkr::analytic {

/// lambda t / 2 pi at or above which the asymptotic OTOC forms are trusted.
inline constexpr double asymptotic_threshold = 5.0;

/// Power series below, asymptotic expansion at and above.
inline constexpr double bessel_crossover = 30.0;

/// e^{-x} I_order(x) for order 0 or 1 and x >= 0, to ~1e-15 relative.
double bessel_i_scaled(int order, double x);

// Both branches of bessel_i_scaled, exposed so their overlap can be tested.
double bessel_i_scaled_series(int order, double x);
double bessel_i_scaled_asymptotic(int order, double x);

struct BesselScaled
{
    double x = 0.0;
    double i0_scaled = 1.0;
    double i1_scaled = 0.0;

    static BesselScaled at(double x);
    double ratio() const { return i1_scaled / i0_scaled; }
};

/// I_1(x) / (x I_0(x)); tends to 1/2 as x -> 0.
double bessel_ratio_over_x(double x);

/// Dimensionless argument lambda t / 2 pi of the resonant-state Bessel functions.
inline double bessel_argument(const SystemParams& p, double t) { return p.lambda * t / (2.0 * pi); }

/// A prediction that only holds asymptotically; valid is false outside its regime.
struct Estimate
{
    double value = 0.0;
    bool valid = false;
};

struct CpParts
{
    double c1 = 0.0;
    double c2 = 0.0;
    double re_c3 = 0.0;
    bool valid = false;
};

enum class Correlator { cf, cp };

/// log N(t) = log I_0(lambda t / 2 pi).
double predict_norm(const SystemParams& p, double t);

/// Norm-rescaled <p^2>(t) = 2 pi t (I_1/I_0) (K^2 + lambda^2) / lambda, continuous at lambda = 0.
double predict_p2(const SystemParams& p, double t);

/// log <psi(t)|p^2|psi(t)> without rescaling, i.e. log of 2 pi (K^2+lambda^2) t I_1(x) / lambda.
double predict_log_p_norm(const SystemParams& p, double t);

/// epsilon^2 <p^2>(t); <p> vanishes for the even resonant state.
double predict_cf(const SystemParams& p, double t);

/// 2 pi^3 (K^2+lambda^2) t / lambda for lambda > 0 (valid once lambda t / 2 pi >= 5),
/// 16 pi^2 at lambda = 0.
Estimate predict_cp(const SystemParams& p, double t);

/// Asymptotic C1, C2, Re C3 for lambda > 0; the exact Hermitian forms at lambda = 0.
CpParts predict_cp_parts(const SystemParams& p, double t);

/// Linear growth rate of C_f or C_p. Infinite at lambda = 0, where growth is not linear.
double predict_growth_rate(Correlator which, const SystemParams& p);

/// Threshold lambda at which the sqrt(t) coefficient of Re C3 changes sign.
inline double lambda_critical(double K) { return std::sqrt(3.0) * std::abs(K); }

} // namespace nhkr::analytic
