#include "nhkr/analytic.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace nhkr::analytic {

namespace {

void check_args(int order, double x)
{
    if (order != 0 && order != 1)
        throw DomainError("bessel_i_scaled: only orders 0 and 1 are supported, got " + std::to_string(order));
    if (!(x >= 0.0))
        throw DomainError("bessel_i_scaled: argument must be >= 0, got " + std::to_string(x));
}

} // namespace

double bessel_i_scaled_series(int order, double x)
{
    check_args(order, x);
    // I_v(x) = sum_k (x/2)^{2k+v} / (k! (k+v)!); all terms positive.
    const double h = 0.5 * x;
    const double h2 = h * h;
    double term = (order == 0) ? 1.0 : h;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= h2 / (static_cast<double>(k) * static_cast<double>(k + order));
        sum += term;
        if (term < 1e-17 * sum && k > h)
            break;
    }
    return sum * std::exp(-x);
}

double bessel_i_scaled_asymptotic(int order, double x)
{
    check_args(order, x);
    if (x == 0.0)
        throw DomainError("bessel_i_scaled_asymptotic: x must be > 0");
    // e^{-x} I_v(x) ~ (2 pi x)^{-1/2} sum_k (-1)^k a_k(v) / x^k, truncated at its smallest term.
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term))
            break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum))
            break;
    }
    return sum / std::sqrt(2.0 * pi * x);
}

double bessel_i_scaled(int order, double x)
{
    check_args(order, x);
    return x < bessel_crossover ? bessel_i_scaled_series(order, x) : bessel_i_scaled_asymptotic(order, x);
}

BesselScaled BesselScaled::at(double x)
{
    return {x, bessel_i_scaled(0, x), bessel_i_scaled(1, x)};
}

double bessel_ratio_over_x(double x)
{
    if (!(x >= 0.0))
        throw DomainError("bessel_ratio_over_x: argument must be >= 0");
    if (x < 1e-6)
        return 0.5 - x * x / 16.0;
    return bessel_i_scaled(1, x) / (x * bessel_i_scaled(0, x));
}

double predict_norm(const SystemParams& p, double t)
{
    const double x = bessel_argument(p, t);
    return x + std::log(bessel_i_scaled(0, x));
}

double predict_p2(const SystemParams& p, double t)
{
    // 2 pi t (K^2+l^2) I1/(l I0) rewritten with x = l t / 2 pi as (K^2+l^2) t^2 I1/(x I0).
    const double x = bessel_argument(p, t);
    return (p.K * p.K + p.lambda * p.lambda) * t * t * bessel_ratio_over_x(x);
}

double predict_log_p_norm(const SystemParams& p, double t)
{
    const double x = bessel_argument(p, t);
    const double k2 = p.K * p.K + p.lambda * p.lambda;
    return std::log(k2) + 2.0 * std::log(t) + predict_norm(p, t) + std::log(bessel_ratio_over_x(x));
}

double predict_cf(const SystemParams& p, double t)
{
    return p.epsilon * p.epsilon * predict_p2(p, t);
}

Estimate predict_cp(const SystemParams& p, double t)
{
    if (p.lambda == 0.0)
        return {16.0 * pi * pi, true};
    const double k2 = p.K * p.K + p.lambda * p.lambda;
    return {2.0 * pi * pi * pi * k2 * t / p.lambda, bessel_argument(p, t) >= asymptotic_threshold};
}

CpParts predict_cp_parts(const SystemParams& p, double t)
{
    const double K2 = p.K * p.K;
    if (p.lambda == 0.0) {
        // (K^2 t^2 / 2 pi) * integral theta^2 sin^2 theta over [-pi, pi] = K^2 t^2 (pi^2/6 - 1/4)
        const double c1 = K2 * t * t * (pi * pi / 6.0 - 0.25);
        return {c1, c1 + 16.0 * pi * pi, c1, true};
    }
    const double l = p.lambda;
    const double l2 = l * l;
    const double k2 = K2 + l2;
    CpParts parts;
    parts.c1 = 6.0 * pi * pi * k2 / l2;
    parts.c2 = 2.0 * pi * pi * pi * k2 * t / l;
    parts.re_c3 = pi * pi * (3.0 * K2 - l2) / l2 * std::sqrt(4.0 * pi * l * k2 / (3.0 * K2 + 11.0 * l2)) * std::sqrt(t);
    parts.valid = bessel_argument(p, t) >= asymptotic_threshold;
    return parts;
}

double predict_growth_rate(Correlator which, const SystemParams& p)
{
    if (p.lambda == 0.0)
        return std::numeric_limits<double>::infinity();
    const double rate = 2.0 * pi * (p.K * p.K + p.lambda * p.lambda) / p.lambda;
    return which == Correlator::cf ? p.epsilon * p.epsilon * rate : pi * pi * rate;
}

} // namespace nhkr::analytic
