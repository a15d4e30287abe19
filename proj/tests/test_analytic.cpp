#include <doctest.h>

#include "nhkr/analytic.hpp"
#include "oracles.hpp"

using namespace nhkr;
using namespace nhkr::analytic;

namespace {

SystemParams params(double K, double lambda, double eps = 1e-5)
{
    SystemParams p;
    p.K = K;
    p.lambda = lambda;
    p.epsilon = eps;
    return p;
}

} // namespace

TEST_CASE("scaled Bessel functions against frozen reference values")
{
    // scipy.special.i0e / i1e
    struct Row
    {
        double x, i0e, i1e;
    };
    const Row rows[] = {
        {0.5, 0.64503527044915, 0.15642080318487173},
        {1, 0.46575960759364043, 0.2079104153497085},
        {5, 0.18354081260932834, 0.16397226694454234},
        {12, 0.11642622121344044, 0.111464299290181},
        {29.9, 0.07326921904600191, 0.0720333749118688},
        {30, 0.0731459464822373, 0.07191633059864755},
        {100, 0.03994437929909668, 0.03974415302513025},
        {1000, 0.012617240455891257, 0.01261093025692863},
        {2387.32, 0.008165400518368586, 0.00816369017874989},
    };
    for (const auto& r : rows) {
        CAPTURE(r.x);
        CHECK(bessel_i_scaled(0, r.x) == doctest::Approx(r.i0e).epsilon(1e-14));
        CHECK(bessel_i_scaled(1, r.x) == doctest::Approx(r.i1e).epsilon(1e-14));
    }
    CHECK(bessel_i_scaled(0, 0.0) == 1.0);
    CHECK(bessel_i_scaled(1, 0.0) == 0.0);
    CHECK(std::exp(1.0) * bessel_i_scaled(0, 1.0) == doctest::Approx(1.2660658777520084).epsilon(1e-15));
    CHECK(std::exp(1.0) * bessel_i_scaled(1, 1.0) == doctest::Approx(0.565159103992485).epsilon(1e-15));
}

TEST_CASE("scaled Bessel functions against the long-double series oracle")
{
    for (double x : {0.01, 0.3, 2.0, 7.5, 15.0, 25.0}) {
        CAPTURE(x);
        CHECK(bessel_i_scaled(0, x) == doctest::Approx(std::exp(-x) * oracle::bessel_i(0, x)).epsilon(1e-14));
        CHECK(bessel_i_scaled(1, x) == doctest::Approx(std::exp(-x) * oracle::bessel_i(1, x)).epsilon(1e-14));
    }
}

TEST_CASE("series and asymptotic branches overlap")
{
    for (double x : {12.0, 20.0, 30.0, 40.0}) {
        CAPTURE(x);
        for (int order : {0, 1}) {
            const double s = bessel_i_scaled_series(order, x);
            const double a = bessel_i_scaled_asymptotic(order, x);
            CHECK(std::abs(s - a) <= 1e-10 * s);
        }
    }
}

TEST_CASE("bad Bessel arguments")
{
    CHECK_THROWS_AS(bessel_i_scaled(0, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_i_scaled(2, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_ratio_over_x(-0.5), DomainError);
}

TEST_CASE("I0^2 > I1^2 and the scaled ratio increases")
{
    double prev = -1;
    for (double x = 0.0; x <= 1000.0; x += 0.37) {
        const auto b = BesselScaled::at(x);
        REQUIRE(b.i0_scaled * b.i0_scaled - b.i1_scaled * b.i1_scaled > 0);
        REQUIRE(b.ratio() > prev);
        prev = b.ratio();
    }
    CHECK(prev < 1.0);
}

TEST_CASE("I1 / (x I0) tends to 1/2 smoothly")
{
    CHECK(bessel_ratio_over_x(0.0) == 0.5);
    CHECK(bessel_ratio_over_x(1e-7) == doctest::Approx(0.5).epsilon(1e-14));
    // continuity across the switch to the small-argument form
    CHECK(bessel_ratio_over_x(0.99e-6) == doctest::Approx(bessel_ratio_over_x(1.01e-6)).epsilon(1e-12));
    CHECK(bessel_ratio_over_x(1e-3) == doctest::Approx(0.5 - 1e-6 / 16).epsilon(1e-12));
}

TEST_CASE("norm prediction")
{
    const auto p = params(5, 1);
    CHECK(predict_norm(p, 2 * pi) == doctest::Approx(std::log(1.2660658777520084)).epsilon(1e-15));
    CHECK(predict_norm(params(5, 0), 123) == 0.0);
    // far past double range of I_0 itself
    const double x = 15 * 1e5 / (2 * pi);
    CHECK(std::isfinite(predict_norm(params(5, 15), 1e5)));
    CHECK(predict_norm(params(5, 15), 1e5) == doctest::Approx(x - 0.5 * std::log(2 * pi * x)).epsilon(1e-9));
}

TEST_CASE("momentum variance and C_f predictions")
{
    // Hermitian: K^2 t^2 / 2
    CHECK(predict_p2(params(5, 0), 10) == doctest::Approx(1250.0).epsilon(1e-15));
    CHECK(predict_cf(params(5, 0), 10) == doctest::Approx(1.25e-7).epsilon(1e-15));

    // large argument: 2 pi t (K^2 + lambda^2) / lambda times I1/I0
    const auto p = params(5, 1);
    const double t = 1000, x = t / (2 * pi);
    const double ratio = bessel_i_scaled(1, x) / bessel_i_scaled(0, x);
    CHECK(predict_p2(p, t) == doctest::Approx(2 * pi * t * 26 * ratio).epsilon(1e-14));
    CHECK(ratio == doctest::Approx(1 - 1 / (2 * x)).epsilon(1e-4));

    // small argument reduces to the quadratic law
    for (double t2 : {0.01, 0.3, 0.6}) {
        CHECK(predict_cf(params(5, 1), t2) == doctest::Approx(1e-10 * 26 * t2 * t2 / 2).epsilon(1e-3));
    }
    CHECK(std::exp(predict_log_p_norm(p, 37)) == doctest::Approx(predict_p2(p, 37) * std::exp(predict_norm(p, 37))));
}

TEST_CASE("C_p predictions")
{
    const auto herm = predict_cp(params(5, 0), 50);
    CHECK(herm.valid);
    CHECK(herm.value == doctest::Approx(157.91367041742973).epsilon(1e-15));

    const auto cp = predict_cp(params(5, 1), 1000);
    CHECK(cp.valid);
    CHECK(cp.value / 1000 == doctest::Approx(1612.3263873755905).epsilon(1e-13));
    CHECK_FALSE(predict_cp(params(5, 1), 10).valid);

    const auto parts = predict_cp_parts(params(5, 1), 400);
    CHECK(parts.valid);
    CHECK(parts.c1 == doctest::Approx(6 * pi * pi * 26).epsilon(1e-15));
    CHECK(parts.c1 == doctest::Approx(1539.65828656994).epsilon(1e-14));
    CHECK(parts.re_c3 / std::sqrt(400.0) == doctest::Approx(1423.553670596675).epsilon(1e-13));
    CHECK(parts.re_c3 / std::sqrt(400.0) == doctest::Approx(1423.7).epsilon(2e-4));

    const auto hp = predict_cp_parts(params(5, 0), 3);
    CHECK(hp.c1 == doctest::Approx(225 * (pi * pi / 6 - 0.25)).epsilon(1e-15));
    CHECK(hp.re_c3 == hp.c1);
    CHECK(hp.c1 + hp.c2 - 2 * hp.re_c3 == doctest::Approx(16 * pi * pi).epsilon(1e-13));

    // assembled parts agree with predict_cp to subleading order
    for (double lambda : {1.0, 5.0, 15.0}) {
        for (double t : {200.0, 1000.0}) {
            const auto q = params(5, lambda);
            const auto pp = predict_cp_parts(q, t);
            const double assembled = pp.c1 + pp.c2 - 2 * pp.re_c3;
            const double gap = std::abs(assembled - predict_cp(q, t).value) / pp.c2;
            CHECK(gap <= (pp.c1 + 2 * std::abs(pp.re_c3)) / pp.c2 + 1e-15);
        }
    }
}

TEST_CASE("growth rates and the critical lambda")
{
    CHECK(predict_growth_rate(Correlator::cf, params(5, 1)) == doctest::Approx(1.6336281798666925e-08).epsilon(1e-14));
    CHECK(predict_growth_rate(Correlator::cp, params(5, 1)) == doctest::Approx(2 * pi * pi * pi * 26).epsilon(1e-15));
    CHECK(std::isinf(predict_growth_rate(Correlator::cf, params(5, 0))));

    // (K^2 + lambda^2) / lambda is minimal at lambda = K
    const double at_k = predict_growth_rate(Correlator::cf, params(5, 5));
    CHECK(predict_growth_rate(Correlator::cf, params(5, 4.9)) > at_k);
    CHECK(predict_growth_rate(Correlator::cf, params(5, 5.1)) > at_k);

    CHECK(lambda_critical(5) == doctest::Approx(8.6603).epsilon(1e-5));
    CHECK(lambda_critical(0) == 0.0);
    CHECK(lambda_critical(10) == doctest::Approx(17.3205).epsilon(1e-5));
}
