#include <doctest.h>

#include <random>

#include "nhkr/core.hpp"
#include "oracles.hpp"

using namespace nhkr;
using cd = std::complex<double>;

namespace {

AngleStated from_function(Eigen::Index n, auto f)
{
    AngleStated s;
    s.amps.resize(n);
    const auto theta = angle_grid(n);
    for (Eigen::Index j = 0; j < n; ++j)
        s.amps[j] = f(theta[j]);
    return s;
}

double max_abs(const ComplexVector<double>& v) { return v.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("grids follow the principal-branch and centred-index conventions")
{
    const auto theta = angle_grid(4);
    CHECK(theta[0] == -pi);
    CHECK(theta[1] == doctest::Approx(-pi / 2));
    CHECK(theta[2] == doctest::Approx(0.0));
    CHECK(theta[3] == doctest::Approx(pi / 2));

    const auto p = momentum_grid(4, resonant_hbar);
    CHECK(p[0] == -2 * resonant_hbar);
    CHECK(p[2] == 0.0);
    CHECK(p[3] == resonant_hbar);

    MomentumStated m;
    m.amps.resize(8);
    CHECK(m.index_at(0) == -4);
    CHECK(m.index_at(4) == 0);
    CHECK(m.index_at(7) == 3);
}

TEST_CASE("ground state is the n = 0 plane wave")
{
    const auto s = ground_state(64);
    CHECK(norm(s) == doctest::Approx(0.0).epsilon(1e-15));
    auto m = to_momentum(s);
    CHECK(std::abs(m.amps[32] - cd(1.0)) < 1e-14);
    m.amps[32] = 0;
    CHECK(max_abs(m.amps) < 1e-14);
}

TEST_CASE("single harmonics land in their own momentum slot")
{
    for (int n : {1, -3, 7, -8}) {
        const auto s = from_function(16, [n](double t) { return std::polar(1.0, n * t) / std::sqrt(2 * pi); });
        auto m = to_momentum(s);
        CHECK(std::abs(m.amps[n + 8] - cd(1.0)) < 1e-14);
        m.amps[n + 8] = 0;
        CHECK(max_abs(m.amps) < 1e-14);
    }
}

TEST_CASE("Jacobi-Anger: harmonics of exp(z cos theta) are I_n(z)")
{
    // exp(z cos theta) = sum_n I_n(z) e^{i n theta}, so psi_n = sqrt(2 pi) I_n(z).
    for (double z : {0.3, 1.0 / (4 * pi) * 10.0, 4.0}) {
        const auto s = from_function(128, [z](double t) { return cd(std::exp(z * std::cos(t))); });
        const auto m = to_momentum(s);
        for (int n = 0; n <= 2; ++n) {
            const double expected = std::sqrt(2 * pi) * oracle::bessel_i(n, z);
            CHECK(std::abs(m.amps[64 + n] - expected) <= 1e-13 * expected);
            CHECK(std::abs(m.amps[64 - n] - expected) <= 1e-13 * expected);
        }
    }
}

TEST_CASE("resonant-state harmonics match (-i)^n J_n((K + i lambda) t / 4 pi)")
{
    const double K = 5, lambda = 1, t = 10;
    const auto s = from_function(256, [&](double th) { return oracle::resonant_state(K, lambda, t, th); });
    const auto m = to_momentum(s);
    const cd z = cd(K, lambda) * t / (4 * pi);
    // Frozen independently: scipy.special.jv(n, (5+1j)*10/(4 pi)).
    const cd frozen[] = {{-0.5251004172532089, 0.05923120763164452},
                         {-0.10847888867108176, -0.3312971784952281},
                         {0.44064555015447315, -0.20886835935039896}};
    cd phase = 1.0;
    for (int n = 0; n <= 2; ++n) {
        CHECK(std::abs(oracle::bessel_j(n, z) - frozen[n]) < 1e-14);
        CHECK(std::abs(m.amps[128 + n] - phase * frozen[n]) < 1e-13);
        phase *= cd(0, -1);
    }
}

TEST_CASE("Parseval and round trip on random states")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int e = 1; e <= 14; ++e) {
        const Eigen::Index n = Eigen::Index{1} << e;
        AngleStated s;
        s.amps.resize(n);
        for (auto& a : s.amps)
            a = cd(g(rng), g(rng));
        s.log_norm = 3.5;
        const auto m = to_momentum(s);
        CHECK(m.log_norm == 3.5);
        CHECK(std::abs(m.amps.squaredNorm() - discrete_norm(s.amps)) <= 1e-12 * discrete_norm(s.amps));
        const auto back = to_angle(m);
        CHECK((back.amps - s.amps).norm() <= 1e-12 * s.amps.norm());
        CHECK(back.log_norm == 3.5);
    }
}

TEST_CASE("transforms reject grids that are not powers of two")
{
    AngleStated s;
    s.amps = ComplexVector<double>::Ones(12);
    CHECK_THROWS_AS(to_momentum(s), ConfigError);
}

TEST_CASE("norm is log-scale and renormalize moves the norm into log_norm")
{
    auto s = ground_state(32);
    s.amps *= 3.0;
    CHECK(norm(s) == doctest::Approx(std::log(9.0)).epsilon(1e-14));
    renormalize(s);
    CHECK(discrete_norm(s.amps) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.log_norm == doctest::Approx(std::log(9.0)).epsilon(1e-14));
    CHECK(norm(s) == doctest::Approx(std::log(9.0)).epsilon(1e-14));

    // Resonant state at lambda t / 2 pi = 1: N = I_0(1).
    const double lambda = 2 * pi, t = 1;
    const auto r = from_function(64, [&](double th) { return oracle::resonant_state(0.0, lambda, t, th); });
    CHECK(std::exp(norm(r)) == doctest::Approx(1.2660658777520084).epsilon(1e-14));
}

TEST_CASE("degenerate and non-finite states are reported")
{
    AngleStated zero;
    zero.amps = ComplexVector<double>::Zero(8);
    CHECK(is_zero(zero));
    CHECK_THROWS_AS(norm(zero), DegenerateStateError);
    CHECK_THROWS_AS(renormalize(zero), DegenerateStateError);

    auto bad = ground_state(8);
    bad.amps[3] = cd(std::nan(""), 0);
    try {
        renormalize(bad, 41);
        FAIL("expected ProtocolError");
    } catch (const ProtocolError& e) {
        CHECK(e.step() == 41);
    }
}

TEST_CASE("momentum moments are norm-rescaled and invariant under amplitude rescaling")
{
    const double K = 5, t = 10;
    const auto s = from_function(512, [&](double th) { return oracle::resonant_state(K, 0.0, t, th); });
    const auto mm = momentum_moments(s, resonant_hbar);
    CHECK(std::abs(mm.mean_p) < 1e-9);
    // <p^2> = hbar^2 <n^2> with n^2-weights of J_n^2(Kt/4pi): = K^2 t^2 / 2.
    CHECK(mm.mean_p2 == doctest::Approx(1250.0).epsilon(1e-12));

    auto scaled = s;
    scaled.amps *= 1e-120;
    scaled.log_norm += 2 * 120 * std::log(10.0);
    const auto ms = momentum_moments(scaled, resonant_hbar);
    CHECK(ms.mean_p2 == doctest::Approx(mm.mean_p2).epsilon(1e-13));
}

TEST_CASE("parameter validation and the spectral-support rule")
{
    SystemParams p;
    CHECK_NOTHROW(p.validate());
    CHECK(p.resonant());

    p.n_theta = 1000;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.n_theta = 0;
    p.lambda = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.lambda = 0;
    p.epsilon = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p.epsilon = 1e-5;
    p.hbar_eff = -1;
    CHECK_THROWS_AS(p.validate(), ConfigError);

    SystemParams q;
    q.K = 5;
    q.lambda = 1;
    q.t_max = 1000;
    // 8 (ceil(sqrt(26) 1000 / 4 pi) + 32) = 8 (406 + 32)
    CHECK(min_grid_points(q) == 3504);
    CHECK(required_grid_size(q) == 4096);
    CHECK(with_auto_grid(q).n_theta == 4096);

    q.n_theta = 2048;
    try {
        check_spectral_support(q);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("3504") != std::string::npos);
    }
    q.n_theta = 4096;
    CHECK_NOTHROW(check_spectral_support(q));

    SystemParams big;
    big.epsilon = 0.05;
    CHECK(big.epsilon_too_large());
    big.hbar_eff = 1.0;
    CHECK_FALSE(big.resonant());
}
