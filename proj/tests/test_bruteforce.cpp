// The FFT-based protocol against explicit 16 x 16 matrix products.
#include <doctest.h>

#include <random>

#include "nhkr/otoc.hpp"
#include "nhkr/selftest.hpp"
#include "oracles.hpp"

using namespace nhkr;

TEST_CASE("rescaled C1, C2, C3 match the dense-matrix oracle on 16 points")
{
    std::mt19937_64 rng(2024);
    struct Case
    {
        double K, lambda, hbar;
    };
    const Case cases[] = {{5, 1, resonant_hbar}, {5, 0, resonant_hbar}, {2, 0.7, 1.3}, {-3, 2.5, 0.9}, {8, 0.2, 5.0}};
    for (const auto& c : cases) {
        SystemParams p;
        p.K = c.K;
        p.lambda = c.lambda;
        p.hbar_eff = c.hbar;
        p.n_theta = 16;
        const oracle::Model model(16, c.K, c.lambda, c.hbar);

        for (bool ground : {true, false}) {
            const auto psi0 = ground ? ground_state(16) : random_state(rng, 16);
            const OtocProtocol<double> proto(OperatorSpecd::momentum(), OperatorSpecd::angle(), p, psi0);
            for (int t = ground ? 1 : 0; t <= 3; ++t) {
                CAPTURE(c.K);
                CAPTURE(c.lambda);
                CAPTURE(c.hbar);
                CAPTURE(t);
                const auto got = OtocProtocol<double>::correlators(proto.run(t), OperatorSpecd::angle(), c.hbar);
                const auto want = oracle::protocol(model, psi0.amps, t);
                CHECK(std::abs(got.c1 - want.c1) < 1e-10);
                CHECK(std::abs(got.c2 - want.c2) < 1e-10);
                CHECK(std::abs(got.c3 - want.c3) < 1e-10);
            }
        }
    }
}

TEST_CASE("dense propagator agrees with the split-step one")
{
    const oracle::Model model(16, 5, 1, 1.7);
    SystemParams p;
    p.K = 5;
    p.lambda = 1;
    p.hbar_eff = 1.7;
    p.n_theta = 16;
    const Propagator<double> prop(p, 16);
    auto s = ground_state(16);
    oracle::Model::V v = s.amps.cast<oracle::Model::C>();
    for (int t = 1; t <= 3; ++t) {
        prop.forward(s, t);
        v = model.U * v;
        const oracle::Vec vd = v.cast<std::complex<double>>();
        CHECK((s.amps * std::exp(s.log_norm / 2) - vd).norm() < 1e-12 * vd.norm());
    }
}
