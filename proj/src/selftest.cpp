#include "nhkr/selftest.hpp"

#include <algorithm>
#include <functional>

#include "nhkr/floquet.hpp"
#include "nhkr/otoc.hpp"

namespace nhkr {

namespace {

using cd = std::complex<double>;

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Eigen::Index random_grid(std::mt19937_64& rng, int lo_exp, int hi_exp)
{
    return Eigen::Index{1} << std::uniform_int_distribution<int>(lo_exp, hi_exp)(rng);
}

SystemParams random_params(std::mt19937_64& rng, bool resonant, Eigen::Index n)
{
    SystemParams p;
    p.K = uniform(rng, -10.0, 10.0);
    p.lambda = uniform(rng, 0.0, 3.0);
    p.hbar_eff = resonant ? resonant_hbar : uniform(rng, 1.0, 13.0);
    p.epsilon = std::pow(10.0, uniform(rng, -6.0, -2.0));
    p.n_theta = n;
    p.t_max = 8;
    return p;
}

/// The state with the same physical vector but amplitudes multiplied by c.
AngleStated rescaled(AngleStated s, double c)
{
    s.amps *= c;
    s.log_norm -= 2.0 * std::log(c);
    return s;
}

cd value_of(const LogComplex<double>& z) { return z.value * std::exp(z.log_scale); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double rel(cd a, cd b, double scale) { return std::abs(a - b) / std::max(scale, 1e-300); }

using Property = std::function<double(std::mt19937_64&)>;

PropertyResult run(std::string name, double tol, std::size_t cases, std::mt19937_64& rng, const Property& prop)
{
    PropertyResult r{std::move(name), cases, 0, 0.0, tol};
    for (std::size_t i = 0; i < cases; ++i) {
        const double d = prop(rng);
        r.worst = std::max(r.worst, d);
        if (!(d <= tol))
            ++r.failures;
    }
    return r;
}

double parseval(std::mt19937_64& rng)
{
    auto s = random_state(rng, random_grid(rng, 1, 12));
    s.amps *= uniform(rng, 0.1, 10.0);
    const auto m = to_momentum(s);
    return rel(m.amps.squaredNorm(), discrete_norm(s.amps));
}

double round_trip(std::mt19937_64& rng)
{
    const auto s = random_state(rng, random_grid(rng, 1, 12));
    const auto back = to_angle(to_momentum(s));
    return (back.amps - s.amps).norm() / s.amps.norm();
}

double adjoint(std::mt19937_64& rng)
{
    const auto n = random_grid(rng, 2, 8);
    const auto p = random_params(rng, false, n);
    const Propagator<double> prop(p, n);
    const auto u = random_state(rng, n);
    const auto v = random_state(rng, n);
    auto uv = v;
    prop.forward(uv);
    auto udu = u;
    prop.backward(udu);
    const cd lhs = value_of(inner_product(u, uv));
    const cd rhs = value_of(inner_product(udu, v));
    // Cauchy-Schwarz bound on |<u|Uv>| sets the scale.
    const double scale = std::exp(0.5 * (norm(u) + norm(uv)));
    return rel(lhs, rhs, scale);
}

double moments_rescaling(std::mt19937_64& rng)
{
    const auto n = random_grid(rng, 2, 10);
    const auto s = random_state(rng, n);
    const double hbar = uniform(rng, 0.3, 13.0);
    const double c = std::pow(10.0, uniform(rng, -100.0, 100.0));
    const auto a = momentum_moments(s, hbar);
    const auto b = momentum_moments(rescaled(s, c), hbar);
    const double p_scale = std::sqrt(a.mean_p2);
    return std::max(std::abs(a.mean_p - b.mean_p) / p_scale, rel(b.mean_p2, a.mean_p2));
}

double correlator_rescaling(std::mt19937_64& rng)
{
    const auto n = random_grid(rng, 3, 6);
    const auto p = random_params(rng, rng() % 2 == 0, n);
    const std::int64_t t = std::uniform_int_distribution<std::int64_t>(1, 4)(rng);
    const auto psi0 = random_state(rng, n);

    using Proto = OtocProtocol<double>;
    const auto A = OperatorSpecd::momentum();
    const auto B = OperatorSpecd::angle();
    const Proto plain(A, B, p, psi0);
    const auto br = plain.run(t);
    const auto ref = Proto::correlators(br, B, p.hbar_eff);

    const auto dev = [&](const Proto::Correlators& c) {
        const double scale = std::sqrt(ref.c1 * ref.c2);
        return std::max({rel(c.c1, ref.c1), rel(c.c2, ref.c2), rel(c.c3, ref.c3, scale)});
    };

    // Rescaled initial state.
    const Proto scaled(A, B, p, rescaled(psi0, std::pow(10.0, uniform(rng, -50.0, 50.0))));
    double worst = dev(Proto::correlators(scaled.run(t), B, p.hbar_eff));

    // Rescaled intermediate (returned) states.
    auto br2 = br;
    br2.psi_R = rescaled(br2.psi_R, std::pow(10.0, uniform(rng, -50.0, 50.0)));
    br2.phi_R = rescaled(br2.phi_R, std::pow(10.0, uniform(rng, -50.0, 50.0)));
    worst = std::max(worst, dev(Proto::correlators(br2, B, p.hbar_eff)));
    return worst;
}

double fotoc_pair(std::mt19937_64& rng)
{
    const auto n = random_grid(rng, 3, 6);
    const auto p = random_params(rng, rng() % 2 == 0, n);
    const std::int64_t t = std::uniform_int_distribution<std::int64_t>(0, 4)(rng);
    const auto psi0 = random_state(rng, n);
    const auto A = OperatorSpecd::displacement(p.epsilon);
    const auto B = OperatorSpecd::projector(psi0);
    const OtocProtocol<double> proto(A, B, p, psi0);
    const auto c = OtocProtocol<double>::correlators(proto.run(t), B, p.hbar_eff);
    return std::max({std::abs(c.c1 - c.c3.real()), std::abs(c.c2 - 1.0)});
}

} // namespace

AngleStated random_state(std::mt19937_64& rng, Eigen::Index n)
{
    std::normal_distribution<double> g;
    AngleStated s;
    s.amps.resize(n);
    for (auto& a : s.amps)
        a = cd(g(rng), g(rng));
    renormalize(s);
    s.log_norm = 0.0;
    return s;
}

std::vector<PropertyResult> run_property_suite(std::size_t cases, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<PropertyResult> out;
    out.push_back(run("parseval", 1e-12, cases, rng, parseval));
    out.push_back(run("round_trip", 1e-12, cases, rng, round_trip));
    out.push_back(run("adjoint", 1e-12, cases, rng, adjoint));
    out.push_back(run("moments_rescaling", 1e-12, cases, rng, moments_rescaling));
    out.push_back(run("correlator_rescaling", 1e-12, cases, rng, correlator_rescaling));
    out.push_back(run("fotoc_pair", 1e-10, cases, rng, fotoc_pair));
    return out;
}

} // namespace nhkr
