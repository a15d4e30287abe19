// Norm-rescaled out-of-time-ordered correlators
//
//   C(t) = C1 + C2 - 2 Re C3
//   C1 = <psi_R|B^2|psi_R>,  C2 = <phi_R|phi_R>,  C3 = <psi_R|B|phi_R>
//   psi_R = U^dagger(t) A U(t) psi_0,   phi_R = U^dagger(t) A U(t) B psi_0
//
// computed by explicit forward evolution, application of A, and backward
// evolution. Each branch records four norms (start, after forward evolution,
// after A, after time reversal); the correlators are divided by the norm
// growth accumulated on the way:
//
//   C1 <- C1 * N_psi(t0) Ntilde_psi(tn) / (N_psi(tn) N_psiR(t0))
//   C2 <- C2 * N_phi(t0) Ntilde_phi(tn) / (N_phi(tn) N_phiR(t0))
//   C3 <- C3 * sqrt(both factors)
//
// All norms are carried as logarithms.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "nhkr/analytic.hpp"
#include "nhkr/core.hpp"
#include "nhkr/floquet.hpp"

namespace nhkr {

enum class OperatorKind { momentum_p, angle_theta, displacement, projector };

template <typename Scalar>
struct OperatorSpec
{
    OperatorKind kind = OperatorKind::momentum_p;
    double epsilon = 0.0;                                    // displacement only
    std::shared_ptr<const AngleState<Scalar>> reference;    // projector only, unit discrete norm

    static OperatorSpec momentum() { return {OperatorKind::momentum_p, 0.0, nullptr}; }
    static OperatorSpec angle() { return {OperatorKind::angle_theta, 0.0, nullptr}; }
    static OperatorSpec displacement(double eps) { return {OperatorKind::displacement, eps, nullptr}; }

    /// Projector onto the normalized direction of ref.
    static OperatorSpec projector(const AngleState<Scalar>& ref)
    {
        auto r = std::make_shared<AngleState<Scalar>>(ref);
        renormalize(*r);
        r->log_norm = 0;
        return {OperatorKind::projector, 0.0, std::move(r)};
    }
};

using OperatorSpecd = OperatorSpec<double>;

/// op applied to s. A projector with zero overlap returns an all-zero state
/// (test with is_zero); every other result is renormalized.
template <typename Scalar>
AngleState<Scalar> apply_operator(const OperatorSpec<Scalar>& op, const AngleState<Scalar>& s, double hbar)
{
    AngleState<Scalar> out;
    switch (op.kind) {
    case OperatorKind::angle_theta:
        out = s;
        out.amps.array() *= angle_grid<Scalar>(s.size()).template cast<std::complex<Scalar>>();
        break;
    case OperatorKind::momentum_p: {
        auto m = to_momentum(s);
        m.amps.array() *= momentum_grid<Scalar>(m.size(), Scalar(hbar)).template cast<std::complex<Scalar>>();
        out = to_angle(m);
        break;
    }
    case OperatorKind::displacement: {
        auto m = to_momentum(s);
        const Scalar shift = Scalar(op.epsilon * hbar);
        for (Eigen::Index k = 0; k < m.size(); ++k)
            m.amps[k] *= std::polar(Scalar(1), shift * Scalar(m.index_at(k)));
        out = to_angle(m);
        break;
    }
    case OperatorKind::projector: {
        if (!op.reference || op.reference->size() != s.size())
            throw ConfigError("projector reference missing or on a different grid");
        const Scalar w = 2 * std::numbers::pi_v<Scalar> / Scalar(s.size());
        const std::complex<Scalar> overlap = w * op.reference->amps.dot(s.amps);
        out.amps = op.reference->amps * overlap;
        out.log_norm = s.log_norm;
        break;
    }
    }
    if (!is_zero(out))
        renormalize(out);
    return out;
}

/// Log-scale norms of both branches at one time t_n.
struct NormLedger
{
    double n_psi_t0 = 0.0;
    double n_psi_tn = 0.0;
    double n_tilde_psi_tn = 0.0;
    double n_psiR_t0 = 0.0;
    double n_phi_t0 = 0.0;
    double n_phi_tn = 0.0;
    double n_tilde_phi_tn = 0.0;
    double n_phiR_t0 = 0.0;

    /// log of N_psi(t0) Ntilde_psi(tn) / (N_psi(tn) N_psiR(t0))
    double log_rescale_psi() const { return n_psi_t0 + n_tilde_psi_tn - n_psi_tn - n_psiR_t0; }
    double log_rescale_phi() const { return n_phi_t0 + n_tilde_phi_tn - n_phi_tn - n_phiR_t0; }

    void validate(std::int64_t t) const
    {
        for (double v : {n_psi_t0, n_psi_tn, n_tilde_psi_tn, n_psiR_t0, n_phi_t0, n_phi_tn, n_tilde_phi_tn, n_phiR_t0})
            if (!std::isfinite(v))
                throw ProtocolError("non-finite norm ledger entry", t);
    }
};

/// Analytic mirror of a record. NaN marks "no oracle for this field".
struct Predictions
{
    static constexpr double none = std::numeric_limits<double>::quiet_NaN();
    double c1 = none;
    double c2 = none;
    double re_c3 = none;
    double otoc = none;
    double cf = none;
    double p2 = none;
    double norm_log = none;
};

struct FotocResult
{
    double fotoc = 1.0;       // |<psi|e^{i eps p}|psi> / N|^2
    double cf = 0.0;          // eps^2 Var(p), the reported C_f
    double cf_direct = 0.0;   // 1 - fotoc, evaluated without cancellation
    double mean_p = 0.0;
    double mean_p2 = 0.0;
    double norm_log = 0.0;
};

struct OtocRecord
{
    static constexpr double none = std::numeric_limits<double>::quiet_NaN();
    std::int64_t t = 0;
    double c1 = none;
    double c2 = none;
    double re_c3 = none;
    double im_c3 = none;
    double otoc = none;   // c1 + c2 - 2 re_c3
    double fotoc = none;
    double cf = none;
    double cf_direct = none;
    double mean_p = none;
    double mean_p2 = none;
    double norm_log = none;
    NormLedger ledger;
    Predictions pred;
};

/// Rescaled FOTOC and its variance shortcut for a given state.
template <typename Scalar>
FotocResult fotoc_of_state(const AngleState<Scalar>& s, const SystemParams& p)
{
    const auto m = to_momentum(s);
    const RealArray<Scalar> w = m.amps.cwiseAbs2().array();
    const Scalar total = w.sum();
    if (total == 0)
        throw DegenerateStateError("FOTOC of a zero state");
    const RealArray<Scalar> pn = momentum_grid<Scalar>(m.size(), Scalar(p.hbar_eff));

    // <e^{i eps p}> / N = 1 + d with d = sum w (e^{i phi} - 1) / W and
    // e^{i phi} - 1 = -2 sin^2(phi/2) + i sin(phi), so 1 - |1 + d|^2 = -2 Re d - |d|^2.
    const Scalar eps = Scalar(p.epsilon);
    Scalar d_re = 0, d_im = 0;
    for (Eigen::Index k = 0; k < m.size(); ++k) {
        const Scalar phi = eps * pn[k];
        const Scalar sh = std::sin(phi / 2);
        d_re += w[k] * (-2 * sh * sh);
        d_im += w[k] * std::sin(phi);
    }
    d_re /= total;
    d_im /= total;

    FotocResult r;
    r.cf_direct = static_cast<double>(-2 * d_re - (d_re * d_re + d_im * d_im));
    r.fotoc = 1.0 - r.cf_direct;
    r.mean_p = static_cast<double>((w * pn).sum() / total);
    r.mean_p2 = static_cast<double>((w * pn * pn).sum() / total);
    r.cf = p.epsilon * p.epsilon * (r.mean_p2 - r.mean_p * r.mean_p);
    r.norm_log = static_cast<double>(norm(s));
    return r;
}

/// Rescaled FOTOC after t kicks from the ground state.
inline FotocResult compute_fotoc(const SystemParams& params, std::int64_t t)
{
    const auto p = with_auto_grid(params);
    p.validate();
    return fotoc_of_state(evolve_to(ground_state<double>(p.n_theta), p, t), p);
}

struct LineFit
{
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through the (t, value) points with t in [t_lo, t_hi].
/// Throws ParameterError with fewer than three points in the window.
LineFit fit_growth_rate(std::span<const std::pair<double, double>> series, double t_lo, double t_hi);

/// The forward/backward, norm-rescaled protocol for one operator pair, one parameter set and one initial state.
template <typename Scalar>
class OtocProtocol
{
public:
    struct Branches
    {
        AngleState<Scalar> psi_t;   // U(t) psi_0
        AngleState<Scalar> psi_R;
        AngleState<Scalar> phi_R;
        NormLedger ledger;
    };

    struct Correlators
    {
        double c1 = 0.0;
        double c2 = 0.0;
        std::complex<double> c3;
    };

    OtocProtocol(OperatorSpec<Scalar> A, OperatorSpec<Scalar> B, const SystemParams& params)
        : OtocProtocol(std::move(A), std::move(B), with_auto_grid(params),
                       ground_state<Scalar>(with_auto_grid(params).n_theta), true)
    {}

    OtocProtocol(OperatorSpec<Scalar> A, OperatorSpec<Scalar> B, const SystemParams& params,
                 AngleState<Scalar> initial)
        : OtocProtocol(std::move(A), std::move(B), params, std::move(initial), false)
    {}

    const SystemParams& params() const noexcept { return params_; }

    Branches run(std::int64_t t) const
    {
        if (t < 0)
            throw ConfigError("t must be >= 0");
        AngleState<Scalar> psi = psi0_;
        AngleState<Scalar> phi = phi0_;
        for (std::int64_t s = 1; s <= t; ++s) {
            prop_.forward(psi, s);
            prop_.forward(phi, s);
        }
        return finish(t, psi, phi);
    }

    static Correlators correlators(const Branches& br, const OperatorSpec<Scalar>& B, double hbar)
    {
        const double r_psi = br.ledger.log_rescale_psi();
        const double r_phi = br.ledger.log_rescale_phi();
        Correlators c;

        const auto b_psi = apply_operator(B, br.psi_R, hbar);
        c.c1 = is_zero(b_psi) ? 0.0 : std::exp(static_cast<double>(norm(b_psi)) + r_psi);

        const auto self = inner_product(br.phi_R, br.phi_R);
        c.c2 = std::exp(std::log(static_cast<double>(self.value.real())) + static_cast<double>(self.log_scale) + r_phi);

        const auto b_phi = apply_operator(B, br.phi_R, hbar);
        if (!is_zero(b_phi)) {
            const auto ip = inner_product(br.psi_R, b_phi);
            const std::complex<double> v(static_cast<double>(ip.value.real()), static_cast<double>(ip.value.imag()));
            c.c3 = v * std::exp(static_cast<double>(ip.log_scale) + 0.5 * (r_psi + r_phi));
        }
        return c;
    }

    OtocRecord record(std::int64_t t) const { return make_record(t, run(t)); }

    /// Records at the given (strictly increasing) times, sharing the forward evolution.
    std::vector<OtocRecord> series(std::span<const std::int64_t> times) const
    {
        std::vector<OtocRecord> out;
        out.reserve(times.size());
        AngleState<Scalar> psi = psi0_;
        AngleState<Scalar> phi = phi0_;
        std::int64_t now = 0;
        for (const auto t : times) {
            if (t < now)
                throw ConfigError("sample times must be increasing");
            for (; now < t; ) {
                ++now;
                prop_.forward(psi, now);
                prop_.forward(phi, now);
            }
            out.push_back(make_record(t, finish(t, psi, phi)));
        }
        return out;
    }

private:
    OtocProtocol(OperatorSpec<Scalar> A, OperatorSpec<Scalar> B, const SystemParams& params,
                 AngleState<Scalar> initial, bool ground)
        : A_(std::move(A)), B_(std::move(B)), params_(params), prop_(params, initial.size()),
          psi0_(std::move(initial)), ground_start_(ground)
    {
        phi0_ = apply_operator(B_, psi0_, params_.hbar_eff);
        if (is_zero(phi0_))
            throw DegenerateStateError("B annihilates the initial state");
    }

    Branches finish(std::int64_t t, const AngleState<Scalar>& psi, const AngleState<Scalar>& phi) const
    {
        Branches br;
        br.psi_t = psi;
        auto& L = br.ledger;
        L.n_psi_t0 = static_cast<double>(norm(psi0_));
        L.n_psi_tn = static_cast<double>(norm(psi));
        L.n_phi_t0 = static_cast<double>(norm(phi0_));
        L.n_phi_tn = static_cast<double>(norm(phi));

        auto psi_tilde = apply_operator(A_, psi, params_.hbar_eff);
        auto phi_tilde = apply_operator(A_, phi, params_.hbar_eff);
        L.n_tilde_psi_tn = static_cast<double>(norm(psi_tilde));
        L.n_tilde_phi_tn = static_cast<double>(norm(phi_tilde));

        for (std::int64_t s = t; s >= 1; --s) {
            prop_.backward(psi_tilde, s);
            prop_.backward(phi_tilde, s);
        }
        br.psi_R = std::move(psi_tilde);
        br.phi_R = std::move(phi_tilde);
        L.n_psiR_t0 = static_cast<double>(norm(br.psi_R));
        L.n_phiR_t0 = static_cast<double>(norm(br.phi_R));
        L.validate(t);
        return br;
    }

    OtocRecord make_record(std::int64_t t, const Branches& br) const
    {
        const auto c = correlators(br, B_, params_.hbar_eff);
        OtocRecord r;
        r.t = t;
        r.c1 = c.c1;
        r.c2 = c.c2;
        r.re_c3 = c.c3.real();
        r.im_c3 = c.c3.imag();
        r.otoc = r.c1 + r.c2 - 2.0 * r.re_c3;
        r.ledger = br.ledger;

        const auto f = fotoc_of_state(br.psi_t, params_);
        r.fotoc = f.fotoc;
        r.cf = f.cf;
        r.cf_direct = f.cf_direct;
        r.mean_p = f.mean_p;
        r.mean_p2 = f.mean_p2;
        r.norm_log = f.norm_log;

        if (params_.resonant() && ground_start_) {
            const double td = static_cast<double>(t);
            r.pred.norm_log = analytic::predict_norm(params_, td);
            r.pred.p2 = analytic::predict_p2(params_, td);
            r.pred.cf = analytic::predict_cf(params_, td);
            if (A_.kind == OperatorKind::momentum_p && B_.kind == OperatorKind::angle_theta && t > 0) {
                const auto parts = analytic::predict_cp_parts(params_, td);
                const auto cp = analytic::predict_cp(params_, td);
                if (parts.valid) {
                    r.pred.c1 = parts.c1;
                    r.pred.c2 = parts.c2;
                    r.pred.re_c3 = parts.re_c3;
                }
                if (cp.valid)
                    r.pred.otoc = cp.value;
            }
        }
        return r;
    }

    OperatorSpec<Scalar> A_;
    OperatorSpec<Scalar> B_;
    SystemParams params_;
    Propagator<Scalar> prop_;
    AngleState<Scalar> psi0_;
    AngleState<Scalar> phi0_;
    bool ground_start_ = false;
};

/// Rescaled C1 after t kicks from the ground state.
inline double compute_c1(const OperatorSpecd& A, const OperatorSpecd& B, const SystemParams& p, std::int64_t t)
{
    const OtocProtocol<double> proto(A, B, p);
    return OtocProtocol<double>::correlators(proto.run(t), B, p.hbar_eff).c1;
}

inline double compute_c2(const OperatorSpecd& A, const OperatorSpecd& B, const SystemParams& p, std::int64_t t)
{
    const OtocProtocol<double> proto(A, B, p);
    return OtocProtocol<double>::correlators(proto.run(t), B, p.hbar_eff).c2;
}

inline std::complex<double> compute_c3(const OperatorSpecd& A, const OperatorSpecd& B, const SystemParams& p,
                                       std::int64_t t)
{
    const OtocProtocol<double> proto(A, B, p);
    return OtocProtocol<double>::correlators(proto.run(t), B, p.hbar_eff).c3;
}

inline OtocRecord compute_otoc(const OperatorSpecd& A, const OperatorSpecd& B, const SystemParams& p, std::int64_t t)
{
    return OtocProtocol<double>(A, B, p).record(t);
}

} // namespace nhkr
