#include <atomic>
#include <chrono>
#include <exception>
#include <iostream>
#include <sstream>
#include <thread>

#include "nhkr/expcli.hpp"

namespace nhkr::expcli {

namespace {

struct Task
{
    double K = 0.0;
    double lambda = 0.0;
};

bool needs_otoc(Scenario s)
{
    return s != Scenario::fig1_cf && s != Scenario::criticality_scan;
}

void fill_fotoc(OtocRecord& r, const FotocResult& f)
{
    r.fotoc = f.fotoc;
    r.cf = f.cf;
    r.cf_direct = f.cf_direct;
    r.mean_p = f.mean_p;
    r.mean_p2 = f.mean_p2;
    r.norm_log = f.norm_log;
}

void fill_state_predictions(OtocRecord& r, const SystemParams& p)
{
    if (!p.resonant())
        return;
    const double t = static_cast<double>(r.t);
    r.pred.norm_log = analytic::predict_norm(p, t);
    r.pred.p2 = analytic::predict_p2(p, t);
    r.pred.cf = analytic::predict_cf(p, t);
}

std::vector<OtocRecord> fotoc_records(const SystemParams& p, const std::vector<std::int64_t>& times)
{
    std::vector<OtocRecord> out;
    const Propagator<double> prop(p, p.n_theta);
    auto psi = ground_state<double>(p.n_theta);
    std::int64_t now = 0;
    for (const auto t : times) {
        while (now < t)
            prop.forward(psi, ++now);
        OtocRecord r;
        r.t = t;
        fill_fotoc(r, fotoc_of_state(psi, p));
        fill_state_predictions(r, p);
        out.push_back(r);
    }
    return out;
}

std::vector<OtocRecord> otoc_records(const SystemParams& p, const std::vector<std::int64_t>& times)
{
    std::vector<OtocRecord> out;
    std::vector<std::int64_t> positive;
    for (const auto t : times) {
        if (t == 0) {
            // B psi_0 = theta psi_0 has a jump at +-pi and p psi_0 vanishes: no meaningful C_p at t = 0.
            auto r = fotoc_records(p, {0}).front();
            out.push_back(r);
        } else {
            positive.push_back(t);
        }
    }
    const OtocProtocol<double> proto(OperatorSpecd::momentum(), OperatorSpecd::angle(), p);
    for (auto& r : proto.series(positive))
        out.push_back(std::move(r));
    return out;
}

} // namespace

std::vector<ResultRow> run_scenario(const ExperimentConfig& config, const Notify& notify)
{
    const ExperimentConfig cfg = config.resolved();
    const auto say = [&](const std::string& msg) {
        if (notify)
            notify(msg);
        else
            std::clog << "nhkr: " << msg << '\n';
    };

    if (!cfg.params.resonant()) {
        std::ostringstream os;
        os << "hbar_eff=" << cfg.params.hbar_eff << " is not the resonance 4 pi: no oracle available, "
           << "analytic columns left empty";
        say(os.str());
    }
    if (cfg.params.epsilon_too_large())
        say("epsilon=" + std::to_string(cfg.params.epsilon) + " is above 1e-2; the variance form of C_f degrades");

    std::vector<Task> tasks;
    for (double K : cfg.k_values)
        for (double l : cfg.lambda_values)
            tasks.push_back({K, l});

    // Resolve and check every grid before any work starts.
    std::vector<SystemParams> task_params;
    for (const auto& task : tasks) {
        SystemParams p = cfg.params;
        p.K = task.K;
        p.lambda = task.lambda;
        p = with_auto_grid(p);
        p.validate();
        check_spectral_support(p);
        task_params.push_back(p);
    }

    std::vector<std::vector<ResultRow>> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    const std::string name(to_string(cfg.scenario));

    const auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                const auto& p = task_params[i];
                const auto start = std::chrono::steady_clock::now();
                const auto records = needs_otoc(cfg.scenario) ? otoc_records(p, cfg.t_samples)
                                                              : fotoc_records(p, cfg.t_samples);
                const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                for (const auto& r : records)
                    results[i].push_back({name, p.K, p.lambda, p.epsilon, p.hbar_eff, p.n_theta, elapsed, r});
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), tasks.size());
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_workers; ++w)
            pool.emplace_back(work);
    }

    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<ResultRow> rows;
    for (auto& chunk : results)
        for (auto& r : chunk)
            rows.push_back(std::move(r));
    return rows;
}

} // namespace nhkr::expcli
