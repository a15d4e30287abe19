// nhkr: run scenarios, compare result files with the analytic mirrors, run
// the property suites.
//
// exit codes: 0 ok, 2 configuration error, 3 numerical protocol error,
//             4 failed checks in `report` or `selftest`, 1 anything else

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "nhkr/expcli.hpp"
#include "nhkr/selftest.hpp"

namespace {

using namespace nhkr;

struct RunArgs
{
    std::string config_path;
    std::optional<std::string> scenario;
    std::vector<double> lambdas;
    std::optional<double> K;
    std::optional<double> epsilon;
    std::optional<std::int64_t> t_max;
    std::optional<std::int64_t> n_theta;
    std::optional<int> workers;
    std::string out;
    std::optional<std::string> format;
};

int cmd_run(const RunArgs& a)
{
    expcli::ExperimentConfig cfg = a.config_path.empty() ? expcli::ExperimentConfig{} : expcli::load_config(a.config_path);
    if (a.scenario)
        cfg.scenario = expcli::parse_scenario(*a.scenario);
    if (!a.lambdas.empty()) {
        cfg.lambda_values = a.lambdas;
        cfg.params.lambda = a.lambdas.front();
    }
    if (a.K) {
        cfg.params.K = *a.K;
        cfg.k_values = {*a.K};
    }
    if (a.epsilon)
        cfg.params.epsilon = *a.epsilon;
    if (a.t_max) {
        cfg.params.t_max = *a.t_max;
        if (!a.config_path.empty())
            cfg.t_samples.clear();   // samples from the file may exceed the new horizon
    }
    if (a.n_theta)
        cfg.params.n_theta = *a.n_theta;
    if (a.workers)
        cfg.workers = *a.workers;
    if (!a.out.empty())
        cfg.output_path = a.out;
    if (a.format)
        cfg.format = expcli::parse_format(*a.format);
    cfg = cfg.resolved();

    const auto rows = expcli::run_scenario(cfg, [](std::string_view msg) { std::cerr << "nhkr: " << msg << '\n'; });
    if (cfg.output_path.empty() || cfg.output_path == "-") {
        if (cfg.format == expcli::Format::csv)
            expcli::write_csv(std::cout, rows);
        else
            expcli::write_json(std::cout, rows);
    } else {
        expcli::emit_results(rows, cfg.format, cfg.output_path);
        std::cerr << "nhkr: wrote " << rows.size() << " rows to " << cfg.output_path << '\n';
    }
    return 0;
}

int cmd_report(const std::string& in, bool as_json)
{
    const auto report = expcli::compare_report(expcli::read_results(in));
    if (as_json)
        std::cout << report.to_json().dump(2) << '\n';
    else
        std::cout << report.table();
    return report.passed() ? 0 : 4;
}

int cmd_selftest(std::size_t cases, std::uint64_t seed)
{
    bool ok = true;
    for (const auto& r : run_property_suite(cases, seed)) {
        std::printf("%-4s %-22s cases=%zu failures=%zu worst=%.3g tol=%.0e\n", r.passed() ? "PASS" : "FAIL",
                    r.name.c_str(), r.cases, r.failures, r.worst, r.tolerance);
        ok = ok && r.passed();
    }
    return ok ? 0 : 4;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Non-Hermitian kicked rotor OTOC experiments"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run a scenario and write its result rows");
    run->add_option("--config", run_args.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    run->add_option("--scenario", run_args.scenario,
                    "fig1_cf | fig1_cp | figS1_parts | lambda_sweep | criticality_scan | single_run");
    run->add_option("--lambda", run_args.lambdas, "comma-separated lambda values")->delimiter(',');
    run->add_option("--k", run_args.K, "kick strength K");
    run->add_option("--epsilon", run_args.epsilon, "FOTOC displacement");
    run->add_option("--tmax", run_args.t_max, "number of kicks");
    run->add_option("--n-theta", run_args.n_theta, "grid points (power of two; default: automatic)");
    run->add_option("--workers", run_args.workers, "concurrent trajectories");
    run->add_option("--out", run_args.out, "output path ('-' or empty: stdout)");
    run->add_option("--format", run_args.format, "csv | json");

    std::string report_in;
    bool report_json = false;
    auto* report = app.add_subcommand("report", "compare a result file with the analytic predictions");
    report->add_option("--in", report_in, "CSV or JSON result file")->required();
    report->add_flag("--json", report_json, "machine-readable output");

    std::size_t cases = 1000;
    std::uint64_t seed = 20240501;
    auto* selftest = app.add_subcommand("selftest", "run the randomized property suites");
    selftest->add_option("--cases", cases, "cases per property");
    selftest->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run)
            return cmd_run(run_args);
        if (*report)
            return cmd_report(report_in, report_json);
        return cmd_selftest(cases, seed);
    } catch (const ConfigError& e) {
        std::cerr << "nhkr: configuration error: " << e.what() << '\n';
        return 2;
    } catch (const ProtocolError& e) {
        std::cerr << "nhkr: numerical protocol error: " << e.what() << '\n';
        return 3;
    } catch (const DegenerateStateError& e) {
        std::cerr << "nhkr: numerical protocol error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "nhkr: " << e.what() << '\n';
        return 1;
    }
}
