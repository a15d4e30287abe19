// Experiment runner: config ingestion, scenario execution, CSV/JSON result
// files and the numeric-versus-analytic comparison report.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nhkr/core.hpp"
#include "nhkr/otoc.hpp"

namespace nhkr::expcli {

enum class Scenario { fig1_cf, fig1_cp, figS1_parts, lambda_sweep, criticality_scan, single_run };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

enum class Format { csv, json };

Format parse_format(std::string_view name);

struct ExperimentConfig
{
    Scenario scenario = Scenario::single_run;
    SystemParams params;
    std::vector<double> lambda_values;      // empty: scenario default
    std::vector<double> k_values;           // empty: scenario default ({K}, or {5, 10, 14} for criticality_scan)
    std::vector<std::int64_t> t_samples;    // empty: t_stride or the scenario default
    std::int64_t t_stride = 0;
    std::string output_path;
    Format format = Format::csv;
    std::uint64_t seed = 0;                 // reserved; every computation is deterministic
    int workers = 1;

    /// Scenario defaults filled in and everything checked. Throws ConfigError.
    ExperimentConfig resolved() const;

    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

/// ~30 log-spaced times over [1, t_max] plus eleven evenly spaced in [t_max/2, t_max].
std::vector<std::int64_t> default_t_samples(std::int64_t t_max);

/// Eleven evenly spaced times in [t_max/2, t_max], the growth-rate fit window.
std::vector<std::int64_t> window_t_samples(std::int64_t t_max);

struct ResultRow
{
    std::string scenario;
    double K = 0.0;
    double lambda = 0.0;
    double epsilon = 0.0;
    double hbar = 0.0;
    std::int64_t n_theta = 0;     // not written to files
    double wall_time_s = 0.0;     // not written to files
    OtocRecord record;
};

using Notify = std::function<void(std::string_view)>;

/// Runs every (K, lambda) trajectory of the scenario, up to cfg.workers at a time.
/// Rows come back ordered by K, then lambda, then t regardless of scheduling.
std::vector<ResultRow> run_scenario(const ExperimentConfig& cfg, const Notify& notify = {});

inline constexpr std::string_view csv_header =
    "scenario,K,lambda,epsilon,hbar,t,c1,c2,re_c3,otoc,fotoc,cf,mean_p,mean_p2,norm_log,"
    "c1_pred,c2_pred,re_c3_pred,otoc_pred,cf_pred,p2_pred,norm_log_pred";

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
void write_json(std::ostream& os, const std::vector<ResultRow>& rows);

/// Writes rows to path; throws Error naming the path on IO failure.
void emit_results(const std::vector<ResultRow>& rows, Format format, const std::string& path);

std::vector<ResultRow> read_csv(std::istream& is);
std::vector<ResultRow> read_json(std::istream& is);

/// Reads a file written by emit_results; the format is sniffed from the first character.
std::vector<ResultRow> read_results(const std::string& path);

enum class CheckStatus { pass, fail, no_oracle };

struct Check
{
    std::string scenario;
    double K = 0.0;
    double lambda = 0.0;
    std::string label;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;   // relative unless the label says otherwise
    CheckStatus status = CheckStatus::pass;
    std::string note;
};

struct Report
{
    std::vector<Check> checks;

    bool passed() const;
    std::string table() const;
    nlohmann::json to_json() const;
};

/// Compares every numeric column with its analytic mirror and fits growth rates.
Report compare_report(const std::vector<ResultRow>& rows);

} // namespace nhkr::expcli
