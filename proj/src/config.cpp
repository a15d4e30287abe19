#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "nhkr/expcli.hpp"

namespace nhkr::expcli {

namespace {

constexpr std::pair<Scenario, std::string_view> scenario_names[] = {
    {Scenario::fig1_cf, "fig1_cf"},
    {Scenario::fig1_cp, "fig1_cp"},
    {Scenario::figS1_parts, "figS1_parts"},
    {Scenario::lambda_sweep, "lambda_sweep"},
    {Scenario::criticality_scan, "criticality_scan"},
    {Scenario::single_run, "single_run"},
};

template <typename T>
T get_as(const nlohmann::json& j, const char* key)
{
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> known, std::string_view where)
{
    for (const auto& item : j.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw ConfigError("unknown config field '" + item.key() + "' in " + std::string(where));
}

} // namespace

std::string_view to_string(Scenario s)
{
    for (const auto& [value, name] : scenario_names)
        if (value == s)
            return name;
    return "unknown";
}

Scenario parse_scenario(std::string_view name)
{
    for (const auto& [value, n] : scenario_names)
        if (n == name)
            return value;
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

Format parse_format(std::string_view name)
{
    if (name == "csv")
        return Format::csv;
    if (name == "json")
        return Format::json;
    throw ConfigError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::vector<std::int64_t> window_t_samples(std::int64_t t_max)
{
    std::set<std::int64_t> ts;
    for (int i = 0; i <= 10; ++i)
        ts.insert(t_max / 2 + static_cast<std::int64_t>(std::llround((t_max - t_max / 2) * (i / 10.0))));
    return {ts.begin(), ts.end()};
}

std::vector<std::int64_t> default_t_samples(std::int64_t t_max)
{
    if (t_max <= 0)
        return {0};
    std::set<std::int64_t> ts;
    constexpr int n_log = 30;
    for (int i = 0; i < n_log; ++i) {
        const double e = std::log(static_cast<double>(t_max)) * i / (n_log - 1);
        ts.insert(std::clamp<std::int64_t>(std::llround(std::exp(e)), 1, t_max));
    }
    for (auto t : window_t_samples(t_max))
        ts.insert(t);
    return {ts.begin(), ts.end()};
}

void ExperimentConfig::validate() const
{
    params.validate();
    if (workers < 1)
        throw ConfigError("workers must be >= 1");
    const bool sweep = scenario == Scenario::lambda_sweep || scenario == Scenario::criticality_scan;
    if (sweep && lambda_values.empty())
        throw ConfigError("lambda_values must be non-empty for " + std::string(to_string(scenario)));
    for (double l : lambda_values)
        if (!(l >= 0.0) || !std::isfinite(l))
            throw ConfigError("lambda_values entries must be finite and >= 0");
    for (double k : k_values)
        if (!std::isfinite(k))
            throw ConfigError("k_values entries must be finite");
    if (t_stride < 0)
        throw ConfigError("t_stride must be >= 0");
    for (std::size_t i = 0; i < t_samples.size(); ++i) {
        if (t_samples[i] < 0)
            throw ConfigError("t_samples must be >= 0");
        if (i > 0 && t_samples[i] <= t_samples[i - 1])
            throw ConfigError("t_samples must be strictly increasing");
        if (t_samples[i] > params.t_max)
            throw ConfigError("t_samples entry " + std::to_string(t_samples[i]) + " exceeds t_max "
                              + std::to_string(params.t_max));
    }
}

ExperimentConfig ExperimentConfig::resolved() const
{
    ExperimentConfig c = *this;
    c.params.validate();
    if (c.lambda_values.empty()) {
        switch (c.scenario) {
        case Scenario::fig1_cf:
        case Scenario::fig1_cp:
            c.lambda_values = {0.0, 1.0, 5.0, 11.0, 15.0};
            break;
        case Scenario::figS1_parts:
            c.lambda_values = {1.0, 5.0, 8.66, 11.0, 15.0};
            break;
        case Scenario::criticality_scan:
            for (int i = 2; i <= 150; ++i)
                c.lambda_values.push_back(i / 10.0);
            break;
        case Scenario::single_run:
            c.lambda_values = {c.params.lambda};
            break;
        case Scenario::lambda_sweep:
            break;
        }
    }
    if (c.k_values.empty()) {
        if (c.scenario == Scenario::criticality_scan)
            c.k_values = {5.0, 10.0, 14.0};
        else
            c.k_values = {c.params.K};
    }
    if (c.t_samples.empty()) {
        if (c.t_stride > 0) {
            for (std::int64_t t = c.t_stride; t <= c.params.t_max; t += c.t_stride)
                c.t_samples.push_back(t);
            if (c.t_samples.empty() || c.t_samples.back() != c.params.t_max)
                c.t_samples.push_back(c.params.t_max);
        } else if (c.scenario == Scenario::criticality_scan) {
            c.t_samples = window_t_samples(c.params.t_max);
        } else {
            c.t_samples = default_t_samples(c.params.t_max);
        }
    }
    c.validate();
    return c;
}

ExperimentConfig config_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"scenario", "params", "lambda_values", "k_values", "t_samples", "t_stride", "output_path",
                    "format", "seed", "workers"},
                   "config");
    ExperimentConfig c;
    if (j.contains("scenario"))
        c.scenario = parse_scenario(get_as<std::string>(j, "scenario"));
    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (!p.is_object())
            throw ConfigError("config field 'params' must be an object");
        reject_unknown(p, {"K", "lambda", "hbar_eff", "hbar", "epsilon", "n_theta", "t_max"}, "params");
        if (p.contains("K"))
            c.params.K = get_as<double>(p, "K");
        if (p.contains("lambda"))
            c.params.lambda = get_as<double>(p, "lambda");
        if (p.contains("hbar_eff"))
            c.params.hbar_eff = get_as<double>(p, "hbar_eff");
        if (p.contains("hbar"))
            c.params.hbar_eff = get_as<double>(p, "hbar");
        if (p.contains("epsilon"))
            c.params.epsilon = get_as<double>(p, "epsilon");
        if (p.contains("n_theta"))
            c.params.n_theta = get_as<std::int64_t>(p, "n_theta");
        if (p.contains("t_max"))
            c.params.t_max = get_as<std::int64_t>(p, "t_max");
    }
    if (j.contains("lambda_values"))
        c.lambda_values = get_as<std::vector<double>>(j, "lambda_values");
    if (j.contains("k_values"))
        c.k_values = get_as<std::vector<double>>(j, "k_values");
    if (j.contains("t_samples"))
        c.t_samples = get_as<std::vector<std::int64_t>>(j, "t_samples");
    if (j.contains("t_stride"))
        c.t_stride = get_as<std::int64_t>(j, "t_stride");
    if (j.contains("output_path"))
        c.output_path = get_as<std::string>(j, "output_path");
    if (j.contains("format"))
        c.format = parse_format(get_as<std::string>(j, "format"));
    if (j.contains("seed"))
        c.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("workers"))
        c.workers = get_as<int>(j, "workers");
    return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c)
{
    nlohmann::json j;
    j["scenario"] = std::string(to_string(c.scenario));
    j["params"] = {{"K", c.params.K},           {"lambda", c.params.lambda},   {"hbar_eff", c.params.hbar_eff},
                   {"epsilon", c.params.epsilon}, {"n_theta", c.params.n_theta}, {"t_max", c.params.t_max}};
    j["lambda_values"] = c.lambda_values;
    j["k_values"] = c.k_values;
    j["t_samples"] = c.t_samples;
    j["t_stride"] = c.t_stride;
    j["output_path"] = c.output_path;
    j["format"] = c.format == Format::csv ? "csv" : "json";
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    return j;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

} // namespace nhkr::expcli
