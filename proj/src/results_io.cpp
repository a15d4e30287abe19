#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nhkr/expcli.hpp"

namespace nhkr::expcli {

namespace {

using Field = double& (*)(ResultRow&);

struct Column
{
    std::string_view name;
    Field field;
};

// Floating-point columns after "t", in file order.
const Column value_columns[] = {
    {"c1", [](ResultRow& r) -> double& { return r.record.c1; }},
    {"c2", [](ResultRow& r) -> double& { return r.record.c2; }},
    {"re_c3", [](ResultRow& r) -> double& { return r.record.re_c3; }},
    {"otoc", [](ResultRow& r) -> double& { return r.record.otoc; }},
    {"fotoc", [](ResultRow& r) -> double& { return r.record.fotoc; }},
    {"cf", [](ResultRow& r) -> double& { return r.record.cf; }},
    {"mean_p", [](ResultRow& r) -> double& { return r.record.mean_p; }},
    {"mean_p2", [](ResultRow& r) -> double& { return r.record.mean_p2; }},
    {"norm_log", [](ResultRow& r) -> double& { return r.record.norm_log; }},
    {"c1_pred", [](ResultRow& r) -> double& { return r.record.pred.c1; }},
    {"c2_pred", [](ResultRow& r) -> double& { return r.record.pred.c2; }},
    {"re_c3_pred", [](ResultRow& r) -> double& { return r.record.pred.re_c3; }},
    {"otoc_pred", [](ResultRow& r) -> double& { return r.record.pred.otoc; }},
    {"cf_pred", [](ResultRow& r) -> double& { return r.record.pred.cf; }},
    {"p2_pred", [](ResultRow& r) -> double& { return r.record.pred.p2; }},
    {"norm_log_pred", [](ResultRow& r) -> double& { return r.record.pred.norm_log; }},
};

const Column param_columns[] = {
    {"K", [](ResultRow& r) -> double& { return r.K; }},
    {"lambda", [](ResultRow& r) -> double& { return r.lambda; }},
    {"epsilon", [](ResultRow& r) -> double& { return r.epsilon; }},
    {"hbar", [](ResultRow& r) -> double& { return r.hbar; }},
};

void put_double(std::ostream& os, double v)
{
    if (std::isnan(v))
        return;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    os.write(buf, res.ptr - buf);
}

double parse_double(std::string_view s, std::size_t line)
{
    if (s.empty())
        return std::nan("");
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("line " + std::to_string(line) + ": cannot parse number '" + std::string(s) + "'");
    return v;
}

std::int64_t parse_int(std::string_view s, std::size_t line)
{
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("line " + std::to_string(line) + ": cannot parse integer '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

nlohmann::ordered_json json_number(double v)
{
    return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v);
}

double json_value(const nlohmann::json& j, std::string_view key)
{
    const auto it = j.find(std::string(key));
    if (it == j.end())
        throw ConfigError("result object lacks '" + std::string(key) + "'");
    if (it->is_null())
        return std::nan("");
    return it->get<double>();
}

} // namespace

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    os << csv_header << '\n';
    for (auto row : rows) {
        os << row.scenario;
        for (const auto& c : param_columns) {
            os << ',';
            put_double(os, c.field(row));
        }
        os << ',' << row.record.t;
        for (const auto& c : value_columns) {
            os << ',';
            put_double(os, c.field(row));
        }
        os << '\n';
    }
}

void write_json(std::ostream& os, const std::vector<ResultRow>& rows)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto row : rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        obj["scenario"] = row.scenario;
        for (const auto& c : param_columns)
            obj[std::string(c.name)] = json_number(c.field(row));
        obj["t"] = row.record.t;
        for (const auto& c : value_columns)
            obj[std::string(c.name)] = json_number(c.field(row));
        arr.push_back(std::move(obj));
    }
    os << arr.dump(1) << '\n';
}

void emit_results(const std::vector<ResultRow>& rows, Format format, const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open '" + path + "' for writing");
    if (format == Format::csv)
        write_csv(out, rows);
    else
        write_json(out, rows);
    out.flush();
    if (!out)
        throw Error("write to '" + path + "' failed");
}

std::vector<ResultRow> read_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != csv_header)
        throw ConfigError("results file does not start with the expected CSV header");
    std::vector<ResultRow> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto cells = split(line);
        constexpr std::size_t n_cols = 1 + std::size(param_columns) + 1 + std::size(value_columns);
        if (cells.size() != n_cols)
            throw ConfigError("line " + std::to_string(lineno) + ": expected " + std::to_string(n_cols)
                              + " columns, found " + std::to_string(cells.size()));
        ResultRow row;
        std::size_t i = 0;
        row.scenario = std::string(cells[i++]);
        for (const auto& c : param_columns)
            c.field(row) = parse_double(cells[i++], lineno);
        row.record.t = parse_int(cells[i++], lineno);
        for (const auto& c : value_columns)
            c.field(row) = parse_double(cells[i++], lineno);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> read_json(std::istream& is)
{
    nlohmann::json arr;
    try {
        is >> arr;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("results file is not valid JSON: ") + e.what());
    }
    if (!arr.is_array())
        throw ConfigError("JSON results must be an array of row objects");
    std::vector<ResultRow> rows;
    for (const auto& obj : arr) {
        ResultRow row;
        row.scenario = obj.at("scenario").get<std::string>();
        for (const auto& c : param_columns)
            c.field(row) = json_value(obj, c.name);
        row.record.t = obj.at("t").get<std::int64_t>();
        for (const auto& c : value_columns)
            c.field(row) = json_value(obj, c.name);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> read_results(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open results file '" + path + "'");
    in >> std::ws;
    const int first = in.peek();
    if (first == '[')
        return read_json(in);
    return read_csv(in);
}

} // namespace nhkr::expcli
