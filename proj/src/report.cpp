#include "lpq/report.hpp"

#include "lpq/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

namespace lpq {

namespace {

std::string optional_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open " + path + " for writing");
    return out;
}

} // namespace

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_row(const SweepRow& row)
{
    const BoundCertificate& c = row.cert;
    std::string s = c.inequality_id + ',' + c.density_label + ',' + std::to_string(c.n) + ',' + optional_number(c.q) +
                    ',' + optional_number(c.r) + ',' + optional_number(c.alpha) + ',';
    if (row.failed()) {
        std::string msg = row.error;
        for (char& ch : msg)
            if (ch == ',' || ch == '\n' || ch == '\r')
                ch = ';';
        return s + ",,,,,,error:" + msg;
    }
    s += format_number(c.lhs) + ',' + format_number(c.rhs) + ',' + format_number(c.slack) + ',' +
         format_number(c.lhs_error) + ',' + format_number(c.rhs_error) + ',' + (c.satisfied ? "true" : "false") +
         ',' + c.status();
    return s;
}

std::string format_row(const BoundCertificate& cert) { return format_row(SweepRow{cert, {}}); }

void write_csv(const SweepReport& report, std::ostream& out)
{
    out << kReportHeader << '\n';
    for (const SweepRow& row : report.rows)
        out << format_row(row) << '\n';
}

void write_csv_file(const SweepReport& report, const std::string& path)
{
    std::ofstream out = open_output(path);
    write_csv(report, out);
    if (!out)
        throw Error("failed writing " + path);
}

nlohmann::json summary_json(const SweepReport& report)
{
    const SweepSummary& s = report.summary;
    nlohmann::json j;
    j["rows"] = report.rows.size();
    j["checked"] = s.checked;
    j["satisfied"] = s.satisfied;
    j["tight"] = s.tight;
    j["violated"] = s.violated;
    j["skipped"] = s.skipped;
    j["errors"] = s.errors;
    if (s.min_slack_row) {
        const BoundCertificate& c = report.rows[*s.min_slack_row].cert;
        j["min_slack"] = {{"row", *s.min_slack_row},
                          {"inequality_id", c.inequality_id},
                          {"density_label", c.density_label},
                          {"slack", format_number(c.slack)}};
    } else {
        j["min_slack"] = nullptr;
    }
    nlohmann::json violated = nlohmann::json::array();
    nlohmann::json failed = nlohmann::json::array();
    for (const SweepRow& row : report.rows) {
        if (row.failed())
            failed.push_back(format_row(row));
        else if (!row.cert.satisfied)
            violated.push_back(format_row(row));
    }
    j["violated_rows"] = violated;
    j["error_rows"] = failed;
    return j;
}

void write_summary_file(const SweepReport& report, const std::string& path)
{
    std::ofstream out = open_output(path);
    out << summary_json(report).dump(2) << '\n';
}

void write_plot_data(const SweepReport& report, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    struct Matrix {
        std::vector<std::string> columns;
        std::vector<std::string> row_keys;
        std::map<std::pair<std::string, std::string>, std::string> cells;
    };
    std::vector<std::string> ids;
    std::map<std::string, Matrix> by_id;
    for (const SweepRow& row : report.rows) {
        const BoundCertificate& c = row.cert;
        if (!by_id.count(c.inequality_id))
            ids.push_back(c.inequality_id);
        Matrix& m = by_id[c.inequality_id];
        const std::string col = "q=" + optional_number(c.q) + ";r=" + optional_number(c.r);
        const std::string key = c.density_label + ',' + optional_number(c.alpha);
        if (std::find(m.columns.begin(), m.columns.end(), col) == m.columns.end())
            m.columns.push_back(col);
        if (std::find(m.row_keys.begin(), m.row_keys.end(), key) == m.row_keys.end())
            m.row_keys.push_back(key);
        m.cells[{key, col}] = row.failed() ? "" : format_number(c.slack);
    }
    for (const std::string& id : ids) {
        const Matrix& m = by_id[id];
        std::ofstream out = open_output((std::filesystem::path(dir) / ("slack_" + id + ".csv")).string());
        out << "density_label,alpha";
        for (const auto& col : m.columns)
            out << ',' << col;
        out << '\n';
        for (const auto& key : m.row_keys) {
            out << key;
            for (const auto& col : m.columns) {
                const auto it = m.cells.find({key, col});
                out << ',' << (it == m.cells.end() ? "" : it->second);
            }
            out << '\n';
        }
    }
}

} // namespace lpq
