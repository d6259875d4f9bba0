#include "rabiheat/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>

namespace rabiheat
{

using nlohmann::json;

const char* version()
{
    return "0.1.0";
}

RunReport run(const RunConfig& config, std::size_t threads)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    RunReport report;
    report.curves = config.curve_count();
    report.threads = threads;
    std::vector<PointJob> jobs;
    for (std::size_t c = 0; c < report.curves; ++c) {
        const std::vector<double> coords = config.curve_coordinates(c);
        PointJob curve_job{config.sweep.fixed, config.sweep.settings};
        for (std::size_t s = 0; s < coords.size(); ++s)
            apply_axis(config.series[s].axis, coords[s], curve_job.model, curve_job.settings);
        for (std::size_t i = 0; i < config.sweep.grid.size(); ++i) {
            PointJob job = curve_job;
            apply_axis(config.sweep.axis, config.sweep.grid[i], job.model, job.settings);
            jobs.push_back(std::move(job));
            ResultRow row;
            row.curve = c;
            row.index = i;
            row.coordinates = coords;
            row.value = config.sweep.grid[i];
            report.rows.push_back(std::move(row));
        }
    }

    auto outcomes = evaluate_points(jobs, threads);
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (!outcomes[k].result) ++report.failed;
        report.rows[k].outcome = std::move(outcomes[k]);
    }
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

json manifest(const RunConfig& config, const RunReport& report, bool with_wall_time)
{
    json m;
    m["tool"] = "rabiheat";
    m["version"] = version();
    m["config"] = to_json(config);
    m["threads"] = report.threads;
    m["curves"] = report.curves;
    m["points"] = report.rows.size();
    m["failed"] = report.failed;
    if (with_wall_time) m["wall_time_s"] = report.wall_time_s;
    return m;
}

std::vector<std::string> table_columns(const RunConfig& config)
{
    std::vector<std::string> cols{"curve"};
    for (const auto& s : config.series) cols.push_back(to_string(s.axis));
    cols.push_back(to_string(config.sweep.axis));
    for (const char* c : {"I_plus", "I_minus", "R", "kappa", "I_plus_scaled", "positivity_ok", "truncation_converged",
                          "error"})
        cols.emplace_back(c);
    return cols;
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

namespace
{

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

// Cells after the sweep value, as text; `missing` stands in for absent values.
std::vector<std::string> result_cells(const ResultRow& row, const std::string& missing)
{
    const auto& r = row.outcome.result;
    if (!r) return std::vector<std::string>(7, missing);
    return {format_number(r->i_forward_raw),
            format_number(r->i_backward_raw),
            format_number(r->rectification),
            r->conductance_raw ? format_number(*r->conductance_raw) : missing,
            format_number(r->i_forward),
            r->positivity_ok ? "1" : "0",
            r->truncation_converged ? (*r->truncation_converged ? "1" : "0") : missing};
}

std::string curve_label(const RunConfig& config, const ResultRow& row)
{
    std::string label;
    for (std::size_t s = 0; s < config.series.size(); ++s)
        label += (s ? " " : "") + to_string(config.series[s].axis) + "=" + format_number(row.coordinates[s]);
    return label.empty() ? "single curve" : label;
}

} // namespace

void emit_csv(std::ostream& out, const RunConfig& config, const RunReport& report)
{
    const auto cols = table_columns(config);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& row : report.rows) {
        out << row.curve;
        for (double c : row.coordinates) out << ',' << format_number(c);
        out << ',' << format_number(row.value);
        for (const auto& cell : result_cells(row, "")) out << ',' << cell;
        out << ',' << csv_quote(row.outcome.error) << '\n';
    }
}

void emit_json(std::ostream& out, const RunConfig& config, const RunReport& report)
{
    json doc;
    doc["manifest"] = manifest(config, report, false);
    json records = json::array();
    for (const auto& row : report.rows) {
        json rec;
        rec["curve"] = row.curve;
        for (std::size_t s = 0; s < config.series.size(); ++s) rec[to_string(config.series[s].axis)] = row.coordinates[s];
        rec[to_string(config.sweep.axis)] = row.value;
        if (const auto& r = row.outcome.result) {
            rec["I_plus"] = r->i_forward_raw;
            rec["I_minus"] = r->i_backward_raw;
            rec["R"] = r->rectification;
            rec["kappa"] = r->conductance_raw ? json(*r->conductance_raw) : json(nullptr);
            rec["I_plus_scaled"] = r->i_forward;
            rec["positivity_ok"] = r->positivity_ok;
            rec["truncation_converged"] = r->truncation_converged ? json(*r->truncation_converged) : json(nullptr);
            rec["error"] = nullptr;
        } else {
            for (const char* k : {"I_plus", "I_minus", "R", "kappa", "I_plus_scaled", "positivity_ok",
                                  "truncation_converged"})
                rec[k] = nullptr;
            rec["error"] = row.outcome.error;
        }
        records.push_back(std::move(rec));
    }
    doc["records"] = std::move(records);
    out << doc.dump(2) << '\n';
}

void emit_gnuplot(std::ostream& out, const RunConfig& config, const RunReport& report)
{
    const auto cols = table_columns(config);
    std::string header = "#";
    // the sweep value and the result columns; series values go in the block title
    for (std::size_t i = 1 + config.series.size(); i + 1 < cols.size(); ++i) header += " " + cols[i];

    std::size_t current = report.rows.empty() ? 0 : report.rows.front().curve + 1;
    for (const auto& row : report.rows) {
        if (row.curve != current) {
            if (row.curve != report.rows.front().curve) out << "\n\n";
            current = row.curve;
            out << "# curve " << row.curve << ": " << curve_label(config, row) << '\n' << header << '\n';
        }
        out << format_number(row.value);
        for (const auto& cell : result_cells(row, "NaN")) out << ' ' << cell;
        if (!row.outcome.error.empty()) out << " # " << row.outcome.error;
        out << '\n';
    }
}

void emit(std::ostream& out, OutputFormat format, const RunConfig& config, const RunReport& report)
{
    switch (format) {
    case OutputFormat::json: emit_json(out, config, report); break;
    case OutputFormat::gnuplot: emit_gnuplot(out, config, report); break;
    default: emit_csv(out, config, report); break;
    }
}

} // namespace rabiheat
