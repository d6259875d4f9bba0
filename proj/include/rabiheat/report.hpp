#ifndef RABIHEAT_REPORT_HPP
#define RABIHEAT_REPORT_HPP

#include "rabiheat/config.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace rabiheat
{

const char* version();

struct ResultRow
{
    std::size_t curve = 0;
    std::size_t index = 0;
    // series coordinates of the curve, then the sweep value
    std::vector<double> coordinates;
    double value = 0.0;
    PointOutcome outcome;
};

struct RunReport
{
    std::vector<ResultRow> rows;
    std::size_t curves = 0;
    std::size_t failed = 0;
    std::size_t threads = 1;
    double wall_time_s = 0.0;

    bool all_failed() const { return !rows.empty() && failed == rows.size(); }
};

/// Evaluates every (curve, grid point). Rows are ordered by curve, then by
/// grid index, whatever the thread count.
RunReport run(const RunConfig& config, std::size_t threads = 1);

/// Resolved config, version and counts. Wall time only when asked for, so
/// that output embedding the manifest stays byte-identical between runs.
nlohmann::json manifest(const RunConfig& config, const RunReport& report, bool with_wall_time);

std::vector<std::string> table_columns(const RunConfig& config);

/// Shortest text that reads back to the same double (at most 17 significant digits).
std::string format_number(double x);

void emit_csv(std::ostream& out, const RunConfig& config, const RunReport& report);
void emit_json(std::ostream& out, const RunConfig& config, const RunReport& report);
void emit_gnuplot(std::ostream& out, const RunConfig& config, const RunReport& report);
void emit(std::ostream& out, OutputFormat format, const RunConfig& config, const RunReport& report);

} // namespace rabiheat

#endif
