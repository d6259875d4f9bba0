#ifndef RABIHEAT_CONFIG_HPP
#define RABIHEAT_CONFIG_HPP

#include "rabiheat/transport.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace rabiheat
{

/// Bad configuration. `key` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key.empty() ? message : key + ": " + message), m_key(std::move(key))
    {
    }

    const std::string& key() const { return m_key; }

private:
    std::string m_key;
};

enum class OutputFormat
{
    csv,
    json,
    gnuplot
};

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& name);

/// An extra parameter varied across curves. Several series span their
/// cartesian product; each combination is one curve of the sweep.
struct SeriesSpec
{
    SweepAxis axis = SweepAxis::g;
    std::vector<double> values;

    friend bool operator==(const SeriesSpec&, const SeriesSpec&) = default;
};

struct RunConfig
{
    SweepSpec sweep;
    std::vector<SeriesSpec> series;
    OutputFormat format = OutputFormat::csv;
    // "-" writes to stdout
    std::string output = "-";

    std::size_t curve_count() const;
    /// Values of every series axis for curve `c`, in series order.
    std::vector<double> curve_coordinates(std::size_t c) const;
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

/// Fully resolved document; parse_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

} // namespace rabiheat

#endif
