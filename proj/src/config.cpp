#include "rabiheat/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rabiheat
{

using nlohmann::json;

namespace
{

constexpr double default_alpha = 1e-3;

// Reads one JSON object, remembering which keys were consumed so that the
// leftovers can be reported.
class Section
{
public:
    Section(const json& obj, std::string path) : m_obj(obj), m_path(std::move(path))
    {
        if (!m_obj.is_object()) throw ConfigError(m_path, "expected an object");
    }

    std::string key(const std::string& k) const { return m_path.empty() ? k : m_path + "." + k; }
    bool has(const std::string& k) const { return m_obj.contains(k); }

    const json* raw(const std::string& k)
    {
        m_seen.insert(k);
        auto it = m_obj.find(k);
        return it == m_obj.end() ? nullptr : &*it;
    }

    double number(const std::string& k, double fallback)
    {
        const json* v = raw(k);
        if (!v) return fallback;
        if (!v->is_number()) throw ConfigError(key(k), "expected a number");
        const double x = v->get<double>();
        if (!std::isfinite(x)) throw ConfigError(key(k), "must be finite");
        return x;
    }

    std::size_t count(const std::string& k, std::size_t fallback)
    {
        const json* v = raw(k);
        if (!v) return fallback;
        if (v->is_number_unsigned()) return v->get<std::size_t>();
        if (v->is_number_float()) {
            const double x = v->get<double>();
            if (x >= 0.0 && x == std::floor(x) && x < 9.0e15) return static_cast<std::size_t>(x);
        }
        throw ConfigError(key(k), "expected a non-negative integer");
    }

    bool flag(const std::string& k, bool fallback)
    {
        const json* v = raw(k);
        if (!v) return fallback;
        if (!v->is_boolean()) throw ConfigError(key(k), "expected true or false");
        return v->get<bool>();
    }

    std::string text(const std::string& k, const std::string& fallback)
    {
        const json* v = raw(k);
        if (!v) return fallback;
        if (!v->is_string()) throw ConfigError(key(k), "expected a string");
        return v->get<std::string>();
    }

    std::vector<double> numbers(const std::string& k)
    {
        const json* v = raw(k);
        if (!v) return {};
        if (!v->is_array()) throw ConfigError(key(k), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v->size(); ++i) {
            const json& e = (*v)[i];
            if (!e.is_number() || !std::isfinite(e.get<double>()))
                throw ConfigError(key(k) + "[" + std::to_string(i) + "]", "expected a finite number");
            out.push_back(e.get<double>());
        }
        return out;
    }

    Section child(const std::string& k)
    {
        const json* v = raw(k);
        static const json empty = json::object();
        return Section(v ? *v : empty, key(k));
    }

    void finish() const
    {
        for (auto it = m_obj.begin(); it != m_obj.end(); ++it)
            if (!m_seen.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
    }

private:
    const json& m_obj;
    std::string m_path;
    std::set<std::string> m_seen;
};

template <typename F>
void rethrow_as_config_error(const std::string& fallback_key, F&& f)
{
    try {
        f();
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        const auto space = msg.find(' ');
        if (space != std::string::npos && msg.find('.') < space) throw ConfigError(msg.substr(0, space), msg.substr(space + 1));
        throw ConfigError(fallback_key, msg);
    }
}

template <typename E>
E parse_enum(Section& s, const std::string& k, E fallback, const std::vector<std::pair<std::string, E>>& names)
{
    const json* v = s.raw(k);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(s.key(k), "expected a string");
    const auto name = v->get<std::string>();
    std::string expected;
    for (const auto& [n, e] : names) {
        if (n == name) return e;
        expected += (expected.empty() ? "" : ", ") + n;
    }
    throw ConfigError(s.key(k), "unknown value '" + name + "' (expected " + expected + ")");
}

const std::vector<std::pair<std::string, SweepAxis>> axis_names = {{"delta", SweepAxis::delta},
                                                                   {"epsilon", SweepAxis::epsilon},
                                                                   {"g", SweepAxis::g},
                                                                   {"delta_T", SweepAxis::delta_t},
                                                                   {"alpha", SweepAxis::alpha}};

void read_bath(Section s, BathSpec& bath, double alpha, double omega_c)
{
    bath.alpha = s.number("alpha", alpha);
    bath.omega_c = s.number("omega_c", omega_c);
    s.finish();
}

std::vector<double> read_grid(Section& s)
{
    const bool explicit_grid = s.has("grid");
    const bool ranged = s.has("start") || s.has("stop") || s.has("num");
    if (explicit_grid && ranged) throw ConfigError(s.key("grid"), "give either grid or start/stop/num, not both");
    if (explicit_grid) return s.numbers("grid");
    if (!ranged) throw ConfigError(s.key("grid"), "missing (give grid or start/stop/num)");
    for (const char* k : {"start", "stop", "num"})
        if (!s.has(k)) throw ConfigError(s.key(k), "missing");
    const double a = s.number("start", 0.0);
    const double b = s.number("stop", 0.0);
    const std::size_t n = s.count("num", 0);
    if (n < 1) throw ConfigError(s.key("num"), "must be >= 1");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i)
        grid[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    if (n > 1) grid.back() = b;
    return grid;
}

void check_axis_value(SweepAxis axis, double value, const SweepSpec& base, const std::string& key)
{
    ModelConfig m = base.fixed;
    PointSettings s = base.settings;
    apply_axis(axis, value, m, s);
    if (axis == SweepAxis::delta_t) {
        if (!(value >= 0.0 && value < 2.0 * s.temperature))
            throw ConfigError(key, "delta_T must satisfy 0 <= delta_T < 2 temperature");
        return;
    }
    rethrow_as_config_error(key, [&] { m.validate(); });
}

} // namespace

std::string to_string(OutputFormat f)
{
    switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::gnuplot: return "gnuplot";
    default: return "csv";
    }
}

OutputFormat output_format_from_string(const std::string& name)
{
    for (auto f : {OutputFormat::csv, OutputFormat::json, OutputFormat::gnuplot})
        if (to_string(f) == name) return f;
    throw ConfigError("output.format", "unknown value '" + name + "' (expected csv, json, gnuplot)");
}

std::size_t RunConfig::curve_count() const
{
    std::size_t n = 1;
    for (const auto& s : series) n *= s.values.size();
    return n;
}

std::vector<double> RunConfig::curve_coordinates(std::size_t c) const
{
    // last series varies fastest
    std::vector<double> out(series.size());
    for (std::size_t i = series.size(); i-- > 0;) {
        out[i] = series[i].values[c % series[i].values.size()];
        c /= series[i].values.size();
    }
    return out;
}

void RunConfig::validate() const
{
    rethrow_as_config_error("model", [&] { sweep.fixed.validate(); });
    const PointSettings& st = sweep.settings;
    if (!(st.temperature > 0.0)) throw ConfigError("temperature", "must be > 0");
    if (!(st.delta_t >= 0.0 && st.delta_t < 2.0 * st.temperature))
        throw ConfigError("delta_T", "must satisfy 0 <= delta_T < 2 temperature");
    if (!(st.eta >= 0.0)) throw ConfigError("eta", "must be >= 0");
    if (!(st.truncation_rel_tol > 0.0)) throw ConfigError("truncation_rel_tol", "must be > 0");

    rethrow_as_config_error("sweep.grid", [&] { sweep.validate(); });
    for (std::size_t i = 0; i < sweep.grid.size(); ++i)
        check_axis_value(sweep.axis, sweep.grid[i], sweep, "sweep.grid[" + std::to_string(i) + "]");

    std::set<SweepAxis> used{sweep.axis};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string k = "series[" + std::to_string(i) + "]";
        if (!used.insert(series[i].axis).second)
            throw ConfigError(k + ".axis", "axis '" + to_string(series[i].axis) + "' is already varied");
        if (series[i].values.empty()) throw ConfigError(k + ".values", "must not be empty");
        for (std::size_t j = 0; j < series[i].values.size(); ++j)
            check_axis_value(series[i].axis, series[i].values[j], sweep, k + ".values[" + std::to_string(j) + "]");
    }
    if (output.empty()) throw ConfigError("output.path", "must not be empty");
}

RunConfig parse_config(const json& doc)
{
    RunConfig cfg;
    Section root(doc, "");
    ModelConfig& m = cfg.sweep.fixed;
    PointSettings& st = cfg.sweep.settings;

    {
        Section s = root.child("junction");
        m.junction.delta = s.number("delta", m.junction.delta);
        m.junction.epsilon = s.number("epsilon", m.junction.epsilon);
        m.junction.omega_r = s.number("omega_r", m.junction.omega_r);
        m.junction.g = s.number("g", m.junction.g);
        s.finish();
    }
    {
        Section s = root.child("baths");
        const double alpha = s.number("alpha", default_alpha);
        const double omega_c = s.number("omega_c", 5.0);
        read_bath(s.child("left"), m.baths.left, alpha, omega_c);
        read_bath(s.child("right"), m.baths.right, alpha, omega_c);
        s.finish();
    }
    {
        Section s = root.child("truncation");
        m.truncation.n_fock = s.count("n_fock", m.truncation.n_fock);
        m.truncation.n_levels = s.count("n_levels", m.truncation.n_levels);
        s.finish();
    }
    {
        Section s = root.child("solver");
        m.mode = parse_enum<SolverMode>(s, "mode", m.mode, {{"fsme", SolverMode::fsme}, {"psme", SolverMode::psme}});
        m.coherence_threshold = s.number("coherence_threshold", m.coherence_threshold);
        m.renormalization = parse_enum<Renormalization>(
            s, "renormalization", m.renormalization,
            {{"auto", Renormalization::automatic}, {"on", Renormalization::on}, {"off", Renormalization::off}});
        Section mp = s.child("matsubara");
        m.matsubara.rel_tol = mp.number("rel_tol", m.matsubara.rel_tol);
        m.matsubara.k_max = mp.count("k_max", m.matsubara.k_max);
        m.matsubara.pole_guard = mp.number("pole_guard", m.matsubara.pole_guard);
        mp.finish();
        s.finish();
    }

    st.temperature = root.number("temperature", st.temperature);
    st.delta_t = root.number("delta_T", st.delta_t);
    st.eta = root.number("eta", st.eta);
    st.with_conductance = root.flag("conductance", st.with_conductance);
    st.check_truncation = root.flag("check_truncation", st.check_truncation);
    st.truncation_rel_tol = root.number("truncation_rel_tol", st.truncation_rel_tol);

    {
        if (!root.has("sweep")) throw ConfigError("sweep", "missing");
        Section s = root.child("sweep");
        if (!s.has("axis")) throw ConfigError("sweep.axis", "missing");
        cfg.sweep.axis = parse_enum<SweepAxis>(s, "axis", SweepAxis::delta, axis_names);
        cfg.sweep.grid = read_grid(s);
        s.finish();
    }

    if (const json* series = root.raw("series")) {
        if (!series->is_array()) throw ConfigError("series", "expected an array");
        for (std::size_t i = 0; i < series->size(); ++i) {
            Section s((*series)[i], "series[" + std::to_string(i) + "]");
            if (!s.has("axis")) throw ConfigError(s.key("axis"), "missing");
            SeriesSpec spec;
            spec.axis = parse_enum<SweepAxis>(s, "axis", SweepAxis::g, axis_names);
            spec.values = s.numbers("values");
            s.finish();
            cfg.series.push_back(std::move(spec));
        }
    }

    {
        Section s = root.child("output");
        cfg.format = parse_enum<OutputFormat>(
            s, "format", cfg.format,
            {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}, {"gnuplot", OutputFormat::gnuplot}});
        cfg.output = s.text("path", cfg.output);
        s.finish();
    }

    root.finish();
    cfg.validate();
    return cfg;
}

RunConfig parse_config_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed document: ") + e.what());
    }
    return parse_config(doc);
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

json to_json(const RunConfig& c)
{
    const ModelConfig& m = c.sweep.fixed;
    const PointSettings& st = c.sweep.settings;
    auto bath = [](const BathSpec& b) { return json{{"alpha", b.alpha}, {"omega_c", b.omega_c}}; };

    json doc;
    doc["junction"] = {{"delta", m.junction.delta},
                       {"epsilon", m.junction.epsilon},
                       {"omega_r", m.junction.omega_r},
                       {"g", m.junction.g}};
    doc["baths"] = {{"left", bath(m.baths.left)}, {"right", bath(m.baths.right)}};
    doc["truncation"] = {{"n_fock", m.truncation.n_fock}, {"n_levels", m.truncation.n_levels}};
    doc["solver"] = {{"mode", to_string(m.mode)},
                     {"coherence_threshold", m.coherence_threshold},
                     {"renormalization", to_string(m.renormalization)},
                     {"matsubara",
                      {{"rel_tol", m.matsubara.rel_tol},
                       {"k_max", m.matsubara.k_max},
                       {"pole_guard", m.matsubara.pole_guard}}}};
    doc["temperature"] = st.temperature;
    doc["delta_T"] = st.delta_t;
    doc["eta"] = st.eta;
    doc["conductance"] = st.with_conductance;
    doc["check_truncation"] = st.check_truncation;
    doc["truncation_rel_tol"] = st.truncation_rel_tol;
    doc["sweep"] = {{"axis", to_string(c.sweep.axis)}, {"grid", c.sweep.grid}};
    doc["series"] = json::array();
    for (const auto& s : c.series) doc["series"].push_back({{"axis", to_string(s.axis)}, {"values", s.values}});
    doc["output"] = {{"format", to_string(c.format)}, {"path", c.output}};
    return doc;
}

namespace
{

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = b;
    return out;
}

const std::vector<double> g_list = {0.01, 0.05, 0.1, 0.2, 0.3, 0.5};

RunConfig base_config(SweepAxis axis, std::vector<double> grid)
{
    RunConfig c;
    c.sweep.axis = axis;
    c.sweep.grid = std::move(grid);
    c.sweep.fixed.baths.left.alpha = default_alpha;
    c.sweep.fixed.baths.right.alpha = default_alpha;
    return c;
}

} // namespace

std::vector<std::string> preset_names()
{
    return {"fig3", "fig4a", "fig4b", "bias", "fig5", "fig6", "fig7"};
}

RunConfig preset(const std::string& name)
{
    RunConfig c;
    if (name == "fig3") {
        // current and rectification vs delta at zero bias, weak to ultrastrong g
        c = base_config(SweepAxis::delta, linspace(0.05, 2.0, 40));
        c.series = {{SweepAxis::g, g_list}};
    } else if (name == "fig4a") {
        c = base_config(SweepAxis::g, linspace(0.01, 0.6, 60));
        c.series = {{SweepAxis::delta, {0.2, 0.4, 0.6, 0.8, 1.0}}};
    } else if (name == "fig4b") {
        c = base_config(SweepAxis::delta, linspace(0.05, 2.0, 40));
        c.series = {{SweepAxis::g, linspace(0.01, 0.6, 30)}};
    } else if (name == "bias") {
        c = base_config(SweepAxis::epsilon, linspace(-2.0, 2.0, 81));
        c.series = {{SweepAxis::delta, {0.7, 1.0, 1.2}}, {SweepAxis::g, g_list}};
    } else if (name == "fig5") {
        // temperature-bias dependence at T = omega_r, with the linear conductance
        c = base_config(SweepAxis::delta_t, linspace(0.05, 1.9, 38));
        c.sweep.settings.temperature = 1.0;
        c.sweep.settings.with_conductance = true;
        c.series = {{SweepAxis::delta, {0.7, 1.0, 1.2}}, {SweepAxis::g, g_list}};
    } else if (name == "fig6") {
        c = base_config(SweepAxis::delta, linspace(0.8, 1.2, 81));
        c.sweep.fixed.mode = SolverMode::psme;
        c.sweep.fixed.junction.g = 0.01;
        c.series = {{SweepAxis::alpha, {1e-4, 1e-3, 1e-2}}};
    } else if (name == "fig7") {
        c = base_config(SweepAxis::epsilon, linspace(-1.2, 1.2, 97));
        c.sweep.fixed.mode = SolverMode::psme;
        c.sweep.fixed.junction.delta = 0.7;
        c.sweep.fixed.junction.g = 0.01;
        c.series = {{SweepAxis::alpha, {1e-4, 1e-3, 1e-2}}};
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("preset", "unknown preset '" + name + "' (known: " + known + ")");
    }
    c.validate();
    return c;
}

} // namespace rabiheat
