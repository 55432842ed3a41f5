#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lhv/coincidence.hpp"
#include "lhv/ensembles.hpp"
#include "lhv/errors.hpp"
#include "lhv/format.hpp"
#include "lhv/model.hpp"

namespace lhv {

enum class Experiment { Single, Pair, Bell, Samples };
enum class OutputFormat { CSV, JSON };

constexpr std::string_view to_string(Experiment e) noexcept
{
    switch (e) {
    case Experiment::Single:
        return "single";
    case Experiment::Pair:
        return "pair";
    case Experiment::Bell:
        return "bell";
    case Experiment::Samples:
        break;
    }
    return "samples";
}

constexpr std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::CSV ? "csv" : "json"; }

/// Default angle grid: 13 points from 0 to pi in steps of pi/12, or from 0 to
/// pi/2 in steps of pi/24 for the Bell experiment.
inline std::vector<double> default_grid(Experiment e)
{
    const double stop = e == Experiment::Bell ? 0.5 * std::numbers::pi : std::numbers::pi;
    std::vector<double> g(13);
    for (std::size_t k = 0; k < g.size(); ++k)
        g[k] = stop * static_cast<double>(k) / 12.0;
    return g;
}

/// Everything needed to rerun an experiment bit-identically.
struct RunConfig {
    Experiment experiment = Experiment::Pair;
    ModelParams model;
    CoincidenceConfig coincidence;
    SphereMeasure ensemble_measure = SphereMeasure::Uniform;
    std::vector<double> grid = default_grid(Experiment::Pair);
    std::size_t n_per_point = 10000;
    std::uint64_t master_seed = 1;
    std::string output_path;  ///< empty writes to standard output
    OutputFormat output_format = OutputFormat::CSV;

    friend bool operator==(const RunConfig &, const RunConfig &) = default;

    void validate() const
    {
        model.validate();
        coincidence.validate();
        if (grid.empty())
            throw ConstraintViolation("grid must not be empty");
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (!std::isfinite(grid[k]))
                throw ConstraintViolation("grid values must be finite");
            if (k > 0 && !(grid[k] > grid[k - 1]))
                throw ConstraintViolation("grid must be strictly increasing");
        }
        if (n_per_point < 1)
            throw ConstraintViolation("n_per_point must be at least 1");
    }
};

/// Ordered key/value assignments; later entries win.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

namespace detail {

struct KeySpec {
    std::function<void(RunConfig &, std::string_view)> set;
    std::function<std::string(const RunConfig &)> get;
};

[[noreturn]] inline void malformed(std::string_view key, std::string_view value, std::string_view what)
{
    throw MalformedValue("malformed value for '" + std::string(key) + "': '" + std::string(value) + "' (" +
                         std::string(what) + ")");
}

inline double to_real(std::string_view key, std::string_view v)
{
    const auto d = parse_double(v);
    if (!d)
        malformed(key, v, "expected a real number");
    return *d;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v)
{
    const auto i = parse_integer<Int>(v);
    if (!i)
        malformed(key, v, "expected a non-negative integer");
    return *i;
}

inline std::vector<double> to_list(std::string_view key, std::string_view v)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const auto comma = v.find(',', pos);
        const auto item = trim(v.substr(pos, comma == std::string_view::npos ? v.npos : comma - pos));
        if (item.empty())
            malformed(key, v, "empty list element");
        out.push_back(to_real(key, item));
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

template <class Enum, std::size_t N>
Enum to_enum(std::string_view key, std::string_view v, const std::pair<std::string_view, Enum> (&names)[N])
{
    for (const auto &[name, value] : names)
        if (name == v)
            return value;
    std::string allowed;
    for (const auto &[name, value] : names)
        allowed += (allowed.empty() ? "" : "|") + std::string(name);
    malformed(key, v, "expected one of " + allowed);
}

inline constexpr std::pair<std::string_view, Experiment> experiment_names[] = {
    {"single", Experiment::Single}, {"pair", Experiment::Pair},
    {"bell", Experiment::Bell},     {"samples", Experiment::Samples}};
inline constexpr std::pair<std::string_view, CoincidenceMode> mode_names[] = {
    {"none", CoincidenceMode::None}, {"ideal", CoincidenceMode::IdealThreshold},
    {"spatial", CoincidenceMode::Spatial}};
inline constexpr std::pair<std::string_view, OutputFormat> format_names[] = {{"csv", OutputFormat::CSV},
                                                                             {"json", OutputFormat::JSON}};
inline constexpr std::pair<std::string_view, SphereMeasure> measure_names[] = {
    {"sphere", SphereMeasure::Uniform}, {"uniform_theta", SphereMeasure::UniformPolarAngle}};

inline std::string join(const std::vector<double> &v)
{
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k)
        s += (k ? ", " : "") + format_double(v[k]);
    return s;
}

// Grid keys are applied after all other keys; see config_from_key_values.
inline const std::map<std::string, KeySpec, std::less<>> &key_table()
{
    static const std::map<std::string, KeySpec, std::less<>> table = [] {
        std::map<std::string, KeySpec, std::less<>> t;
        auto real = [&](std::string key, auto member, auto field) {
            t[key] = {[key, member, field](RunConfig &c, std::string_view v) { (c.*member).*field = to_real(key, v); },
                      [member, field](const RunConfig &c) { return format_double((c.*member).*field); }};
        };
        t["experiment"] = {[](RunConfig &c, std::string_view v) {
                               c.experiment = to_enum("experiment", v, experiment_names);
                           },
                           [](const RunConfig &c) { return std::string(to_string(c.experiment)); }};
        t["n_per_point"] = {[](RunConfig &c, std::string_view v) {
                                c.n_per_point = to_int<std::size_t>("n_per_point", v);
                            },
                            [](const RunConfig &c) { return std::to_string(c.n_per_point); }};
        t["seed"] = {[](RunConfig &c, std::string_view v) { c.master_seed = to_int<std::uint64_t>("seed", v); },
                     [](const RunConfig &c) { return std::to_string(c.master_seed); }};
        real("model.j", &RunConfig::model, &ModelParams::j);
        real("model.J", &RunConfig::model, &ModelParams::J);
        real("model.eps1", &RunConfig::model, &ModelParams::eps1);
        real("model.eps2", &RunConfig::model, &ModelParams::eps2);
        real("model.delta", &RunConfig::model, &ModelParams::delta);
        real("model.step_h", &RunConfig::model, &ModelParams::step_h);
        real("model.t_max", &RunConfig::model, &ModelParams::t_max);
        t["ensemble.measure"] = {[](RunConfig &c, std::string_view v) {
                                     c.ensemble_measure = to_enum("ensemble.measure", v, measure_names);
                                 },
                                 [](const RunConfig &c) { return std::string(to_string(c.ensemble_measure)); }};
        t["coincidence.mode"] = {[](RunConfig &c, std::string_view v) {
                                     c.coincidence.mode = to_enum("coincidence.mode", v, mode_names);
                                 },
                                 [](const RunConfig &c) { return std::string(to_string(c.coincidence.mode)); }};
        real("coincidence.closing_time", &RunConfig::coincidence, &CoincidenceConfig::T);
        real("coincidence.W", &RunConfig::coincidence, &CoincidenceConfig::W);
        real("coincidence.L", &RunConfig::coincidence, &CoincidenceConfig::L);
        real("coincidence.v", &RunConfig::coincidence, &CoincidenceConfig::v);
        real("coincidence.v0", &RunConfig::coincidence, &CoincidenceConfig::v0);
        real("coincidence.dy", &RunConfig::coincidence, &CoincidenceConfig::dy);
        t["grid.values"] = {nullptr, [](const RunConfig &c) { return join(c.grid); }};
        t["grid.count"] = {nullptr, nullptr};
        t["grid.max"] = {nullptr, nullptr};
        t["output.path"] = {[](RunConfig &c, std::string_view v) { c.output_path = std::string(v); },
                            [](const RunConfig &c) { return c.output_path; }};
        t["output.format"] = {[](RunConfig &c, std::string_view v) {
                                  c.output_format = to_enum("output.format", v, format_names);
                              },
                              [](const RunConfig &c) { return std::string(to_string(c.output_format)); }};
        return t;
    }();
    return table;
}

/// Canonical key for `key`; a key without a section prefix resolves to the
/// unique sectioned key with that name (e.g. closing_time).
inline std::string canonical_key(std::string_view key)
{
    const auto &table = key_table();
    if (table.contains(key))
        return std::string(key);
    if (key.find('.') == std::string_view::npos) {
        std::string match;
        for (const auto &[name, spec] : table) {
            const auto dot = name.rfind('.');
            if (dot != std::string::npos && std::string_view(name).substr(dot + 1) == key) {
                if (!match.empty())
                    throw UnknownKey("ambiguous configuration key '" + std::string(key) + "'");
                match = name;
            }
        }
        if (!match.empty())
            return match;
    }
    throw UnknownKey("unknown configuration key '" + std::string(key) + "'");
}

} // namespace detail

/// Splits flat `key = value` text into assignments. Blank lines and text after
/// '#' are ignored.
inline KeyValues parse_key_values(std::string_view text)
{
    KeyValues out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw MalformedValue("line " + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty())
            throw MalformedValue("line " + std::to_string(line_no) + ": missing key");
        out.emplace_back(std::string(key), std::string(value));
    }
    return out;
}

/// Builds a validated RunConfig from assignments on top of the defaults. If no
/// grid key is given, the default grid of the selected experiment is used.
inline RunConfig config_from_key_values(const KeyValues &kv)
{
    RunConfig cfg;
    std::optional<std::string> grid_values, grid_count, grid_max;
    for (const auto &[raw_key, value] : kv) {
        const std::string key = detail::canonical_key(raw_key);
        if (key == "grid.values")
            grid_values = value;
        else if (key == "grid.count")
            grid_count = value;
        else if (key == "grid.max")
            grid_max = value;
        else
            detail::key_table().at(key).set(cfg, value);
    }

    if (grid_values && (grid_count || grid_max))
        throw MalformedValue("grid.values cannot be combined with grid.count or grid.max");
    if (grid_values) {
        cfg.grid = detail::to_list("grid.values", *grid_values);
    } else if (grid_count || grid_max) {
        const std::vector<double> def = default_grid(cfg.experiment);
        const std::size_t count = grid_count ? detail::to_int<std::size_t>("grid.count", *grid_count) : def.size();
        const double stop = grid_max ? detail::to_real("grid.max", *grid_max) : def.back();
        if (count < 1)
            throw ConstraintViolation("grid.count must be at least 1");
        cfg.grid.assign(count, 0.0);
        for (std::size_t k = 0; k < count && count > 1; ++k)
            cfg.grid[k] = stop * static_cast<double>(k) / static_cast<double>(count - 1);
    } else {
        cfg.grid = default_grid(cfg.experiment);
    }

    cfg.validate();
    return cfg;
}

inline RunConfig parse_config(std::string_view text, const KeyValues &overrides = {})
{
    KeyValues kv = parse_key_values(text);
    kv.insert(kv.end(), overrides.begin(), overrides.end());
    return config_from_key_values(kv);
}

/// Reads a configuration file. `overrides` are applied after the file's own
/// assignments, one key each, as command-line flags do.
inline RunConfig load_config(const std::filesystem::path &path, const KeyValues &overrides = {})
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw MissingFile("cannot open configuration file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), overrides);
}

/// Canonical key order used when echoing a configuration.
inline constexpr std::string_view config_key_order[] = {
    "experiment",       "n_per_point",        "seed",
    "model.j",          "model.J",            "model.eps1",
    "model.eps2",       "model.delta",        "model.step_h",
    "model.t_max",      "ensemble.measure",   "coincidence.mode",
    "coincidence.closing_time", "coincidence.W", "coincidence.L",
    "coincidence.v",    "coincidence.v0",     "coincidence.dy",
    "grid.values",      "output.path",        "output.format"};

/// Every key with its value, one `key = value` per line; parse_config of the
/// result reproduces `cfg`.
inline KeyValues config_echo(const RunConfig &cfg)
{
    KeyValues out;
    for (std::string_view key : config_key_order)
        out.emplace_back(std::string(key), detail::key_table().find(key)->second.get(cfg));
    return out;
}

inline std::string to_config_text(const RunConfig &cfg)
{
    std::string s;
    for (const auto &[k, v] : config_echo(cfg))
        s += k + " = " + v + "\n";
    return s;
}

} // namespace lhv
