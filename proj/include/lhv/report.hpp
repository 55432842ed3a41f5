#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lhv/config.hpp"
#include "lhv/experiments.hpp"
#include "lhv/format.hpp"
#include "lhv/parallel.hpp"
#include "lhv/rng.hpp"
#include "lhv/version.hpp"

namespace lhv {

using Cell = std::variant<double, std::uint64_t>;

struct Diagnostics {
    std::uint64_t unresolved = 0;            ///< trajectories (single) or pairs (pair modes) left unresolved
    std::uint64_t degenerate_beta_evals = 0; ///< RHS evaluations with |U| = 0
    double wall_seconds = 0.0;               ///< JSON only; excluded from CSV
};

/// Result table of one experiment plus everything needed to rerun it.
struct ExperimentReport {
    RunConfig config;
    std::vector<std::string> columns;      ///< CSV and JSON columns, in order
    std::vector<std::string> json_columns; ///< additional JSON-only columns
    std::vector<std::vector<Cell>> rows;   ///< columns followed by json_columns
    Diagnostics diagnostics;
    std::string tool_version = std::string(version);
    std::string rng = std::string(rng_identifier);
    std::string bell_convention; ///< set for the Bell experiment
};

namespace detail {

inline Cell count(std::size_t n) { return static_cast<std::uint64_t>(n); }

inline void fill_single(ExperimentReport &r, const ExecutionPolicy &exec)
{
    const RunConfig &c = r.config;
    r.columns = {"theta", "p_plus", "p_plus_qm", "n_resolved"};
    for (const auto &pt : run_single_spin(c.grid, c.n_per_point, c.model, c.master_seed, exec)) {
        r.rows.push_back({pt.theta, pt.p_plus, quantum_reference(pt.theta, c.model.j).p_plus, count(pt.n_resolved)});
        r.diagnostics.unresolved += pt.n_unresolved;
        r.diagnostics.degenerate_beta_evals += pt.degenerate_beta_evals;
    }
}

inline std::vector<CorrelationPoint> pair_points(ExperimentReport &r, std::span<const double> grid,
                                                 const ExecutionPolicy &exec)
{
    const RunConfig &c = r.config;
    auto pts = run_pair(grid, c.n_per_point, c.model, c.coincidence, c.master_seed, exec, c.ensemble_measure);
    for (const auto &pt : pts) {
        r.diagnostics.unresolved += pt.n_unresolved;
        r.diagnostics.degenerate_beta_evals += pt.degenerate_beta_evals;
    }
    return pts;
}

inline void fill_pair(ExperimentReport &r, const ExecutionPolicy &exec)
{
    r.columns = {"theta", "E_raw", "E_norm", "E_raw_qm", "E_norm_qm", "n_accepted", "n_total"};
    for (const auto &pt : pair_points(r, r.config.grid, exec)) {
        const auto qm = quantum_reference(pt.theta, r.config.model.j);
        r.rows.push_back({pt.theta, pt.E_raw, pt.E_norm, qm.E_raw, qm.E_norm, count(pt.n_accepted),
                          count(pt.n_total)});
    }
}

inline void fill_samples(ExperimentReport &r, const ExecutionPolicy &exec)
{
    r.columns = {"theta", "n_accepted"};
    for (const auto &pt : pair_points(r, r.config.grid, exec))
        r.rows.push_back({pt.theta, count(pt.n_accepted)});
}

inline void fill_bell(ExperimentReport &r, const ExecutionPolicy &exec)
{
    r.columns = {"phi", "F", "F_qm"};
    r.json_columns = {"F_stderr", "n_accepted_phi", "n_accepted_3phi"};
    r.bell_convention = std::string(lhv::bell_convention);
    const std::vector<double> angles = bell_angles(r.config.grid);
    const CorrelationTable table(pair_points(r, angles, exec));
    for (const auto &bp : bell_from_table(r.config.grid, table))
        r.rows.push_back({bp.phi, bp.F, bp.F_qm, bp.F_stderr, count(bp.at_phi.n_accepted),
                          count(bp.at_3phi.n_accepted)});
}

inline void write_cell(std::ostream &os, const Cell &c)
{
    if (const double *d = std::get_if<double>(&c))
        os << format_double(*d);
    else
        os << std::get<std::uint64_t>(c);
}

} // namespace detail

/// Runs the experiment selected by `config`.
inline ExperimentReport run(const RunConfig &config, const ExecutionPolicy &exec = {})
{
    config.validate();
    ExperimentReport r;
    r.config = config;
    const auto start = std::chrono::steady_clock::now();
    switch (config.experiment) {
    case Experiment::Single:
        detail::fill_single(r, exec);
        break;
    case Experiment::Pair:
        detail::fill_pair(r, exec);
        break;
    case Experiment::Bell:
        detail::fill_bell(r, exec);
        break;
    case Experiment::Samples:
        detail::fill_samples(r, exec);
        break;
    }
    r.diagnostics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// CSV: '#' metadata lines (tool, RNG, deterministic diagnostics, config
/// echo), then a header row and one row per grid point. Every line ends in
/// '\n'. Output depends only on the configuration.
inline void write_csv(const ExperimentReport &r, std::ostream &os)
{
    os << "# " << tool_name << ' ' << r.tool_version << '\n';
    os << "# rng: " << r.rng << '\n';
    if (!r.bell_convention.empty())
        os << "# bell: " << r.bell_convention << '\n';
    os << "# diagnostics: unresolved=" << r.diagnostics.unresolved
       << " degenerate_beta_evals=" << r.diagnostics.degenerate_beta_evals << '\n';
    os << "# config:\n";
    for (const auto &[k, v] : config_echo(r.config))
        os << "# " << k << " = " << v << '\n';
    for (std::size_t c = 0; c < r.columns.size(); ++c)
        os << (c ? "," : "") << r.columns[c];
    os << '\n';
    for (const auto &row : r.rows) {
        for (std::size_t c = 0; c < r.columns.size(); ++c) {
            if (c)
                os << ',';
            detail::write_cell(os, row[c]);
        }
        os << '\n';
    }
}

/// Recovers the configuration echoed in the metadata of a CSV report.
inline RunConfig config_from_csv(std::string_view csv)
{
    std::string text;
    bool in_config = false;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        const auto nl = csv.find('\n', pos);
        const std::string_view line = csv.substr(pos, nl == std::string_view::npos ? csv.npos : nl - pos);
        pos = nl == std::string_view::npos ? csv.size() : nl + 1;
        if (!line.starts_with("#"))
            break;
        if (line == "# config:") {
            in_config = true;
            continue;
        }
        if (in_config && line.starts_with("# "))
            text.append(line.substr(2)).push_back('\n');
    }
    if (!in_config)
        throw MalformedValue("CSV report carries no configuration echo");
    return parse_config(text);
}

inline nlohmann::ordered_json to_json(const ExperimentReport &r)
{
    nlohmann::ordered_json j;
    j["tool"] = tool_name;
    j["version"] = r.tool_version;
    j["rng"] = r.rng;
    if (!r.bell_convention.empty())
        j["bell_convention"] = r.bell_convention;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto &[k, v] : config_echo(r.config))
        cfg[k] = v;
    j["config"] = cfg;
    std::vector<std::string> names = r.columns;
    names.insert(names.end(), r.json_columns.begin(), r.json_columns.end());
    j["columns"] = names;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto &row : r.rows) {
        nlohmann::ordered_json o;
        for (std::size_t c = 0; c < names.size() && c < row.size(); ++c)
            std::visit([&](auto v) { o[names[c]] = v; }, row[c]);
        rows.push_back(o);
    }
    j["rows"] = rows;
    j["diagnostics"] = {{"unresolved", r.diagnostics.unresolved},
                        {"degenerate_beta_evals", r.diagnostics.degenerate_beta_evals},
                        {"wall_seconds", r.diagnostics.wall_seconds}};
    return j;
}

inline void write_json(const ExperimentReport &r, std::ostream &os) { os << to_json(r).dump(2) << '\n'; }

/// Writes the report to `path`, or to standard output when `path` is empty or "-".
inline void emit(const ExperimentReport &r, OutputFormat format, const std::string &path)
{
    auto write = [&](std::ostream &os) {
        if (format == OutputFormat::CSV)
            write_csv(r, os);
        else
            write_json(r, os);
        os.flush();
        if (!os)
            throw OutputError("failed writing report to '" + (path.empty() ? std::string("-") : path) + "'");
    };
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw OutputError("cannot open '" + path + "' for writing");
    write(out);
}

} // namespace lhv
