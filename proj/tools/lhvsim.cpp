// lhvsim: command-line driver for the local hidden-variable spin simulator.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lhv/lhv.hpp"

namespace {

// Exit codes.
constexpr int exit_ok = 0;
constexpr int exit_internal = 1;
constexpr int exit_parse = 2;
constexpr int exit_constraint = 3;
constexpr int exit_runtime = 4;
constexpr int exit_output = 5;

struct Flag {
    const char *name;
    const char *key;
    const char *help;
};

// Flags that override one configuration key each.
constexpr Flag override_flags[] = {
    {"--seed", "seed", "master seed"},
    {"--closing-time", "coincidence.closing_time", "closing time T"},
    {"--mode", "coincidence.mode", "coincidence rule: none|ideal|spatial"},
    {"--n", "n_per_point", "samples per grid point"},
    {"--out", "output.path", "output file ('-' for stdout)"},
    {"--format", "output.format", "csv|json"},
    {"--step-h", "model.step_h", "integrator step"},
    {"--t-max", "model.t_max", "integration cap"},
    {"--grid", "grid.values", "comma-separated angles in radians"},
    {"--measure", "ensemble.measure", "singlet direction measure: sphere|uniform_theta"},
    {"--dy", "coincidence.dy", "bin width for spatial coincidence"},
};

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Local hidden-variable model of spin-1/2 measurement: Monte Carlo experiments"};
    app.set_version_flag("--version", std::string(lhv::version));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    unsigned workers = 0;
    app.add_option("--config", config_path, "flat key = value configuration file");
    app.add_option("--workers", workers, "worker threads (0 = all cores); results do not depend on it");

    std::vector<std::string> values(std::size(override_flags));
    std::vector<CLI::Option *> options;
    for (std::size_t k = 0; k < std::size(override_flags); ++k)
        options.push_back(app.add_option(override_flags[k].name, values[k], override_flags[k].help));

    const std::pair<const char *, const char *> commands[] = {
        {"single", "single-object outcome probabilities over the eigen-ensembles"},
        {"pair", "pair correlations under the configured coincidence rule"},
        {"bell", "Bell combination F(phi)"},
        {"samples", "accepted pair counts per angle"},
    };
    for (const auto &[name, help] : commands)
        app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_parse;
    }

    lhv::KeyValues overrides;
    overrides.emplace_back("experiment", app.get_subcommands().front()->get_name());
    for (std::size_t k = 0; k < options.size(); ++k)
        if (options[k]->count() > 0)
            overrides.emplace_back(override_flags[k].key, values[k]);

    lhv::RunConfig cfg;
    try {
        cfg = config_path.empty() ? lhv::parse_config("", overrides) : lhv::load_config(config_path, overrides);
    } catch (const lhv::ConstraintViolation &e) {
        std::cerr << "lhvsim: constraint violation: " << e.what() << '\n';
        return exit_constraint;
    } catch (const lhv::ConfigError &e) {
        std::cerr << "lhvsim: configuration error: " << e.what() << '\n';
        return exit_parse;
    }

    try {
        const lhv::ExperimentReport report = lhv::run(cfg, lhv::ExecutionPolicy{workers});
        lhv::emit(report, cfg.output_format, cfg.output_path);
        if (report.diagnostics.unresolved > 0)
            std::cerr << "lhvsim: " << report.diagnostics.unresolved << " unresolved (excluded from statistics)\n";
    } catch (const lhv::ConstraintViolation &e) {
        std::cerr << "lhvsim: constraint violation: " << e.what() << '\n';
        return exit_constraint;
    } catch (const lhv::OutputError &e) {
        std::cerr << "lhvsim: " << e.what() << '\n';
        return exit_output;
    } catch (const lhv::Error &e) {
        std::cerr << "lhvsim: runtime failure: " << e.what() << '\n';
        return exit_runtime;
    } catch (const std::exception &e) {
        std::cerr << "lhvsim: internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_ok;
}
