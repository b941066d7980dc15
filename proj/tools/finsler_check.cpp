// finsler_check: run verification suites over sampled points of the slit
// tangent bundle and write CSV + summary reports.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or configuration
// error, 3 I/O error.

#include "finsler/error.hpp"
#include "finsler/nijenhuis.hpp"
#include "finsler/sampling.hpp"
#include "finsler/suite.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

using namespace finsler;

namespace {

struct overrides {
    std::string config_path;
    std::string entry;
    int dim = 2;
    std::vector<std::string> checks;
    std::optional<std::uint64_t> seed;
    std::optional<int> points;
    std::vector<double> betas;
    std::optional<double> tol_jet;
    std::optional<double> tol_bracket;
    std::optional<std::string> out;
};

run_config resolve(const overrides& o, bool need_checks)
{
    run_config cfg;
    if (!o.config_path.empty() && !o.entry.empty()) {
        throw config_error("give --config or --entry, not both");
    }
    if (!o.config_path.empty()) {
        cfg = load_config(o.config_path, false);
    } else if (!o.entry.empty()) {
        cfg.spec = catalog_entry(o.entry, o.dim);
    } else {
        throw config_error("a configuration file (--config) or a catalog entry (--entry) is required");
    }
    if (!o.checks.empty()) {
        cfg.checks = o.checks;
    }
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.points) {
        cfg.n_points = *o.points;
    }
    if (!o.betas.empty()) {
        cfg.beta_values = o.betas;
    }
    if (o.tol_jet) {
        cfg.tolerances.jet_exact = *o.tol_jet;
    }
    if (o.tol_bracket) {
        cfg.tolerances.bracket = *o.tol_bracket;
    }
    if (o.out) {
        cfg.output = *o.out;
    }
    if (!need_checks && cfg.checks.empty()) {
        cfg.checks = {"flag-fit"};
    }
    validate_config(cfg);
    return cfg;
}

void add_source_options(CLI::App* cmd, overrides& o)
{
    cmd->add_option("--config", o.config_path, "JSON run configuration");
    cmd->add_option("--entry", o.entry, "catalog entry used when no configuration file is given");
    cmd->add_option("--dim", o.dim, "dimension for --entry")->check(CLI::Range(2, 8));
    cmd->add_option("--seed", o.seed, "sampling seed");
    cmd->add_option("--points", o.points, "number of sampled points");
}

int run_check_command(const overrides& o)
{
    const auto cfg = resolve(o, true);
    const auto report = run_suite(cfg);
    try {
        emit_report(report, cfg.output);
    } catch (const std::exception& e) {
        std::cerr << "error: cannot write report: " << e.what() << '\n';
        return exit_io_error;
    }
    std::cout << to_summary_text(report);
    std::cout << "report: " << cfg.output << ".csv\n";
    return exit_status(report);
}

int run_fit_flag_command(const overrides& o)
{
    const auto cfg = resolve(o, false);
    std::printf("point,lambda,misfit\n");
    bool ok = true;
    double lo = 0.0;
    double hi = 0.0;
    for (int i = 0; i < cfg.n_points; ++i) {
        const auto fit = flag_fit(cfg.spec, sample_point(cfg.spec, cfg.seed, i));
        std::printf("%d,%.12g,%.6e\n", i, fit.lambda, fit.residual);
        ok = ok && fit.residual < default_flag_tolerance;
        lo = i == 0 ? fit.lambda : std::min(lo, fit.lambda);
        hi = i == 0 ? fit.lambda : std::max(hi, fit.lambda);
    }
    std::printf("lambda in [%.12g, %.12g] over %d points; %s\n", lo, hi, cfg.n_points,
                ok ? "scalar flag curvature fits" : "not of scalar flag curvature at some point");
    return ok ? exit_pass : exit_check_failure;
}

void print_list()
{
    std::cout << "catalog entries:\n";
    for (const auto& name : catalog_names()) {
        std::cout << "  " << name << '\n';
    }
    std::cout << "checks:\n";
    for (const auto& c : check_registry()) {
        std::cout << "  " << c.id << (c.per_beta ? " (per beta)" : "") << (c.riemannian_only ? " (Riemannian)" : "")
                  << ": " << c.description << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical verification of Finsler framed f-structures and CR-structures"};
    app.require_subcommand(1);

    overrides check_opts;
    auto* check = app.add_subcommand("check", "run a verification suite and write reports");
    add_source_options(check, check_opts);
    check->add_option("--check", check_opts.checks, "check id (repeatable; replaces the configured list)");
    check->add_option("--beta", check_opts.betas, "deformation parameter (repeatable)");
    check->add_option("--tol-jet", check_opts.tol_jet, "tolerance for jet-exact residuals");
    check->add_option("--tol-bracket", check_opts.tol_bracket, "tolerance for finite-difference residuals");
    check->add_option("--out", check_opts.out, "output path prefix");

    auto* list = app.add_subcommand("list", "print catalog entries and check ids");

    overrides fit_opts;
    auto* fit = app.add_subcommand("fit-flag", "fit the scalar flag curvature at sampled points");
    add_source_options(fit, fit_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_config_error;
    }

    try {
        if (*list) {
            print_list();
            return exit_pass;
        }
        if (*check) {
            return run_check_command(check_opts);
        }
        return run_fit_flag_command(fit_opts);
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_io_error;
    } catch (const error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return exit_config_error;
    }
}
