#include <string>

#include <CLI11.hpp>

#include "nsstat/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Trajectory-ensemble statistics for the spectral Galerkin Navier-Stokes system"};
    app.require_subcommand(1);

    std::string config_path;
    CLI::App* run = app.add_subcommand(
        "run", "integrate the configured ensemble and write measure.json plus manifest.json");
    run->add_option("config", config_path, "experiment config file (JSON)")->required();

    std::string measure_path;
    std::string checks_arg;
    double tol = 0.0;
    std::string report_out;
    CLI::App* verify =
        app.add_subcommand("verify", "run verification batteries against a measure file");
    verify->add_option("measure", measure_path, "measure file written by run")->required();
    CLI::Option* checks_opt = verify->add_option(
        "--checks", checks_arg, "comma-separated battery list (default: all known checks)");
    CLI::Option* tol_opt = verify->add_option(
        "--tol", tol, "tolerance override for inequality and residual rows");
    verify->add_option("--report", report_out,
                       "report output path (default: report.json beside the measure)");

    std::string report_path;
    std::string format = "csv";
    std::string out_dir;
    CLI::App* report = app.add_subcommand("report", "render plot tables from a report file");
    report->add_option("report", report_path, "report file written by verify")->required();
    report->add_option("--format", format, "output format, csv or json")->capture_default_str();
    report->add_option("--out-dir", out_dir, "output directory (default: beside the report)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? nsstat::kExitPass : nsstat::kExitUsage;
    }

    if (run->parsed()) return nsstat::cmd_run(config_path);
    if (verify->parsed()) {
        nsstat::VerifyOptions opts;
        opts.checks_given = checks_opt->count() > 0;
        if (opts.checks_given) opts.checks = nsstat::split_csv(checks_arg);
        if (tol_opt->count() > 0) opts.tol = tol;
        opts.report_path = report_out;
        return nsstat::cmd_verify(measure_path, opts);
    }
    return nsstat::cmd_report(report_path, format, out_dir);
}
