#include "nsstat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <utility>

#include "nsstat/config.hpp"
#include "nsstat/io.hpp"
#include "nsstat/pipeline.hpp"
#include "nsstat/psi.hpp"

namespace nsstat {

namespace {

namespace fs = std::filesystem;

InequalityReport residual_row(std::string equation, double t_prime, double t, double residual,
                              double tol) {
    InequalityReport r;
    r.equation = std::move(equation);
    r.t_prime = t_prime;
    r.t = t;
    r.lhs = residual;
    r.rhs = 0.0;
    r.defect = tol - residual;
    r.tol = tol;
    r.passed = residual <= tol;
    return r;
}

/// Fixed test family for the Liouville battery: three cylindrical functions
/// of arity 1..3 on the lowest modes, with support radii wide enough to
/// cover every coordinate the stored trajectories reach (factor two of the
/// observed maximum), so the gradients stay active along the whole run.
std::vector<CylindricalTestFunction> liouville_family(const TrajectoryMeasure& rho) {
    const LatticePtr& lat = rho.lattice();
    int m = lat->mode_count();
    auto coord_radius = [&](const TestField& v) {
        double worst = 0.0;
        for (int j = 0; j < rho.size(); ++j)
            for (int i = 0; i < rho.atom(j).node_count(); ++i)
                worst = std::max(worst, std::abs(l2_inner(rho.atom(j).state(i), v)));
        return 2.0 * (1.0 + worst);
    };
    auto radii_for = [&](const std::vector<TestField>& fields) {
        std::vector<double> radii;
        radii.reserve(fields.size());
        for (const auto& v : fields) radii.push_back(coord_radius(v));
        return radii;
    };
    std::vector<CylindricalTestFunction> family;

    std::vector<TestField> f1{unit_mode(lat, 0, 0)};
    QuadraticProfile q1{0.5, {1.0}, {{0.25}}};
    family.emplace_back(f1, radii_for(f1), q1);

    std::vector<TestField> f2{unit_mode(lat, 0, 1), unit_mode(lat, std::min(1, m - 1), 0)};
    QuadraticProfile q2{1.0, {0.5, -0.25}, {{0.1, 0.05}, {0.05, -0.2}}};
    family.emplace_back(f2, radii_for(f2), q2);

    std::vector<TestField> f3{unit_mode(lat, 0, 0, 1.0471975511965976),
                              unit_mode(lat, std::min(1, m - 1), 1),
                              unit_mode(lat, std::min(2, m - 1), 0)};
    QuadraticProfile q3{0.25,
                        {0.2, -0.1, 0.3},
                        {{0.05, 0.0, 0.02}, {0.0, -0.04, 0.0}, {0.02, 0.0, 0.08}}};
    family.emplace_back(f3, radii_for(f3), q3);
    return family;
}

struct Battery {
    const MeasureFile& mf;
    std::optional<double> user_tol;
    ReportFile rf;

    const TrajectoryMeasure& level0() const { return mf.levels.front(); }
    double nu() const { return mf.box.viscosity; }
    double lambda1() const { return level0().lattice()->lambda_min(); }

    EnsembleSeries ens0;
    double tol_ineq = 0.0;

    Battery(const MeasureFile& measure, std::optional<double> tol)
        : mf(measure), user_tol(tol), ens0(make_ensemble_series(mf.levels.front(), mf.forcing)) {
        tol_ineq = inequality_tolerance();
        const TimeGrid& grid = level0().grid();
        for (int i = 0; i < grid.node_count(); ++i) {
            PhaseMeasure slice = level0().project_at(grid.node(i));
            rf.times.push_back(grid.node(i));
            rf.energy_series.push_back(mean_energy(slice));
            rf.enstrophy_series.push_back(mean_enstrophy(slice));
        }
    }

    /// Richardson-calibrated from the two coarsest levels when available:
    /// ten times the dt^2 constant of the full-interval mean energy balance.
    double inequality_tolerance() {
        if (user_tol) return *user_tol;
        if (mf.default_tol > 0.0) return mf.default_tol;
        if (mf.levels.size() < 2) return 1e-6;
        const TimeGrid& g0 = level0().grid();
        PsiFunction linear = PsiFunction::linear();
        double d0 = mean_energy_inequality(ens0, linear, g0.t0(), g0.t1(), nu(), 1.0).defect;
        EnsembleSeries ens1 = make_ensemble_series(mf.levels[1], mf.forcing);
        const TimeGrid& g1 = mf.levels[1].grid();
        double d1 = mean_energy_inequality(ens1, linear, g1.t0(), g1.t1(), nu(), 1.0).defect;
        double c = richardson_constant(d0, g0.dt(), d1, g1.dt());
        return std::max(10.0 * c * g0.dt() * g0.dt(), 1e-12);
    }

    void run_energy() {
        const TimeGrid& grid = level0().grid();
        for (int j = 0; j < level0().size(); ++j) {
            auto tagged = [&](InequalityReport r) {
                r.equation += "[atom " + std::to_string(j) + "]";
                rf.report.rows.push_back(std::move(r));
            };
            const EnergySeries& es = ens0.per_atom[j];
            tagged(energy_inequality(es, grid.t0(), grid.t1(), nu(), tol_ineq));
            tagged(apriori_bound(es, mf.forcing, grid.t0(), grid.t1(), nu(), lambda1(),
                                 tol_ineq));
            tagged(decay_envelope(es, mf.forcing, grid.t0(), grid.t1(), nu(), lambda1(),
                                  tol_ineq));
        }
    }

    void run_mean_energy() {
        const TimeGrid& grid = level0().grid();
        double tmid = grid.node(grid.steps() / 2);
        std::vector<std::pair<double, double>> pairs{{grid.t0(), tmid},
                                                     {tmid, grid.t1()},
                                                     {grid.t0(), grid.t1()}};
        for (const PsiFunction& psi : standard_psi_family())
            for (auto [a, b] : pairs)
                rf.report.rows.push_back(mean_energy_inequality(ens0, psi, a, b, nu(),
                                                                tol_ineq));
    }

    void run_bound() {
        auto rows = mean_energy_bound(level0(), nu(), lambda1(), mf.forcing, tol_ineq);
        rf.report.rows.insert(rf.report.rows.end(), rows.begin(), rows.end());
    }

    void run_continuity() {
        const TimeGrid& grid = level0().grid();
        int offset = std::min(grid.steps(), 8);
        double horizon = offset * grid.dt();
        double tol = user_tol.value_or(1e-3);
        for (const PsiFunction& psi : standard_psi_family()) {
            InitialContinuityReport rep = initial_continuity(level0(), psi, grid.t0(), horizon,
                                                             tol);
            InequalityReport row = residual_row(rep.equation, grid.t0(), grid.t0() + horizon,
                                                std::abs(rep.limit), tol);
            row.passed = rep.passed;
            rf.report.rows.push_back(std::move(row));
        }
    }

    void run_liouville() {
        const TimeGrid& grid = level0().grid();
        std::vector<CylindricalTestFunction> family = liouville_family(level0());
        std::vector<std::vector<double>> residuals(mf.levels.size());
        for (size_t l = 0; l < mf.levels.size(); ++l) {
            for (size_t i = 0; i < family.size(); ++i) {
                double r = liouville_residual(mf.levels[l], family[i], grid.t0(), grid.t1(),
                                              nu(), mf.forcing);
                residuals[l].push_back(r);
                rf.residual_vs_dt.push_back(
                    {mf.levels[l].grid().dt(), "phi" + std::to_string(i), r});
            }
        }
        for (size_t i = 0; i < family.size(); ++i) {
            double tol;
            if (user_tol) {
                tol = *user_tol;
            } else if (mf.levels.size() >= 2) {
                double c = richardson_constant(residuals[0][i], grid.dt(), residuals[1][i],
                                               mf.levels[1].grid().dt());
                tol = std::max(10.0 * c * grid.dt() * grid.dt(), 1e-12);
            } else {
                tol = 1e-4;
            }
            rf.report.rows.push_back(residual_row("liouville[phi" + std::to_string(i) + "]",
                                                  grid.t0(), grid.t1(), residuals[0][i], tol));
        }
    }

    void run_carrier() {
        const TimeGrid& grid = level0().grid();
        std::vector<double> times;
        for (int o = grid.steps() / 4; o >= 1; o /= 2) times.push_back(grid.node(o));
        double tol = user_tol.value_or(0.05);
        CarrierReport rep = carrier_check(level0(), times, tol);
        for (int j = 0; j < level0().size(); ++j) {
            InequalityReport row =
                residual_row("carrier[atom " + std::to_string(j) + "]", grid.t0(),
                             times.front(), std::abs(rep.atoms[j].limit), tol);
            row.passed = rep.atoms[j].consistent;
            rf.report.rows.push_back(std::move(row));
        }
        InequalityReport weighted = residual_row("carrier[weighted]", grid.t0(), times.front(),
                                                 std::abs(rep.weighted_limit), tol);
        weighted.passed = rep.passed && !rep.tampered;
        rf.report.rows.push_back(std::move(weighted));
        rf.psi_times = rep.times;
        rf.psi_samples = rep.weighted_psi;
    }

    void run_localization() {
        const TimeGrid& grid = level0().grid();
        double worst0 = 0.0;
        for (int j = 0; j < level0().size(); ++j)
            worst0 = std::max(worst0, l2_norm(level0().atom(j).state(0)));
        double radius = std::max(compute_R0(mf.forcing, nu(), lambda1()), worst0) *
                        (1.0 + 1e-6);
        std::vector<double> samples;
        for (int q = 0; q <= 4; ++q) {
            double t = grid.node(grid.steps() * q / 4);
            if (samples.empty() || samples.back() != t) samples.push_back(t);
        }
        LocalizationReport rep = localization_check(level0(), radius, samples);
        InequalityReport row;
        row.equation = "localization";
        row.t_prime = grid.t0();
        row.t = grid.t1();
        row.lhs = rep.norm;
        row.rhs = radius;
        row.defect = radius - rep.norm;
        row.tol = 0.0;
        row.passed = rep.passed && rep.full_sweep_passed;
        rf.report.rows.push_back(std::move(row));
    }

    void run(const std::string& name) {
        if (name == "energy")
            run_energy();
        else if (name == "mean_energy")
            run_mean_energy();
        else if (name == "bound")
            run_bound();
        else if (name == "continuity")
            run_continuity();
        else if (name == "liouville")
            run_liouville();
        else if (name == "carrier")
            run_carrier();
        else
            run_localization();
    }
};

}  // namespace

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names{"energy",    "mean_energy", "bound",
                                                "continuity", "liouville",   "carrier",
                                                "localization"};
    return names;
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string::npos) comma = text.size();
        std::string token = text.substr(start, comma - start);
        size_t first = token.find_first_not_of(" \t");
        size_t last = token.find_last_not_of(" \t");
        if (first != std::string::npos) out.push_back(token.substr(first, last - first + 1));
        start = comma + 1;
    }
    return out;
}

int cmd_run(const std::string& config_path) {
    std::string text;
    ExperimentConfig cfg;
    try {
        text = read_text_file(config_path);
        cfg = parse_config(text);
    } catch (const std::exception& e) {
        std::cerr << "run: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        LatticePtr lattice = build_lattice(cfg.box);
        ForcingSignal forcing =
            forcing_from_spec(lattice, cfg.interval, cfg.forcing_spec, "config.forcing");
        PhaseMeasure mu0 =
            initial_measure_from_spec(lattice, cfg.measure_spec, "config.initial_measure");
        MeasureFile mf;
        mf.box = cfg.box;
        mf.interval = cfg.interval;
        mf.forcing = forcing;
        mf.default_checks = cfg.verify_checks;
        mf.default_tol = cfg.verify_tol;
        mf.label = cfg.label;
        for (int l = 0; l < cfg.richardson_levels; ++l) {
            VFBuildConfig build{cfg.interval,
                                cfg.dt / (1 << l),
                                cfg.box.viscosity,
                                forcing,
                                cfg.ladder,
                                IntegrateOptions{cfg.method, "ifrk4"}};
            mf.levels.push_back(construct_vf_measure(mu0, build));
        }
        std::string measure_bytes = dump_canonical(measure_to_json(mf));
        fs::path dir(cfg.output_directory);
        write_text_file((dir / "measure.json").string(), measure_bytes);
        RunManifest manifest;
        manifest.config_sha256 = sha256_hex(text);
        manifest.label = cfg.label;
        manifest.outputs.push_back(
            {"measure.json", sha256_hex(measure_bytes), measure_bytes.size()});
        save_manifest((dir / "manifest.json").string(), manifest);
        std::cout << "wrote " << (dir / "measure.json").string() << " (" << mu0.size()
                  << " atoms, " << cfg.richardson_levels << " dt levels, " << cfg.steps()
                  << " steps)\n"
                  << "wrote " << (dir / "manifest.json").string() << "\n";
        return kExitPass;
    } catch (const std::invalid_argument& e) {
        std::cerr << "run: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "run: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_verify(const std::string& measure_path, const VerifyOptions& opts) {
    MeasureFile mf;
    try {
        mf = load_measure(measure_path);
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << "\n";
        return kExitUsage;
    }
    std::vector<std::string> checks = opts.checks_given
                                          ? opts.checks
                                          : (mf.default_checks.empty() ? known_checks()
                                                                       : mf.default_checks);
    if (checks.empty()) {
        std::cerr << "verify: empty check spec; known checks:";
        for (const auto& n : known_checks()) std::cerr << " " << n;
        std::cerr << "\n";
        return kExitUsage;
    }
    std::vector<std::string> selected;
    for (const auto& name : checks) {
        const auto& known = known_checks();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            std::cerr << "verify: unknown check \"" << name << "\"; known checks:";
            for (const auto& n : known) std::cerr << " " << n;
            std::cerr << "\n";
            return kExitUsage;
        }
        if (std::find(selected.begin(), selected.end(), name) == selected.end())
            selected.push_back(name);
    }
    int steps = mf.levels.front().grid().steps();
    bool wants_continuity =
        std::find(selected.begin(), selected.end(), "continuity") != selected.end();
    bool wants_carrier = std::find(selected.begin(), selected.end(), "carrier") != selected.end();
    if (wants_continuity && steps < 4) {
        std::cerr << "verify: the continuity check needs at least 4 grid steps, measure has "
                  << steps << "\n";
        return kExitUsage;
    }
    if (wants_carrier && steps < 16) {
        std::cerr << "verify: the carrier check needs at least 16 grid steps, measure has "
                  << steps << "\n";
        return kExitUsage;
    }
    if (opts.tol && !(*opts.tol > 0.0)) {
        std::cerr << "verify: --tol must be positive\n";
        return kExitUsage;
    }
    try {
        Battery battery(mf, opts.tol);
        for (const auto& name : selected) battery.run(name);
        battery.rf.label = mf.label;
        std::string report_path =
            opts.report_path.empty()
                ? (fs::path(measure_path).parent_path() / "report.json").string()
                : opts.report_path;
        save_report(report_path, battery.rf);
        int failed = 0;
        for (const auto& row : battery.rf.report.rows)
            if (!row.passed) {
                ++failed;
                std::cout << "[FAIL] " << row.equation << " (t'=" << row.t_prime
                          << ", t=" << row.t << ", defect=" << row.defect << ", tol=" << row.tol
                          << ")\n";
            }
        std::cout << battery.rf.report.rows.size() - failed << "/"
                  << battery.rf.report.rows.size() << " rows passed; report written to "
                  << report_path << "\n";
        return failed == 0 ? kExitPass : kExitCheckFailure;
    } catch (const std::exception& e) {
        std::cerr << "verify: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_report(const std::string& report_path, const std::string& format,
               const std::string& out_dir) {
    if (format != "csv" && format != "json") {
        std::cerr << "report: unknown format \"" << format << "\" (expected csv or json)\n";
        return kExitUsage;
    }
    ReportFile rf;
    try {
        rf = load_report(report_path);
    } catch (const std::exception& e) {
        std::cerr << "report: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        fs::path dir = out_dir.empty() ? fs::path(report_path).parent_path() : fs::path(out_dir);
        std::string stem = fs::path(report_path).stem().string();
        std::vector<std::string> written;
        if (format == "csv") {
            auto emit = [&](const std::string& suffix, const std::string& bytes) {
                std::string path = (dir / (stem + "." + suffix + ".csv")).string();
                write_text_file(path, bytes);
                written.push_back(path);
            };
            emit("rows", rows_csv(rf.report));
            emit("series", series_csv(rf));
            emit("residuals", residual_csv(rf));
            emit("psi", psi_csv(rf));
        } else {
            Json j = report_to_json(rf);
            Json plot{{"series", j["series"]},
                      {"residual_vs_dt", j["residual_vs_dt"]},
                      {"psi", j["psi"]},
                      {"rows", j["rows"]}};
            std::string path = (dir / (stem + ".plot.json")).string();
            write_text_file(path, dump_canonical(plot));
            written.push_back(path);
        }
        for (const auto& p : written) std::cout << "wrote " << p << "\n";
        return kExitPass;
    } catch (const std::exception& e) {
        std::cerr << "report: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace nsstat
