#include "nsstat/pipeline.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace nsstat {

namespace {

/// Composite trapezoid of g over the node index range [is, it].
double trapezoid(const std::vector<double>& g, int is, int it, double dt) {
    double s = 0.5 * (g[is] + g[it]);
    for (int i = is + 1; i < it; ++i) s += g[i];
    return s * dt;
}

InequalityReport make_report(std::string equation, double t_prime, double t, double lhs,
                             double rhs, double tol) {
    InequalityReport r;
    r.equation = std::move(equation);
    r.t_prime = t_prime;
    r.t = t;
    r.lhs = lhs;
    r.rhs = rhs;
    r.defect = rhs - lhs;
    r.tol = tol;
    r.passed = r.defect >= -tol;
    return r;
}

void check_positive(double x, const char* what) {
    if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

std::pair<int, int> endpoints(const TimeGrid& grid, double t_prime, double t,
                              const char* where) {
    const int is = grid.index_at(t_prime);
    const int it = grid.index_at(t);
    if (is >= it)
        throw std::invalid_argument(std::string(where) + ": t_prime must precede t on the grid");
    return {is, it};
}

/// Least-squares line y = slope x + intercept.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    return {slope, (sy - slope * sx) / n};
}

/// Sum_j theta_j Phi(u_j) at one grid node, in stored atom order.
double mean_phi(const TrajectoryMeasure& rho, const CylindricalTestFunction& phi, int node) {
    double acc = 0.0;
    for (int j = 0; j < rho.size(); ++j)
        acc += rho.weight(j) * cyl_eval(phi, rho.atom(j).state(node));
    return acc;
}

}  // namespace

TrajectoryMeasure construct_vf_measure(const PhaseMeasure& mu0, const VFBuildConfig& cfg) {
    auto run = [&](int j) {
        try {
            return integrate(mu0.atom(j), cfg.interval, cfg.dt, cfg.nu, cfg.forcing, cfg.solver);
        } catch (const std::runtime_error& e) {
            std::ostringstream msg;
            msg << "construct_vf_measure: atom " << j << ": " << e.what();
            throw std::runtime_error(msg.str());
        }
    };

    std::vector<std::optional<Trajectory>> slots(mu0.size());
    if (cfg.ladder) {
        cfg.ladder->validate();
        const double lambda1 = mu0.lattice()->lambda_min();
        const double r0 = compute_R0(cfg.forcing, cfg.nu, lambda1);
        if (cfg.ladder->radii.front() < r0) {
            std::ostringstream msg;
            msg << "construct_vf_measure: ladder starts at " << cfg.ladder->radii.front()
                << ", below the absorbing radius " << r0;
            throw std::invalid_argument(msg.str());
        }
        annuli_split(mu0, *cfg.ladder);  // proves the ladder covers every atom
        // Annuli routing: integrate band by band in split order, landing each
        // run back in its source slot so the weights recombine without any
        // arithmetic.
        const auto& radii = cfg.ladder->radii;
        std::vector<std::size_t> band(mu0.size());
        for (int j = 0; j < mu0.size(); ++j) {
            const double norm = l2_norm(mu0.atom(j));
            std::size_t k = 0;
            while (norm > radii[k]) ++k;
            band[j] = k;
        }
        for (std::size_t k = 0; k < radii.size(); ++k)
            for (int j = 0; j < mu0.size(); ++j)
                if (band[j] == k) slots[j] = run(j);
    } else {
        for (int j = 0; j < mu0.size(); ++j) slots[j] = run(j);
    }

    std::vector<Trajectory> runs;
    runs.reserve(mu0.size());
    for (auto& s : slots) runs.push_back(std::move(*s));
    return TrajectoryMeasure(std::move(runs), mu0.weights());
}

double liouville_residual(const TrajectoryMeasure& rho, const CylindricalTestFunction& phi,
                          double t_prime, double t, double nu, const ForcingSignal& f) {
    check_positive(nu, "liouville_residual: nu");
    if (!phi.lattice()->compatible(*rho.lattice()))
        throw std::invalid_argument("liouville_residual: test function on a different lattice");
    if (f.lattice() && !f.lattice()->compatible(*rho.lattice()))
        throw std::invalid_argument("liouville_residual: forcing on a different lattice");
    const auto& grid = rho.grid();
    const auto [is, it] = endpoints(grid, t_prime, t, "liouville_residual");

    const int n = it - is + 1;
    std::vector<double> integrand(n);
    for (int i = 0; i < n; ++i) {
        const VelocityField& fs = f.at(grid.node(is + i));
        double acc = 0.0;
        for (int j = 0; j < rho.size(); ++j) {
            const VelocityField& u = rho.atom(j).state(is + i);
            const TestField g = cyl_grad(phi, u);
            if (l2_norm_sq(g) == 0.0) continue;  // outside the profile support
            const double term = l2_inner(fs, g) - nu * l2_inner(stokes_apply(u), g) -
                                l2_inner(nonlinear_B(u, u), g);
            acc += rho.weight(j) * term;
        }
        integrand[i] = acc;
    }
    const double flux = trapezoid(integrand, 0, n - 1, grid.dt());
    return std::abs(mean_phi(rho, phi, it) - mean_phi(rho, phi, is) - flux);
}

EnsembleSeries make_ensemble_series(const TrajectoryMeasure& rho, const ForcingSignal& f) {
    EnsembleSeries s{rho.grid(), rho.weights(), {}};
    s.per_atom.reserve(rho.size());
    for (int j = 0; j < rho.size(); ++j) s.per_atom.push_back(make_energy_series(rho.atom(j), f));
    return s;
}

InequalityReport mean_energy_inequality(const EnsembleSeries& series, const PsiFunction& psi,
                                        double t_prime, double t, double nu, double tol) {
    check_positive(nu, "mean_energy_inequality: nu");
    const auto [is, it] = endpoints(series.grid, t_prime, t, "mean_energy_inequality");
    const double dt = series.grid.dt();
    const int n = it - is + 1;
    const int atoms = static_cast<int>(series.per_atom.size());

    std::vector<double> dissip(n), work(n);
    for (int i = 0; i < n; ++i) {
        double d = 0.0, w = 0.0;
        for (int j = 0; j < atoms; ++j) {
            const EnergySeries& a = series.per_atom[j];
            const double der = psi.derivative(a.energy[is + i]);
            d += series.weights[j] * (der * a.enstrophy[is + i]);
            w += series.weights[j] * (der * a.work[is + i]);
        }
        dissip[i] = d;
        work[i] = w;
    }
    double psi_t = 0.0, psi_s = 0.0;
    for (int j = 0; j < atoms; ++j) {
        psi_t += series.weights[j] * psi.value(series.per_atom[j].energy[it]);
        psi_s += series.weights[j] * psi.value(series.per_atom[j].energy[is]);
    }
    const double lhs = 0.5 * psi_t + nu * trapezoid(dissip, 0, n - 1, dt);
    const double rhs = 0.5 * psi_s + trapezoid(work, 0, n - 1, dt);
    return make_report("mean_energy[" + psi.name() + "]", t_prime, t, lhs, rhs, tol);
}

InequalityReport mean_energy_inequality(const TrajectoryMeasure& rho, const PsiFunction& psi,
                                        double t_prime, double t, double nu,
                                        const ForcingSignal& f, double tol) {
    return mean_energy_inequality(make_ensemble_series(rho, f), psi, t_prime, t, nu, tol);
}

InitialContinuityReport initial_continuity(const TrajectoryMeasure& rho, const PsiFunction& psi,
                                           double t0, double horizon, double tol) {
    check_positive(horizon, "initial_continuity: horizon");
    const auto& grid = rho.grid();
    const int i0 = grid.index_at(t0);
    const int offset = grid.index_at(t0 + horizon) - i0;
    if (offset < 4)
        throw std::invalid_argument("initial_continuity: horizon must span at least four grid steps");

    auto mean_psi = [&](int node) {
        double acc = 0.0;
        for (int j = 0; j < rho.size(); ++j)
            acc += rho.weight(j) * psi.value(l2_norm_sq(rho.atom(j).state(node)));
        return acc;
    };

    InitialContinuityReport rep;
    rep.equation = "initial_continuity[" + psi.name() + "]";
    rep.t0 = t0;
    rep.tol = tol;
    const double base = mean_psi(i0);
    for (int k = offset; k >= 1; k /= 2) {
        rep.times.push_back(grid.node(i0 + k));
        rep.gaps.push_back(std::abs(mean_psi(i0 + k) - base));
    }
    std::vector<double> spans(rep.times.size());
    for (std::size_t i = 0; i < spans.size(); ++i) spans[i] = rep.times[i] - t0;
    const auto [slope, limit] = fit_line(spans, rep.gaps);
    rep.slope = slope;
    rep.limit = limit;
    rep.passed = std::abs(limit) <= tol;
    return rep;
}

std::vector<InequalityReport> mean_energy_bound(const TrajectoryMeasure& rho, double nu,
                                                double lambda1, const ForcingSignal& f,
                                                double tol) {
    check_positive(nu, "mean_energy_bound: nu");
    check_positive(lambda1, "mean_energy_bound: lambda1");
    const auto& grid = rho.grid();

    auto mean_e = [&](int node) {
        double acc = 0.0;
        for (int j = 0; j < rho.size(); ++j)
            acc += rho.weight(j) * l2_norm_sq(rho.atom(j).state(node));
        return acc;
    };

    const double e0 = mean_e(0);
    std::vector<InequalityReport> rows;
    rows.reserve(grid.node_count());
    for (int i = 0; i < grid.node_count(); ++i) {
        const double span = grid.node(i) - grid.t0();
        const double sup_f = f.ess_sup_norm(grid.t0(), grid.node(i));
        const double rhs = e0 + sup_f * sup_f * span / (nu * lambda1);
        rows.push_back(
            make_report("mean_energy_bound", grid.t0(), grid.node(i), mean_e(i), rhs, tol));
    }
    return rows;
}

CarrierReport carrier_check(const TrajectoryMeasure& rho, const std::vector<double>& times,
                            double tol) {
    CarrierReport rep;
    rep.times = times;
    rep.passed = true;
    for (int j = 0; j < rho.size(); ++j) {
        rep.atoms.push_back(strong_continuity_diagnostic(rho.atom(j), times, tol));
        rep.passed = rep.passed && rep.atoms.back().consistent;
        if (rho.atom(j).meta().solver_id.rfind("tampered:", 0) == 0) rep.tampered = true;
    }
    rep.weighted_psi.assign(times.size(), 0.0);
    for (std::size_t k = 0; k < times.size(); ++k)
        for (int j = 0; j < rho.size(); ++j)
            rep.weighted_psi[k] += rho.weight(j) * rep.atoms[j].psi[k];
    std::vector<double> spans(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) spans[k] = times[k] - rho.grid().t0();
    rep.weighted_limit = fit_line(spans, rep.weighted_psi).second;
    return rep;
}

Trajectory inject_jump(const Trajectory& traj, double jump) {
    check_positive(jump, "inject_jump: jump");
    std::vector<VelocityField> states;
    states.reserve(traj.node_count());
    states.push_back(traj.state(0));
    for (int i = 1; i < traj.node_count(); ++i) {
        VelocityField u = traj.state(i);
        const double e = l2_norm_sq(u);
        if (!(e > 0.0))
            throw std::invalid_argument("inject_jump: zero state cannot carry a scaled jump");
        u.scale(std::sqrt((e + jump) / e));
        states.push_back(std::move(u));
    }
    TrajectoryMeta meta = traj.meta();
    meta.solver_id = "tampered:jump(" + meta.solver_id + ")";
    return Trajectory(traj.grid(), std::move(states), meta);
}

LocalizationReport localization_check(const TrajectoryMeasure& rho, double R,
                                      const std::vector<double>& time_samples) {
    check_positive(R, "localization_check: R");
    if (time_samples.empty())
        throw std::invalid_argument("localization_check: no time samples");
    const double bound = R * (1.0 + 1e-9);
    LocalizationReport rep;
    rep.radius = R;
    rep.passed = true;
    rep.full_sweep_passed = true;

    for (double t : time_samples)
        for (int j = 0; j < rho.size(); ++j)
            if (l2_norm(sample_at(rho.atom(j), t)) > bound) rep.passed = false;

    const auto& grid = rho.grid();
    for (int i = 0; i < grid.node_count() && rep.full_sweep_passed; ++i)
        for (int j = 0; j < rho.size(); ++j) {
            const double norm = l2_norm(rho.atom(j).state(i));
            if (norm > bound) {
                rep.full_sweep_passed = false;
                rep.atom = j;
                rep.time = grid.node(i);
                rep.norm = norm;
                break;
            }
        }
    return rep;
}

ConvexApproxTable convex_approx_diagnostic(const std::vector<TrajectoryMeasure>& sequence,
                                           const TrajectoryMeasure& target,
                                           const std::vector<CylindricalTestFunction>& family,
                                           const Interval& window) {
    if (family.empty()) throw std::invalid_argument("convex_approx_diagnostic: empty test family");
    window.validate();
    const auto& grid = target.grid();
    const auto [i0, i1] = endpoints(grid, window.t0, window.t1, "convex_approx_diagnostic");
    for (std::size_t n = 0; n < sequence.size(); ++n) {
        if (!(sequence[n].grid() == grid)) {
            std::ostringstream msg;
            msg << "convex_approx_diagnostic: measure " << n << " is on a different grid";
            throw std::invalid_argument(msg.str());
        }
        if (!sequence[n].lattice()->compatible(*target.lattice()))
            throw std::invalid_argument("convex_approx_diagnostic: mixed lattices");
    }

    ConvexApproxTable table;
    for (int i = i0; i <= i1; ++i) table.nodes.push_back(grid.node(i));

    const int nphi = static_cast<int>(family.size());
    std::vector<std::vector<double>> target_vals(nphi, std::vector<double>(i1 - i0 + 1));
    for (int p = 0; p < nphi; ++p)
        for (int i = i0; i <= i1; ++i) target_vals[p][i - i0] = mean_phi(target, family[p], i);

    for (const TrajectoryMeasure& rho : sequence) {
        std::vector<double> row(nphi, 0.0);
        for (int p = 0; p < nphi; ++p)
            for (int i = i0; i <= i1; ++i)
                row[p] = std::max(row[p],
                                  std::abs(mean_phi(rho, family[p], i) - target_vals[p][i - i0]));
        double worst = 0.0;
        for (double g : row) worst = std::max(worst, g);
        table.gaps.push_back(std::move(row));
        table.sup_gap.push_back(worst);
    }
    return table;
}

bool StatReport::all_passed() const {
    for (const auto& row : rows)
        if (!row.passed) return false;
    return true;
}

}  // namespace nsstat
