#include "nsstat/checks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsstat {

namespace {

/// Composite trapezoid of g over the node index range [is, it].
double trapezoid(const std::vector<double>& g, int is, int it, double dt) {
    double s = 0.5 * (g[is] + g[it]);
    for (int i = is + 1; i < it; ++i) s += g[i];
    return s * dt;
}

std::pair<int, int> endpoints(const TimeGrid& grid, double t_prime, double t,
                              const char* where) {
    const int is = grid.index_at(t_prime);
    const int it = grid.index_at(t);
    if (is >= it)
        throw std::invalid_argument(std::string(where) + ": t_prime must precede t on the grid");
    return {is, it};
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

}  // namespace

EnergySeries make_energy_series(const Trajectory& traj, const ForcingSignal& f) {
    const int n = traj.node_count();
    EnergySeries s{traj.grid(), std::vector<double>(n), std::vector<double>(n),
                   std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        s.energy[i] = l2_norm_sq(traj.state(i));
        s.enstrophy[i] = h1_norm_sq(traj.state(i));
        s.work[i] = l2_inner(f.at(traj.grid().node(i)), traj.state(i));
    }
    return s;
}

InequalityReport energy_inequality(const EnergySeries& series, double t_prime, double t,
                                   double nu, double tol) {
    check_positive(nu, "energy_inequality: nu");
    const auto [is, it] = endpoints(series.grid, t_prime, t, "energy_inequality");
    const double dt = series.grid.dt();
    const double lhs = 0.5 * series.energy[it] + nu * trapezoid(series.enstrophy, is, it, dt);
    const double rhs = 0.5 * series.energy[is] + trapezoid(series.work, is, it, dt);
    return make_report("energy", t_prime, t, lhs, rhs, tol);
}

InequalityReport energy_inequality(const Trajectory& traj, double t_prime, double t, double nu,
                                   const ForcingSignal& f, double tol) {
    return energy_inequality(make_energy_series(traj, f), t_prime, t, nu, tol);
}

InequalityReport strengthened_energy_inequality(const EnergySeries& series,
                                                const PsiFunction& psi, double t_prime, double t,
                                                double nu, double tol) {
    check_positive(nu, "strengthened_energy_inequality: nu");
    const auto [is, it] = endpoints(series.grid, t_prime, t, "strengthened_energy_inequality");
    const double dt = series.grid.dt();
    const int n = it - is + 1;
    std::vector<double> dissip(n), work(n);
    for (int i = 0; i < n; ++i) {
        const double w = psi.derivative(series.energy[is + i]);
        dissip[i] = w * series.enstrophy[is + i];
        work[i] = w * series.work[is + i];
    }
    const double lhs = 0.5 * psi.value(series.energy[it]) + nu * trapezoid(dissip, 0, n - 1, dt);
    const double rhs = 0.5 * psi.value(series.energy[is]) + trapezoid(work, 0, n - 1, dt);
    return make_report("strengthened_energy[" + psi.name() + "]", t_prime, t, lhs, rhs, tol);
}

InequalityReport strengthened_energy_inequality(const Trajectory& traj, const PsiFunction& psi,
                                                double t_prime, double t, double nu,
                                                const ForcingSignal& f, double tol) {
    return strengthened_energy_inequality(make_energy_series(traj, f), psi, t_prime, t, nu, tol);
}

InequalityReport apriori_bound(const EnergySeries& series, const ForcingSignal& f,
                               double t_prime, double t, double nu, double lambda1, double tol) {
    check_positive(nu, "apriori_bound: nu");
    check_positive(lambda1, "apriori_bound: lambda1");
    const auto [is, it] = endpoints(series.grid, t_prime, t, "apriori_bound");
    const double dt = series.grid.dt();
    const double sup_f = f.ess_sup_norm(series.grid.node(is), series.grid.node(it));
    const double lhs = series.energy[it] + nu * trapezoid(series.enstrophy, is, it, dt);
    const double rhs =
        series.energy[is] + sup_f * sup_f * (series.grid.node(it) - series.grid.node(is)) /
                                (nu * lambda1);
    return make_report("apriori", t_prime, t, lhs, rhs, tol);
}

InequalityReport apriori_bound(const Trajectory& traj, const ForcingSignal& f, double t_prime,
                               double t, double nu, double lambda1, double tol) {
    return apriori_bound(make_energy_series(traj, f), f, t_prime, t, nu, lambda1, tol);
}

InequalityReport decay_envelope(const EnergySeries& series, const ForcingSignal& f,
                                double t_prime, double t, double nu, double lambda1, double tol) {
    check_positive(nu, "decay_envelope: nu");
    check_positive(lambda1, "decay_envelope: lambda1");
    const auto [is, it] = endpoints(series.grid, t_prime, t, "decay_envelope");
    const double span = series.grid.node(it) - series.grid.node(is);
    const double sup_f = f.ess_sup_norm(series.grid.node(is), series.grid.node(it));
    const double damp = std::exp(-nu * lambda1 * span);
    const double lhs = series.energy[it];
    const double rhs = series.energy[is] * damp +
                       sup_f * sup_f / (nu * nu * lambda1 * lambda1) * (1.0 - damp);
    return make_report("decay_envelope", t_prime, t, lhs, rhs, tol);
}

InequalityReport decay_envelope(const Trajectory& traj, const ForcingSignal& f, double t_prime,
                                double t, double nu, double lambda1, double tol) {
    return decay_envelope(make_energy_series(traj, f), f, t_prime, t, nu, lambda1, tol);
}

double compute_R0(const ForcingSignal& f, double nu, double lambda1) {
    check_positive(nu, "compute_R0: nu");
    check_positive(lambda1, "compute_R0: lambda1");
    return f.ess_sup_norm() / (nu * lambda1);
}

BallReport ball_invariance(const Trajectory& traj, const ForcingSignal& f, double nu, double R,
                           double tol) {
    check_positive(R, "ball_invariance: R");
    if (tol < 0.0) throw std::invalid_argument("ball_invariance: tol must be nonnegative");
    const double r0 = compute_R0(f, nu, traj.lattice()->lambda_min());
    if (R < r0)
        throw std::invalid_argument(
            "ball_invariance: R below the absorbing radius; the property is only asserted for "
            "R >= R0");

    BallReport report;
    report.radius = R;
    report.tol = tol;
    const double limit = R * (1.0 + tol);
    if (l2_norm(traj.state(0)) > limit)
        throw std::invalid_argument("ball_invariance: initial state outside the ball");

    report.passed = true;
    for (int i = 0; i < traj.node_count(); ++i) {
        const double norm = l2_norm(traj.state(i));
        if (norm > report.worst_norm) {
            report.worst_norm = norm;
            report.worst_time = traj.grid().node(i);
        }
        if (report.passed && norm > limit) {
            report.passed = false;
            report.first_violation_node = i;
            report.first_violation_time = traj.grid().node(i);
            report.first_violation_norm = norm;
        }
    }
    return report;
}

double psi_functional(const EnergySeries& series, double t) {
    const int it = series.grid.index_at(t);
    if (it == 0)
        throw std::invalid_argument("psi_functional: t must lie strictly after the initial time");
    std::vector<double> excess(it + 1);
    for (int i = 0; i <= it; ++i) excess[i] = series.energy[i] - series.energy[0];
    const double span = series.grid.node(it) - series.grid.t0();
    return trapezoid(excess, 0, it, series.grid.dt()) / span;
}

double psi_functional(const Trajectory& traj, double t) {
    const int it = traj.grid().index_at(t);
    if (it == 0)
        throw std::invalid_argument("psi_functional: t must lie strictly after the initial time");
    std::vector<double> excess(it + 1);
    const double e0 = l2_norm_sq(traj.state(0));
    for (int i = 0; i <= it; ++i) excess[i] = l2_norm_sq(traj.state(i)) - e0;
    const double span = traj.grid().node(it) - traj.grid().t0();
    return trapezoid(excess, 0, it, traj.grid().dt()) / span;
}

StrongContinuityReport strong_continuity_diagnostic(const Trajectory& traj,
                                                    const std::vector<double>& times,
                                                    double tol) {
    if (times.size() < 3)
        throw std::invalid_argument("strong_continuity_diagnostic: need at least three samples");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] < times[i - 1]))
            throw std::invalid_argument(
                "strong_continuity_diagnostic: sample times must decrease strictly");

    StrongContinuityReport report;
    report.times = times;
    report.tol = tol;
    report.psi.reserve(times.size());
    for (double t : times) report.psi.push_back(psi_functional(traj, t));
    report.min_psi = *std::min_element(report.psi.begin(), report.psi.end());

    // Least-squares line of Psi against the elapsed time; the intercept
    // estimates the one-sided limit at t0.
    const double n = static_cast<double>(times.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < times.size(); ++i) {
        const double x = times[i] - traj.t0();
        sx += x;
        sy += report.psi[i];
        sxx += x * x;
        sxy += x * report.psi[i];
    }
    report.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    report.limit = (sy - report.slope * sx) / n;
    report.consistent = report.min_psi >= -tol && std::abs(report.limit) <= tol;
    return report;
}

double richardson_constant(double defect1, double dt1, double defect2, double dt2) {
    check_positive(dt1, "richardson_constant: dt1");
    check_positive(dt2, "richardson_constant: dt2");
    return std::max(std::abs(defect1) / (dt1 * dt1), std::abs(defect2) / (dt2 * dt2));
}

}  // namespace nsstat
