#pragma once

#include <string>
#include <vector>

#include "nsstat/forcing.hpp"
#include "nsstat/psi.hpp"
#include "nsstat/trajectory.hpp"

namespace nsstat {

/// Two sides of one inequality instance. defect = rhs - lhs, and the check
/// passes when the defect is no worse than -tol.
struct InequalityReport {
    std::string equation;
    double t_prime = 0.0;
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double defect = 0.0;
    double tol = 0.0;
    bool passed = false;
};

/// Per-node scalars of one trajectory: energy |u|^2, enstrophy ||u||^2, and
/// forcing work (f, u). Built once, then every inequality sweep below runs on
/// plain arithmetic instead of re-walking coefficient vectors.
struct EnergySeries {
    TimeGrid grid;
    std::vector<double> energy;
    std::vector<double> enstrophy;
    std::vector<double> work;
};

EnergySeries make_energy_series(const Trajectory& traj, const ForcingSignal& f);

/// 1/2 |u(t)|^2 + nu int ||u||^2 <= 1/2 |u(t')|^2 + int (f,u), trapezoid
/// quadrature on the stored nodes.
InequalityReport energy_inequality(const EnergySeries& series, double t_prime, double t,
                                   double nu, double tol);
InequalityReport energy_inequality(const Trajectory& traj, double t_prime, double t, double nu,
                                   const ForcingSignal& f, double tol);

/// Same balance weighted through psi: 1/2 psi(|u(t)|^2) + nu int
/// psi'(|u|^2)||u||^2 against 1/2 psi(|u(t')|^2) + int psi'(|u|^2)(f,u).
/// With the linear psi this reproduces energy_inequality digit for digit.
InequalityReport strengthened_energy_inequality(const EnergySeries& series,
                                                const PsiFunction& psi, double t_prime, double t,
                                                double nu, double tol);
InequalityReport strengthened_energy_inequality(const Trajectory& traj, const PsiFunction& psi,
                                                double t_prime, double t, double nu,
                                                const ForcingSignal& f, double tol);

/// |u(t)|^2 + nu int ||u||^2 <= |u(t')|^2 + (t-t')/(nu lambda1) ess-sup|f|^2,
/// the Cauchy-Schwarz consequence of the energy balance.
InequalityReport apriori_bound(const EnergySeries& series, const ForcingSignal& f,
                               double t_prime, double t, double nu, double lambda1, double tol);
InequalityReport apriori_bound(const Trajectory& traj, const ForcingSignal& f, double t_prime,
                               double t, double nu, double lambda1, double tol);

/// |u(t)|^2 <= |u(t')|^2 e^{-nu lambda1 (t-t')} + ess-sup|f|^2 (1 - e^{-nu
/// lambda1 (t-t')}) / (nu lambda1)^2. A steady ground-shell fixed point at
/// radius R0 turns this into an identity; everything else passes strictly.
InequalityReport decay_envelope(const EnergySeries& series, const ForcingSignal& f,
                                double t_prime, double t, double nu, double lambda1, double tol);
InequalityReport decay_envelope(const Trajectory& traj, const ForcingSignal& f, double t_prime,
                                double t, double nu, double lambda1, double tol);

/// R0 = ess-sup |f| / (nu lambda1), the absorbing-ball radius.
double compute_R0(const ForcingSignal& f, double nu, double lambda1);

/// Outcome of a ball-invariance scan over all trajectory nodes.
struct BallReport {
    double radius = 0.0;
    double tol = 0.0;
    double worst_norm = 0.0;
    double worst_time = 0.0;
    bool passed = false;
    int first_violation_node = -1;
    double first_violation_time = 0.0;
    double first_violation_norm = 0.0;
};

/// Checks |u(t)| <= R (1 + tol) at every node. Requires R >= R0 for the
/// given forcing (the property is only asserted there) and an initial state
/// inside the ball; both are contract violations otherwise.
BallReport ball_invariance(const Trajectory& traj, const ForcingSignal& f, double nu, double R,
                           double tol);

/// Psi(u, t) = (t - t0)^{-1} int_{t0}^{t} (|u(s)|^2 - |u(t0)|^2) ds, the
/// time-averaged energy excess over the initial value; trapezoid quadrature.
double psi_functional(const EnergySeries& series, double t);
double psi_functional(const Trajectory& traj, double t);

struct StrongContinuityReport {
    std::vector<double> times;
    std::vector<double> psi;
    double min_psi = 0.0;
    double slope = 0.0;
    double limit = 0.0;  // linear-fit extrapolation of Psi to t -> t0+
    double tol = 0.0;
    bool consistent = false;
};

/// Samples Psi along a sequence of grid times decreasing toward t0 and fits a
/// line; the verdict is "consistent with strong continuity from the right"
/// when no sample dips below -tol and the extrapolated limit is within tol of
/// zero. At least three samples are required.
StrongContinuityReport strong_continuity_diagnostic(const Trajectory& traj,
                                                    const std::vector<double>& times, double tol);

/// Largest dt^2 constant implied by a pair of defects observed at two steps;
/// inequality tolerances are set to ten times this constant times dt^2.
double richardson_constant(double defect1, double dt1, double defect2, double dt2);

}  // namespace nsstat
