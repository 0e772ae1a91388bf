#include "nsstat/integrate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsstat {

namespace {

/// u <- diag(factors) u, the per-mode viscous semigroup.
void apply_factors(VelocityField& u, const std::vector<double>& factors) {
    for (int i = 0; i < u.mode_count(); ++i)
        for (auto& e : u.mode(i)) e *= factors[i];
}

}  // namespace

Trajectory integrate(const VelocityField& u0, const Interval& interval, double dt, double nu,
                     const ForcingSignal& f, const IntegrateOptions& opts) {
    interval.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (!(nu > 0.0)) throw std::invalid_argument("integrate: viscosity must be positive");
    const double len = interval.length();
    const long long n = std::llround(len / dt);
    if (n < 1 || std::abs(n * dt - len) > 1e-9 * dt)
        throw std::invalid_argument("integrate: dt does not divide the interval length");
    if (!u0.lattice()) throw std::invalid_argument("integrate: initial state has no lattice");
    if (f.lattice() && !f.lattice()->compatible(*u0.lattice()))
        throw std::invalid_argument("integrate: forcing lattice mismatch");

    const TimeGrid grid(interval.t0, interval.t1, static_cast<int>(n));
    const double h = grid.dt();
    const auto& lat = *u0.lattice();

    std::vector<double> ef(lat.mode_count()), eh(lat.mode_count());
    for (int i = 0; i < lat.mode_count(); ++i) {
        ef[i] = std::exp(-nu * lat.eigenvalue(i) * h);
        eh[i] = std::exp(-nu * lat.eigenvalue(i) * 0.5 * h);
    }

    auto rhs = [&](const VelocityField& u, double t) {
        auto out = f.at(t);
        out.add_scaled(nonlinear_B(u, u, opts.method), -1.0);
        return out;
    };

    std::vector<VelocityField> states;
    states.reserve(grid.node_count());
    states.push_back(u0);

    VelocityField u = u0;
    for (int step = 0; step < grid.steps(); ++step) {
        const double t = grid.node(step);

        const auto k1 = rhs(u, t);

        auto u2 = u;
        u2.add_scaled(k1, 0.5 * h);
        apply_factors(u2, eh);
        const auto k2 = rhs(u2, t + 0.5 * h);

        auto u3 = u;
        apply_factors(u3, eh);
        u3.add_scaled(k2, 0.5 * h);
        const auto k3 = rhs(u3, t + 0.5 * h);

        auto u4 = u;
        apply_factors(u4, ef);
        auto k3h = k3;
        apply_factors(k3h, eh);
        u4.add_scaled(k3h, h);
        const auto k4 = rhs(u4, t + h);

        // u_{n+1} = E u + h/6 (E k1 + 2 E2 (k2 + k3) + k4)
        apply_factors(u, ef);
        auto k1e = k1;
        apply_factors(k1e, ef);
        u.add_scaled(k1e, h / 6.0);
        auto k23 = k2;
        k23.add_scaled(k3, 1.0);
        apply_factors(k23, eh);
        u.add_scaled(k23, h / 3.0);
        u.add_scaled(k4, h / 6.0);

        if (!u.finite()) {
            std::ostringstream os;
            os << "integrate: non-finite state at t=" << grid.node(step + 1)
               << " (step " << step + 1 << " of " << grid.steps() << ")";
            throw std::runtime_error(os.str());
        }
        states.push_back(u);
    }

    return Trajectory(grid, std::move(states), TrajectoryMeta{opts.solver_id, nu});
}

}  // namespace nsstat
