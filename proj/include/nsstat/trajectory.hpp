#pragma once

#include <string>
#include <vector>

#include "nsstat/forcing.hpp"
#include "nsstat/spectral.hpp"
#include "nsstat/time_grid.hpp"

namespace nsstat {

struct TrajectoryMeta {
    std::string solver_id = "ifrk4";
    double nu = 0.0;
};

/// Velocity states on a uniform time grid; immutable after construction.
class Trajectory {
public:
    Trajectory(TimeGrid grid, std::vector<VelocityField> states, TrajectoryMeta meta);

    const TimeGrid& grid() const { return grid_; }
    const TrajectoryMeta& meta() const { return meta_; }
    const VelocityField& state(int i) const { return states_[i]; }
    const std::vector<VelocityField>& states() const { return states_; }
    int node_count() const { return static_cast<int>(states_.size()); }
    const LatticePtr& lattice() const { return states_.front().lattice(); }
    double t0() const { return grid_.t0(); }
    double t1() const { return grid_.t1(); }

private:
    TimeGrid grid_;
    std::vector<VelocityField> states_;
    TrajectoryMeta meta_;
};

/// Restriction to a sub-interval whose endpoints sit on grid nodes; a
/// degenerate target interval is a contract violation.
Trajectory restrict_to(const Trajectory& traj, const Interval& j);

/// State at the node within 1e-9*dt of t; no interpolation, off-node throws.
const VelocityField& sample_at(const Trajectory& traj, double t);

/// Concatenation of two trajectories meeting at a shared node. The junction
/// states must agree within 1e-10 relative and the steps must match; the
/// merged trajectory keeps the second trajectory's junction state.
Trajectory paste(const Trajectory& a, const Trajectory& b);

/// Defect of the weak-form balance of momentum against the test field v over
/// [s, t]: |(u(t),v) - (u(s),v) - integral of (f,v) - nu ((u,v)) - b(u,u,v)|,
/// with composite trapezoid quadrature on the grid nodes.
double equation_residual(const Trajectory& traj, const TestField& v, double s, double t,
                         double nu, const ForcingSignal& f);

}  // namespace nsstat
