#include "nsstat/trajectory.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsstat {

TimeGrid::TimeGrid(double t0, double t1, int n_steps) : t0_(t0), t1_(t1), steps_(n_steps) {
    if (!(t0 < t1)) throw std::invalid_argument("TimeGrid: t0 must precede t1");
    if (n_steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
    dt_ = (t1 - t0) / n_steps;
}

double TimeGrid::node(int i) const {
    if (i < 0 || i > steps_) throw std::invalid_argument("TimeGrid: node index out of range");
    return i == steps_ ? t1_ : t0_ + i * dt_;
}

int TimeGrid::index_at(double t) const {
    const long long i = std::llround((t - t0_) / dt_);
    if (i < 0 || i > steps_ || std::abs(t - node(static_cast<int>(i))) > 1e-9 * dt_) {
        std::ostringstream os;
        os << "TimeGrid: t=" << t << " is not a grid node (dt=" << dt_ << ")";
        throw std::invalid_argument(os.str());
    }
    return static_cast<int>(i);
}

Trajectory::Trajectory(TimeGrid grid, std::vector<VelocityField> states, TrajectoryMeta meta)
    : grid_(grid), states_(std::move(states)), meta_(std::move(meta)) {
    if (static_cast<int>(states_.size()) != grid_.node_count())
        throw std::invalid_argument("Trajectory: state count does not match grid");
    for (const auto& s : states_) {
        if (!s.lattice() || !s.lattice()->compatible(*states_.front().lattice()))
            throw std::invalid_argument("Trajectory: states on different lattices");
        if (!s.finite()) throw std::invalid_argument("Trajectory: non-finite state");
    }
}

Trajectory restrict_to(const Trajectory& traj, const Interval& j) {
    if (!(j.t0 < j.t1))
        throw std::invalid_argument("restrict_to: degenerate interval");
    const int i0 = traj.grid().index_at(j.t0);
    const int i1 = traj.grid().index_at(j.t1);
    std::vector<VelocityField> states(traj.states().begin() + i0,
                                      traj.states().begin() + i1 + 1);
    return Trajectory(TimeGrid(traj.grid().node(i0), traj.grid().node(i1), i1 - i0),
                      std::move(states), traj.meta());
}

const VelocityField& sample_at(const Trajectory& traj, double t) {
    return traj.state(traj.grid().index_at(t));
}

Trajectory paste(const Trajectory& a, const Trajectory& b) {
    const double rel_dt = std::abs(a.grid().dt() - b.grid().dt());
    if (rel_dt > 1e-12 * a.grid().dt())
        throw std::invalid_argument("paste: step size mismatch");
    if (std::abs(a.t1() - b.t0()) > 1e-9 * a.grid().dt())
        throw std::invalid_argument("paste: trajectories do not meet at a shared node");

    const auto& left = a.state(a.node_count() - 1);
    const auto& right = b.state(0);
    auto diff = left;
    diff.add_scaled(right, -1.0);
    const double scale = std::max({l2_norm(left), l2_norm(right), 1e-300});
    if (l2_norm(diff) > 1e-10 * scale)
        throw std::invalid_argument("paste: junction states disagree beyond tolerance");

    std::vector<VelocityField> states(a.states().begin(), a.states().end() - 1);
    states.insert(states.end(), b.states().begin(), b.states().end());
    TrajectoryMeta meta = a.meta();
    return Trajectory(TimeGrid(a.t0(), b.t1(), a.grid().steps() + b.grid().steps()),
                      std::move(states), std::move(meta));
}

double equation_residual(const Trajectory& traj, const TestField& v, double s, double t,
                         double nu, const ForcingSignal& f) {
    const int is = traj.grid().index_at(s);
    const int it = traj.grid().index_at(t);
    if (is >= it) throw std::invalid_argument("equation_residual: need s < t");

    const double h = traj.grid().dt();
    double integral = 0.0;
    double prev = 0.0;
    for (int i = is; i <= it; ++i) {
        const auto& u = traj.state(i);
        const double g = l2_inner(f.at(traj.grid().node(i)), v) - nu * v_inner(u, v) -
                         trilinear_b(u, u, v);
        if (i > is) integral += 0.5 * h * (prev + g);
        prev = g;
    }
    return std::abs(l2_inner(traj.state(it), v) - l2_inner(traj.state(is), v) - integral);
}

}  // namespace nsstat
