#pragma once

#include <stdexcept>

namespace nsstat {

/// Closed time interval [t0, t1].
struct Interval {
    double t0 = 0.0;
    double t1 = 0.0;

    double length() const { return t1 - t0; }
    void validate() const {
        if (!(t0 < t1)) throw std::invalid_argument("Interval: t0 must precede t1");
    }
};

/// Uniform node set on [t0, t1] with n_steps steps (n_steps + 1 nodes).
/// All time queries snap to nodes; there is no interpolation anywhere.
class TimeGrid {
public:
    TimeGrid(double t0, double t1, int n_steps);

    double t0() const { return t0_; }
    double t1() const { return t1_; }
    int steps() const { return steps_; }
    int node_count() const { return steps_ + 1; }
    double dt() const { return dt_; }

    double node(int i) const;

    /// Index of the node within 1e-9*dt of t; throws on off-node queries.
    int index_at(double t) const;

    bool operator==(const TimeGrid& other) const {
        return t0_ == other.t0_ && t1_ == other.t1_ && steps_ == other.steps_;
    }

private:
    double t0_, t1_, dt_;
    int steps_;
};

}  // namespace nsstat
