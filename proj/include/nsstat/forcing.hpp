#pragma once

#include <vector>

#include "nsstat/spectral.hpp"
#include "nsstat/time_grid.hpp"

namespace nsstat {

/// One piecewise-constant stretch of the forcing: field active on [t0, t1).
struct ForcingSegment {
    double t0 = 0.0;
    double t1 = 0.0;
    VelocityField field;
};

/// Piecewise-constant-in-time body force. Segments tile the working interval
/// without gaps or overlap; evaluation is right-continuous at the seams and
/// the final segment also covers its right endpoint.
class ForcingSignal {
public:
    /// Identically zero forcing on the given lattice.
    static ForcingSignal zero(LatticePtr lattice);

    /// Single segment covering all representable times.
    static ForcingSignal steady(VelocityField field);

    const VelocityField& at(double t) const;

    /// Essential supremum of |f(t)| over the whole signal.
    double ess_sup_norm() const { return ess_sup_; }

    /// Essential supremum of |f| over segments overlapping [s, t].
    double ess_sup_norm(double s, double t) const;

    const std::vector<ForcingSegment>& segments() const { return segments_; }
    const LatticePtr& lattice() const { return lattice_; }
    bool is_zero() const { return segments_.empty(); }

    friend ForcingSignal make_forcing(std::vector<ForcingSegment> segments,
                                      const Interval& interval);

private:
    LatticePtr lattice_;
    std::vector<ForcingSegment> segments_;  // sorted by t0
    std::vector<double> norms_;             // |field| per segment
    VelocityField zero_field_;
    double ess_sup_ = 0.0;
};

/// Validates tiling and divergence-freedom, caches segment norms.
ForcingSignal make_forcing(std::vector<ForcingSegment> segments, const Interval& interval);

}  // namespace nsstat
