#include "nsstat/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsstat {

ForcingSignal ForcingSignal::zero(LatticePtr lattice) {
    ForcingSignal s;
    s.lattice_ = lattice;
    s.zero_field_ = VelocityField::zero(std::move(lattice));
    return s;
}

ForcingSignal ForcingSignal::steady(VelocityField field) {
    ForcingSegment seg{-1e300, 1e300, std::move(field)};
    return make_forcing({std::move(seg)}, Interval{-1e300, 1e300});
}

const VelocityField& ForcingSignal::at(double t) const {
    if (segments_.empty()) return zero_field_;
    // Right-continuous: the active segment is the last one starting at or
    // before t; the final segment also owns its right endpoint.
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double x, const ForcingSegment& s) { return x < s.t0; });
    if (it == segments_.begin()) throw std::invalid_argument("ForcingSignal: time before coverage");
    --it;
    const double span = segments_.back().t1 - segments_.front().t0;
    if (t > it->t1 + 1e-12 * span)
        throw std::invalid_argument("ForcingSignal: time beyond coverage");
    return it->field;
}

double ForcingSignal::ess_sup_norm(double s, double t) const {
    double worst = 0.0;
    for (size_t i = 0; i < segments_.size(); ++i)
        if (segments_[i].t0 < t && segments_[i].t1 > s) worst = std::max(worst, norms_[i]);
    return worst;
}

ForcingSignal make_forcing(std::vector<ForcingSegment> segments, const Interval& interval) {
    interval.validate();
    if (segments.empty())
        throw std::invalid_argument("make_forcing: no segments; use ForcingSignal::zero");

    std::sort(segments.begin(), segments.end(),
              [](const ForcingSegment& a, const ForcingSegment& b) { return a.t0 < b.t0; });

    const double span = interval.length();
    const double tol = 1e-12 * std::max(span, 1.0);
    if (segments.front().t0 > interval.t0 + tol || segments.back().t1 < interval.t1 - tol)
        throw std::invalid_argument("make_forcing: segments do not cover the interval");
    for (size_t i = 0; i < segments.size(); ++i) {
        const auto& seg = segments[i];
        if (!(seg.t0 < seg.t1)) throw std::invalid_argument("make_forcing: empty segment");
        if (i > 0) {
            const double gap = seg.t0 - segments[i - 1].t1;
            if (gap > tol) throw std::invalid_argument("make_forcing: gap between segments");
            if (gap < -tol) throw std::invalid_argument("make_forcing: overlapping segments");
        }
        if (!seg.field.lattice() ||
            !seg.field.lattice()->compatible(*segments.front().field.lattice()))
            throw std::invalid_argument("make_forcing: segments on different lattices");
        if (divergence_linf(seg.field) > 1e-13 * std::max(coeff_linf(seg.field), 1e-300))
            throw std::invalid_argument("make_forcing: segment field is not divergence-free");
    }

    ForcingSignal out;
    out.lattice_ = segments.front().field.lattice();
    out.zero_field_ = VelocityField::zero(out.lattice_);
    out.norms_.reserve(segments.size());
    for (const auto& seg : segments) {
        out.norms_.push_back(l2_norm(seg.field));
        out.ess_sup_ = std::max(out.ess_sup_, out.norms_.back());
    }
    out.segments_ = std::move(segments);
    return out;
}

}  // namespace nsstat
