#include "nsstat/measure.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsstat {

namespace {

/// Checks positivity and the unit sum, renormalizing a sum within 1e-9 of
/// one in place. The post-state satisfies the 1e-12 probability invariant.
void normalize_weights(std::vector<double>& weights, std::size_t n_atoms) {
    if (weights.empty()) throw std::invalid_argument("measure: no atoms");
    if (weights.size() != n_atoms)
        throw std::invalid_argument("measure: atom and weight counts differ");
    double sum = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (!(weights[j] > 0.0)) {
            std::ostringstream msg;
            msg << "measure: weight " << j << " is " << weights[j] << ", must be positive";
            throw std::invalid_argument(msg.str());
        }
        sum += weights[j];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "measure: weights sum to " << sum << ", too far from 1 to renormalize";
        throw std::invalid_argument(msg.str());
    }
    for (double& w : weights) w /= sum;
}

}  // namespace

PhaseMeasure make_phase_measure(std::vector<VelocityField> atoms, std::vector<double> weights) {
    normalize_weights(weights, atoms.size());
    for (std::size_t j = 1; j < atoms.size(); ++j)
        if (!atoms[j].lattice()->compatible(*atoms[0].lattice()))
            throw std::invalid_argument("make_phase_measure: atoms on mixed lattices");
    return PhaseMeasure(std::move(atoms), std::move(weights));
}

TrajectoryMeasure make_trajectory_measure(std::vector<Trajectory> atoms,
                                          std::vector<double> weights) {
    normalize_weights(weights, atoms.size());
    for (std::size_t j = 1; j < atoms.size(); ++j) {
        if (!(atoms[j].grid() == atoms[0].grid()))
            throw std::invalid_argument("make_trajectory_measure: atoms on mixed time grids");
        if (!atoms[j].lattice()->compatible(*atoms[0].lattice()))
            throw std::invalid_argument("make_trajectory_measure: atoms on mixed lattices");
    }
    return TrajectoryMeasure(std::move(atoms), std::move(weights));
}

PhaseMeasure TrajectoryMeasure::project_at(double t) const {
    std::vector<VelocityField> states;
    states.reserve(atoms_.size());
    for (const Trajectory& traj : atoms_) states.push_back(sample_at(traj, t));
    return PhaseMeasure(std::move(states), weights_);
}

PhaseMeasure project_at(const TrajectoryMeasure& rho, double t) { return rho.project_at(t); }

double mean_energy(const PhaseMeasure& mu) {
    return expect(mu, [](const VelocityField& u) { return l2_norm_sq(u); });
}

double mean_enstrophy(const PhaseMeasure& mu) {
    return expect(mu, [](const VelocityField& u) { return h1_norm_sq(u); });
}

PhaseMeasure galerkin_pushforward(const PhaseMeasure& mu, int m) {
    std::vector<VelocityField> projected;
    projected.reserve(mu.atoms_.size());
    for (const VelocityField& u : mu.atoms_) projected.push_back(galerkin_project(u, m));
    return PhaseMeasure(std::move(projected), mu.weights_);
}

double weak_star_gap(const PhaseMeasure& mu, const PhaseMeasure& nu,
                     const std::vector<CylindricalTestFunction>& family) {
    if (family.empty()) throw std::invalid_argument("weak_star_gap: empty test family");
    if (!mu.lattice()->compatible(*nu.lattice()))
        throw std::invalid_argument("weak_star_gap: measures on different lattices");
    double gap = 0.0;
    for (const CylindricalTestFunction& phi : family) {
        double a = expect(mu, [&phi](const VelocityField& u) { return cyl_eval(phi, u); });
        double b = expect(nu, [&phi](const VelocityField& u) { return cyl_eval(phi, u); });
        gap = std::max(gap, std::abs(a - b));
    }
    return gap;
}

void RadiiLadder::validate() const {
    if (radii.empty()) throw std::invalid_argument("RadiiLadder: no radii");
    double prev = 0.0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > prev)) {
            std::ostringstream msg;
            msg << "RadiiLadder: radius " << k << " = " << radii[k]
                << " does not increase past " << prev;
            throw std::invalid_argument(msg.str());
        }
        prev = radii[k];
    }
}

std::vector<std::pair<double, PhaseMeasure>> annuli_split(const PhaseMeasure& mu,
                                                          const RadiiLadder& ladder) {
    ladder.validate();
    const std::size_t bands = ladder.radii.size();
    std::vector<std::vector<int>> members(bands);
    for (int j = 0; j < mu.size(); ++j) {
        const double norm = l2_norm(mu.atom(j));
        std::size_t k = 0;
        while (k < bands && norm > ladder.radii[k]) ++k;
        if (k == bands) {
            std::ostringstream msg;
            msg << "annuli_split: atom " << j << " has norm " << norm
                << ", beyond the top radius " << ladder.radii.back();
            throw std::invalid_argument(msg.str());
        }
        members[k].push_back(j);
    }
    std::vector<std::pair<double, PhaseMeasure>> parts;
    for (std::size_t k = 0; k < bands; ++k) {
        if (members[k].empty()) continue;
        double mass = 0.0;
        for (int j : members[k]) mass += mu.weight(j);
        std::vector<VelocityField> atoms;
        std::vector<double> weights;
        atoms.reserve(members[k].size());
        weights.reserve(members[k].size());
        for (int j : members[k]) {
            atoms.push_back(mu.atom(j));
            weights.push_back(mu.weight(j) / mass);
        }
        parts.emplace_back(mass, PhaseMeasure(std::move(atoms), std::move(weights)));
    }
    return parts;
}

}  // namespace nsstat
