#pragma once

#include <utility>
#include <vector>

#include "nsstat/cylinder.hpp"
#include "nsstat/trajectory.hpp"

namespace nsstat {

/// Discrete Borel probability measure on the phase space: finitely many
/// velocity-field atoms with positive weights summing to one.
class PhaseMeasure {
public:
    int size() const { return static_cast<int>(atoms_.size()); }
    const VelocityField& atom(int j) const { return atoms_[j]; }
    double weight(int j) const { return weights_[j]; }
    const std::vector<VelocityField>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    const LatticePtr& lattice() const { return atoms_.front().lattice(); }

    friend PhaseMeasure make_phase_measure(std::vector<VelocityField> atoms,
                                           std::vector<double> weights);
    friend class TrajectoryMeasure;
    friend PhaseMeasure galerkin_pushforward(const PhaseMeasure& mu, int m);
    friend std::vector<std::pair<double, PhaseMeasure>> annuli_split(
        const PhaseMeasure& mu, const struct RadiiLadder& ladder);

private:
    PhaseMeasure(std::vector<VelocityField> atoms, std::vector<double> weights)
        : atoms_(std::move(atoms)), weights_(std::move(weights)) {}

    std::vector<VelocityField> atoms_;
    std::vector<double> weights_;
};

/// Weighted ensemble of trajectories on one shared grid; the atom weights
/// follow the same probability rules as PhaseMeasure.
class TrajectoryMeasure {
public:
    int size() const { return static_cast<int>(atoms_.size()); }
    const Trajectory& atom(int j) const { return atoms_[j]; }
    double weight(int j) const { return weights_[j]; }
    const std::vector<Trajectory>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    const TimeGrid& grid() const { return atoms_.front().grid(); }
    const LatticePtr& lattice() const { return atoms_.front().lattice(); }

    /// Phase measure at a grid time: states sampled per atom, weights kept
    /// verbatim, so the projection at t0 reproduces the initial measure bit
    /// for bit.
    PhaseMeasure project_at(double t) const;

    friend TrajectoryMeasure make_trajectory_measure(std::vector<Trajectory> atoms,
                                                     std::vector<double> weights);
    friend TrajectoryMeasure construct_vf_measure(const PhaseMeasure& mu0,
                                                  const struct VFBuildConfig& cfg);

private:
    TrajectoryMeasure(std::vector<Trajectory> atoms, std::vector<double> weights)
        : atoms_(std::move(atoms)), weights_(std::move(weights)) {}

    std::vector<Trajectory> atoms_;
    std::vector<double> weights_;
};

/// Validates positivity and the unit weight sum (renormalizing a sum within
/// 1e-9 of one) and a common lattice across atoms.
PhaseMeasure make_phase_measure(std::vector<VelocityField> atoms, std::vector<double> weights);

/// Same weight rules; additionally requires a common time grid.
TrajectoryMeasure make_trajectory_measure(std::vector<Trajectory> atoms,
                                          std::vector<double> weights);

PhaseMeasure project_at(const TrajectoryMeasure& rho, double t);

/// Expectation of a functional, accumulated in stored atom order.
template <class F>
double expect(const PhaseMeasure& mu, F&& functional) {
    double acc = 0.0;
    for (int j = 0; j < mu.size(); ++j) acc += mu.weight(j) * functional(mu.atom(j));
    return acc;
}

double mean_energy(const PhaseMeasure& mu);
double mean_enstrophy(const PhaseMeasure& mu);

/// Pushforward under the Galerkin projector onto the first m modes; weights
/// are untouched.
PhaseMeasure galerkin_pushforward(const PhaseMeasure& mu, int m);

/// Largest expectation gap over a finite family of cylindrical test
/// functions.
double weak_star_gap(const PhaseMeasure& mu, const PhaseMeasure& nu,
                     const std::vector<CylindricalTestFunction>& family);

/// Strictly increasing positive radii bounding nested balls B(R_1) subset
/// B(R_2) subset ...; the k-th annulus is B(R_k) minus B(R_{k-1}).
struct RadiiLadder {
    std::vector<double> radii;
    void validate() const;
};

/// Decomposes mu over the ladder's annuli by atom L2 norm. Returns the
/// nonempty parts in ladder order as (mass, normalized measure); masses sum
/// to one. An atom above the top radius is a contract violation.
std::vector<std::pair<double, PhaseMeasure>> annuli_split(const PhaseMeasure& mu,
                                                          const RadiiLadder& ladder);

}  // namespace nsstat
