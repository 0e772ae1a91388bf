#pragma once

#include <cstdint>
#include <random>

#include "nsstat/measure.hpp"
#include "nsstat/spectral.hpp"

namespace nsstat {

/// Deterministic standard-normal stream: mt19937_64 feeding an explicit
/// Box-Muller transform. The draw sequence is part of the artifact contract
/// (std::normal_distribution is implementation-defined), so a sample can be
/// reproduced from the seed alone: each transform consumes two 53-bit
/// uniforms and yields the cosine branch first, then the cached sine branch.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

    double next();

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Truncated-Gaussian ensemble: per stored mode pair {k, -k} the two
/// divergence-free polarizations receive independent complex Gaussian
/// coefficients, scaled so the pair's expected energy contribution equals
/// variance_scale * lambda(k)^{-spectral_exponent}. Draws whose L2 norm
/// exceeds radius_clamp are rescaled onto the boundary sphere.
struct SamplerSpec {
    std::uint64_t seed = 0;
    int atom_count = 0;
    double spectral_exponent = 2.0;
    double variance_scale = 1.0;
    double radius_clamp = 0.0;  ///< 0 disables the clamp

    void validate() const;
};

/// Per-mode variance profile v_i = variance_scale * lambda_i^{-s}.
double mode_variance(const WaveLattice& lattice, int i, const SamplerSpec& spec);

/// Expected energy E|u|^2 of one unclamped draw, the sum of the variance
/// profile over the lattice.
double sampler_mean_energy(const WaveLattice& lattice, const SamplerSpec& spec);

/// Standard deviation of |u|^2 across unclamped draws, sqrt(sum v_i^2 / 2);
/// Monte Carlo means are checked against 3 sigma / sqrt(N) with this sigma.
double sampler_energy_sigma(const WaveLattice& lattice, const SamplerSpec& spec);

/// One draw: four normals per mode, ordered (re, im) for polarization 0 then
/// polarization 1, modes in lattice order; the clamp is applied last.
VelocityField sample_field(const LatticePtr& lattice, GaussianStream& stream,
                           const SamplerSpec& spec);

/// Equal-weight ensemble of atom_count consecutive draws from a single
/// stream seeded with spec.seed.
PhaseMeasure sample_gaussian_measure(const LatticePtr& lattice, const SamplerSpec& spec);

}  // namespace nsstat
