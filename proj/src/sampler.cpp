#include "nsstat/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsstat {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

double GaussianStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // 53-bit uniforms offset by half an ulp, so the open interval (0, 1)
    // is hit exactly and log() never sees zero.
    auto unit = [this] { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; };
    double radius = std::sqrt(-2.0 * std::log(unit()));
    double angle = kTwoPi * unit();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

void SamplerSpec::validate() const {
    if (atom_count < 1) {
        throw std::invalid_argument("sampler: atom_count must be at least 1, got " +
                                    std::to_string(atom_count));
    }
    if (!(variance_scale > 0.0)) {
        throw std::invalid_argument("sampler: variance_scale must be positive");
    }
    if (!(radius_clamp >= 0.0)) {
        throw std::invalid_argument("sampler: radius_clamp must be nonnegative");
    }
    if (!std::isfinite(spectral_exponent)) {
        throw std::invalid_argument("sampler: spectral_exponent must be finite");
    }
}

double mode_variance(const WaveLattice& lattice, int i, const SamplerSpec& spec) {
    return spec.variance_scale * std::pow(lattice.eigenvalue(i), -spec.spectral_exponent);
}

double sampler_mean_energy(const WaveLattice& lattice, const SamplerSpec& spec) {
    double sum = 0.0;
    for (int i = 0; i < lattice.mode_count(); ++i) sum += mode_variance(lattice, i, spec);
    return sum;
}

double sampler_energy_sigma(const WaveLattice& lattice, const SamplerSpec& spec) {
    double sum = 0.0;
    for (int i = 0; i < lattice.mode_count(); ++i) {
        double v = mode_variance(lattice, i, spec);
        sum += 0.5 * v * v;
    }
    return std::sqrt(sum);
}

VelocityField sample_field(const LatticePtr& lattice, GaussianStream& stream,
                           const SamplerSpec& spec) {
    spec.validate();
    const WaveLattice& lat = *lattice;
    std::vector<Vec3c> coeffs(lat.mode_count(), Vec3c{});
    double volume = lat.volume();
    for (int i = 0; i < lat.mode_count(); ++i) {
        // Energy of a stored pair is 2|Omega| |c|^2 and the four unit normals
        // carry expected square sum 4, so this amplitude makes the pair's
        // expected energy exactly the variance profile entry.
        double amp = std::sqrt(mode_variance(lat, i, spec) / (8.0 * volume));
        auto [e0, e1] = polarization_basis(lat.physical_wavevector(i));
        // Sequence the draws outside the Complex constructors; argument
        // evaluation order would otherwise be unspecified.
        double re0 = stream.next();
        double im0 = stream.next();
        double re1 = stream.next();
        double im1 = stream.next();
        Complex a0(amp * re0, amp * im0);
        Complex a1(amp * re1, amp * im1);
        for (int d = 0; d < 3; ++d) coeffs[i][d] = a0 * e0[d] + a1 * e1[d];
    }
    VelocityField u(lattice, std::move(coeffs));
    if (spec.radius_clamp > 0.0) {
        double norm = l2_norm(u);
        while (norm > spec.radius_clamp) {
            u.scale(spec.radius_clamp / norm);
            norm = l2_norm(u);
        }
    }
    return u;
}

PhaseMeasure sample_gaussian_measure(const LatticePtr& lattice, const SamplerSpec& spec) {
    spec.validate();
    GaussianStream stream(spec.seed);
    std::vector<VelocityField> atoms;
    atoms.reserve(spec.atom_count);
    for (int j = 0; j < spec.atom_count; ++j) atoms.push_back(sample_field(lattice, stream, spec));
    std::vector<double> weights(spec.atom_count, 1.0 / spec.atom_count);
    return make_phase_measure(std::move(atoms), std::move(weights));
}

}  // namespace nsstat
