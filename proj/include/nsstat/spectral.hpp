#pragma once

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace nsstat {

using Complex = std::complex<double>;

/// Complex Fourier coefficient of a 3-component vector field at one wavevector.
using Vec3c = std::array<Complex, 3>;

/// Periodic box geometry plus the physical parameters tied to it.
struct BoxParams {
    std::array<double, 3> lengths{};  ///< box periods L1, L2, L3
    double viscosity = 0.0;           ///< kinematic viscosity
    int cutoff = 0;                   ///< spectral cutoff K, max |k_i| per component

    /// Throws std::invalid_argument if any field is out of contract.
    void validate() const;
};

/// Truncated dual lattice of the periodic box: one representative per
/// conjugate pair {k, -k}, sorted by Stokes eigenvalue with lexicographic
/// tie-break, so that prefixes of the mode order define the Galerkin spaces.
class WaveLattice {
public:
    explicit WaveLattice(const BoxParams& params);

    int mode_count() const { return static_cast<int>(reps_.size()); }

    /// Integer wavevector of the i-th representative in mode order.
    const std::array<int, 3>& wavevector(int i) const { return reps_[i]; }

    /// Physical wavevector kappa(k) = 2*pi*(k1/L1, k2/L2, k3/L3).
    const std::array<double, 3>& physical_wavevector(int i) const { return kappas_[i]; }

    /// Stokes eigenvalue |kappa(k)|^2 of the i-th mode.
    double eigenvalue(int i) const { return eigs_[i]; }

    double lambda_min() const { return eigs_.front(); }
    double lambda_max() const { return eigs_.back(); }

    double volume() const { return volume_; }
    const std::array<double, 3>& lengths() const { return lengths_; }
    int cutoff() const { return cutoff_; }

    /// Index of the representative of {k, -k}, or -1 if k is off the lattice.
    int rep_index(const std::array<int, 3>& k) const;

    /// True if k itself (not its negation) is the stored representative.
    static bool is_representative(const std::array<int, 3>& k);

    /// Same geometry and cutoff; fields on compatible lattices interoperate.
    bool compatible(const WaveLattice& other) const;

    std::string describe() const;

private:
    std::array<double, 3> lengths_;
    int cutoff_;
    double volume_;
    std::vector<std::array<int, 3>> reps_;
    std::vector<std::array<double, 3>> kappas_;
    std::vector<double> eigs_;
    std::vector<int> rep_of_site_;  // dense (2K+1)^3 cube -> rep index
};

using LatticePtr = std::shared_ptr<const WaveLattice>;

/// Builds the sorted truncated lattice for the given box.
LatticePtr build_lattice(const BoxParams& params);

/// Real divergence-free velocity field stored as half-lattice coefficients.
/// Realness is structural: only one member of each conjugate pair is stored,
/// the other is implied. Divergence-freedom is preserved by every operation
/// and can be audited with divergence_linf().
class VelocityField {
public:
    VelocityField() = default;
    VelocityField(LatticePtr lattice, std::vector<Vec3c> coeffs);

    static VelocityField zero(LatticePtr lattice);

    const LatticePtr& lattice() const { return lattice_; }
    int mode_count() const { return static_cast<int>(coeffs_.size()); }

    Vec3c& mode(int i) { return coeffs_[i]; }
    const Vec3c& mode(int i) const { return coeffs_[i]; }

    const std::vector<Vec3c>& coeffs() const { return coeffs_; }
    std::vector<Vec3c>& coeffs() { return coeffs_; }

    /// In-place u += a*w (same lattice required).
    void add_scaled(const VelocityField& w, double a);
    void scale(double a);

    bool finite() const;

private:
    LatticePtr lattice_;
    std::vector<Vec3c> coeffs_;
};

/// Elements of the test space share the representation of velocity fields.
using TestField = VelocityField;

/// L2 inner product (u,v), spectral Parseval sum with the box volume factor.
double l2_inner(const VelocityField& u, const VelocityField& v);

/// H1 (gradient) inner product ((u,v)) = sum_k lambda(k) * pairing.
double v_inner(const VelocityField& u, const VelocityField& v);

double l2_norm_sq(const VelocityField& u);
double l2_norm(const VelocityField& u);

/// Squared H1 norm ||u||^2 = ((u,u)), the enstrophy.
double h1_norm_sq(const VelocityField& u);
double h1_norm(const VelocityField& u);

/// Dual norm evaluated exactly on the truncated space: sum_k |c|^2/lambda(k)
/// times the Parseval weights. On the truncated space the defining supremum
/// is attained at v = A^{-1} u, so the diagonal formula is exact here; its
/// relation to the norm over the full untruncated space is not addressed.
double dual_norm_vprime(const VelocityField& u);

/// Stokes operator: multiplies each coefficient by its eigenvalue.
VelocityField stokes_apply(const VelocityField& u);

/// Orthogonal projection onto divergence-free fields: removes from each
/// coefficient its component along the physical wavevector.
VelocityField leray_project(const LatticePtr& lattice, std::vector<Vec3c> raw);
VelocityField leray_project(const VelocityField& w);

enum class NonlinearMethod {
    Convolution,    ///< direct O(m^2) convolution over the truncated lattice
    Pseudospectral  ///< zero-padded FFT transform, alias-free for quadratic terms
};

/// Projected advection term B(u,v) = P[(u.grad)v] truncated to the lattice.
VelocityField nonlinear_B(const VelocityField& u, const VelocityField& v,
                          NonlinearMethod method = NonlinearMethod::Convolution);

/// Trilinear form b(u,v,w) = (B(u,v), w); skew in the last two arguments.
double trilinear_b(const VelocityField& u, const VelocityField& v, const VelocityField& w,
                   NonlinearMethod method = NonlinearMethod::Convolution);

/// Galerkin projection onto the first m modes in eigenvalue order.
VelocityField galerkin_project(const VelocityField& u, int m);

/// Max over modes of |kappa(k) . c(k)|, the divergence residual diagnostic.
double divergence_linf(const VelocityField& u);

/// Max over modes and components of |c(k)| entries.
double coeff_linf(const VelocityField& u);

/// Deterministic orthonormal pair spanning the divergence-free plane at kappa.
std::pair<std::array<double, 3>, std::array<double, 3>>
polarization_basis(const std::array<double, 3>& kappa);

/// Single-mode field with unit L2 norm at the given mode index and
/// polarization (0 or 1); phase rotates the coefficient in the complex plane.
VelocityField unit_mode(const LatticePtr& lattice, int mode_index, int polarization,
                        double phase = 0.0);

/// Beltrami field A,B,C on the lowest shell of a cubic box with period 2*pi;
/// its curl equals itself, so the projected advection term vanishes.
VelocityField abc_field(const LatticePtr& lattice, double a, double b, double c);

}  // namespace nsstat
