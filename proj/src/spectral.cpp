#include "nsstat/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace nsstat {

namespace {

constexpr double kPi = 3.14159265358979323846;

int cube_side(int cutoff) { return 2 * cutoff + 1; }

int cube_site(const std::array<int, 3>& k, int cutoff) {
    const int n = cube_side(cutoff);
    return ((k[0] + cutoff) * n + (k[1] + cutoff)) * n + (k[2] + cutoff);
}

bool in_cube(const std::array<int, 3>& k, int cutoff) {
    return std::abs(k[0]) <= cutoff && std::abs(k[1]) <= cutoff && std::abs(k[2]) <= cutoff;
}

bool lex_less(const std::array<int, 3>& a, const std::array<int, 3>& b) {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] < b[2];
}

Complex dot_conj(const Vec3c& a, const Vec3c& b) {
    return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]) + a[2] * std::conj(b[2]);
}

void check_same_lattice(const VelocityField& u, const VelocityField& v, const char* op) {
    if (!u.lattice() || !v.lattice() || !u.lattice()->compatible(*v.lattice()))
        throw std::invalid_argument(std::string(op) + ": fields live on different lattices");
}

}  // namespace

void BoxParams::validate() const {
    for (double l : lengths)
        if (!(l > 0.0)) throw std::invalid_argument("BoxParams: lengths must be positive");
    if (!(viscosity > 0.0)) throw std::invalid_argument("BoxParams: viscosity must be positive");
    if (cutoff < 1) throw std::invalid_argument("BoxParams: cutoff must be at least 1");
}

WaveLattice::WaveLattice(const BoxParams& params)
    : lengths_(params.lengths), cutoff_(params.cutoff) {
    params.validate();
    volume_ = lengths_[0] * lengths_[1] * lengths_[2];

    const int K = cutoff_;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k3 = -K; k3 <= K; ++k3) {
                const std::array<int, 3> k{k1, k2, k3};
                if ((k1 == 0 && k2 == 0 && k3 == 0) || !is_representative(k)) continue;
                reps_.push_back(k);
            }

    auto kappa_of = [&](const std::array<int, 3>& k) {
        return std::array<double, 3>{2.0 * kPi * k[0] / lengths_[0],
                                     2.0 * kPi * k[1] / lengths_[1],
                                     2.0 * kPi * k[2] / lengths_[2]};
    };
    auto eig_of = [&](const std::array<int, 3>& k) {
        const auto kp = kappa_of(k);
        return kp[0] * kp[0] + kp[1] * kp[1] + kp[2] * kp[2];
    };

    std::sort(reps_.begin(), reps_.end(),
              [&](const std::array<int, 3>& a, const std::array<int, 3>& b) {
                  const double ea = eig_of(a), eb = eig_of(b);
                  if (ea != eb) return ea < eb;
                  return lex_less(a, b);
              });

    kappas_.reserve(reps_.size());
    eigs_.reserve(reps_.size());
    rep_of_site_.assign(cube_side(K) * cube_side(K) * cube_side(K), -1);
    for (int i = 0; i < static_cast<int>(reps_.size()); ++i) {
        kappas_.push_back(kappa_of(reps_[i]));
        eigs_.push_back(eig_of(reps_[i]));
        const auto& k = reps_[i];
        rep_of_site_[cube_site(k, K)] = i;
        rep_of_site_[cube_site({-k[0], -k[1], -k[2]}, K)] = i;
    }
}

int WaveLattice::rep_index(const std::array<int, 3>& k) const {
    if (!in_cube(k, cutoff_)) return -1;
    return rep_of_site_[cube_site(k, cutoff_)];
}

bool WaveLattice::is_representative(const std::array<int, 3>& k) {
    if (k[0] != 0) return k[0] > 0;
    if (k[1] != 0) return k[1] > 0;
    return k[2] > 0;
}

bool WaveLattice::compatible(const WaveLattice& other) const {
    return lengths_ == other.lengths_ && cutoff_ == other.cutoff_;
}

std::string WaveLattice::describe() const {
    std::ostringstream os;
    os << "lattice K=" << cutoff_ << " L=[" << lengths_[0] << "," << lengths_[1] << ","
       << lengths_[2] << "] modes=" << mode_count();
    return os.str();
}

LatticePtr build_lattice(const BoxParams& params) {
    return std::make_shared<const WaveLattice>(params);
}

VelocityField::VelocityField(LatticePtr lattice, std::vector<Vec3c> coeffs)
    : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
    if (!lattice_) throw std::invalid_argument("VelocityField: null lattice");
    if (static_cast<int>(coeffs_.size()) != lattice_->mode_count())
        throw std::invalid_argument("VelocityField: coefficient count does not match lattice");
}

VelocityField VelocityField::zero(LatticePtr lattice) {
    if (!lattice) throw std::invalid_argument("VelocityField::zero: null lattice");
    std::vector<Vec3c> c(lattice->mode_count(), Vec3c{});
    return VelocityField(std::move(lattice), std::move(c));
}

void VelocityField::add_scaled(const VelocityField& w, double a) {
    check_same_lattice(*this, w, "add_scaled");
    for (int i = 0; i < mode_count(); ++i)
        for (int d = 0; d < 3; ++d) coeffs_[i][d] += a * w.coeffs_[i][d];
}

void VelocityField::scale(double a) {
    for (auto& c : coeffs_)
        for (auto& e : c) e *= a;
}

bool VelocityField::finite() const {
    for (const auto& c : coeffs_)
        for (const auto& e : c)
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
}

double l2_inner(const VelocityField& u, const VelocityField& v) {
    check_same_lattice(u, v, "l2_inner");
    const double vol = u.lattice()->volume();
    double s = 0.0;
    for (int i = 0; i < u.mode_count(); ++i) s += 2.0 * dot_conj(u.mode(i), v.mode(i)).real();
    return vol * s;
}

double v_inner(const VelocityField& u, const VelocityField& v) {
    check_same_lattice(u, v, "v_inner");
    const auto& lat = *u.lattice();
    double s = 0.0;
    for (int i = 0; i < u.mode_count(); ++i)
        s += 2.0 * lat.eigenvalue(i) * dot_conj(u.mode(i), v.mode(i)).real();
    return lat.volume() * s;
}

double l2_norm_sq(const VelocityField& u) { return l2_inner(u, u); }
double l2_norm(const VelocityField& u) { return std::sqrt(std::max(0.0, l2_norm_sq(u))); }
double h1_norm_sq(const VelocityField& u) { return v_inner(u, u); }
double h1_norm(const VelocityField& u) { return std::sqrt(std::max(0.0, h1_norm_sq(u))); }

double dual_norm_vprime(const VelocityField& u) {
    const auto& lat = *u.lattice();
    double s = 0.0;
    for (int i = 0; i < u.mode_count(); ++i)
        s += 2.0 / lat.eigenvalue(i) * dot_conj(u.mode(i), u.mode(i)).real();
    return std::sqrt(std::max(0.0, lat.volume() * s));
}

VelocityField stokes_apply(const VelocityField& u) {
    VelocityField out = u;
    const auto& lat = *u.lattice();
    for (int i = 0; i < out.mode_count(); ++i) {
        const double lam = lat.eigenvalue(i);
        for (auto& e : out.mode(i)) e *= lam;
    }
    return out;
}

namespace {

void project_mode(Vec3c& c, const std::array<double, 3>& kappa) {
    const double k2 = kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2];
    const Complex kd = kappa[0] * c[0] + kappa[1] * c[1] + kappa[2] * c[2];
    // Divergence below the round-off floor counts as zero, which makes the
    // projector an exact no-op on already-projected data.
    const double c2 = std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
    const double floor = 16.0 * std::numeric_limits<double>::epsilon();
    if (std::norm(kd) <= floor * floor * k2 * c2) return;
    const Complex f = kd / k2;
    for (int d = 0; d < 3; ++d) c[d] -= f * kappa[d];
}

}  // namespace

VelocityField leray_project(const LatticePtr& lattice, std::vector<Vec3c> raw) {
    if (!lattice) throw std::invalid_argument("leray_project: null lattice");
    if (static_cast<int>(raw.size()) != lattice->mode_count())
        throw std::invalid_argument("leray_project: coefficient count does not match lattice");
    for (int i = 0; i < lattice->mode_count(); ++i)
        project_mode(raw[i], lattice->physical_wavevector(i));
    return VelocityField(lattice, std::move(raw));
}

VelocityField leray_project(const VelocityField& w) {
    return leray_project(w.lattice(), w.coeffs());
}

namespace {

/// Expands half-lattice coefficients onto the dense (2K+1)^3 cube, filling the
/// conjugate half. The origin stays zero (fields are mean-free).
std::vector<Vec3c> expand_full(const VelocityField& u) {
    const auto& lat = *u.lattice();
    const int K = lat.cutoff();
    const int n = cube_side(K);
    std::vector<Vec3c> full(static_cast<size_t>(n) * n * n, Vec3c{});
    for (int i = 0; i < u.mode_count(); ++i) {
        const auto& k = lat.wavevector(i);
        const auto& c = u.mode(i);
        full[cube_site(k, K)] = c;
        full[cube_site({-k[0], -k[1], -k[2]}, K)] =
            Vec3c{std::conj(c[0]), std::conj(c[1]), std::conj(c[2])};
    }
    return full;
}

VelocityField nonlinear_convolution(const VelocityField& u, const VelocityField& v) {
    const auto& lat = *u.lattice();
    const int K = lat.cutoff();
    const int n = cube_side(K);
    const auto fu = expand_full(u);
    const auto fv = expand_full(v);

    std::vector<std::array<double, 3>> kappa_site(fu.size());
    for (int a1 = -K; a1 <= K; ++a1)
        for (int a2 = -K; a2 <= K; ++a2)
            for (int a3 = -K; a3 <= K; ++a3)
                kappa_site[cube_site({a1, a2, a3}, K)] = {
                    2.0 * kPi * a1 / lat.lengths()[0], 2.0 * kPi * a2 / lat.lengths()[1],
                    2.0 * kPi * a3 / lat.lengths()[2]};

    // ((u.grad)v)^(k) = i * sum_{k'+k''=k} (u^(k') . kappa(k'')) v^(k'');
    // only representative outputs are accumulated, the conjugate half is implied.
    std::vector<Vec3c> out(lat.mode_count(), Vec3c{});
    const Complex iunit(0.0, 1.0);
    for (int a1 = -K; a1 <= K; ++a1)
        for (int a2 = -K; a2 <= K; ++a2)
            for (int a3 = -K; a3 <= K; ++a3) {
                if (a1 == 0 && a2 == 0 && a3 == 0) continue;
                const Vec3c& ca = fu[cube_site({a1, a2, a3}, K)];
                for (int b1 = -K; b1 <= K; ++b1)
                    for (int b2 = -K; b2 <= K; ++b2)
                        for (int b3 = -K; b3 <= K; ++b3) {
                            if (b1 == 0 && b2 == 0 && b3 == 0) continue;
                            const std::array<int, 3> k{a1 + b1, a2 + b2, a3 + b3};
                            if (!in_cube(k, K) || (k[0] == 0 && k[1] == 0 && k[2] == 0))
                                continue;
                            if (!WaveLattice::is_representative(k)) continue;
                            const int bsite = cube_site({b1, b2, b3}, K);
                            const auto& kb = kappa_site[bsite];
                            const Vec3c& cb = fv[bsite];
                            const Complex f =
                                iunit * (ca[0] * kb[0] + ca[1] * kb[1] + ca[2] * kb[2]);
                            Vec3c& acc = out[lat.rep_index(k)];
                            for (int d = 0; d < 3; ++d) acc[d] += f * cb[d];
                        }
            }
    (void)n;
    return leray_project(u.lattice(), std::move(out));
}

std::mutex g_fftw_planner_mutex;

struct FftwBuffer {
    fftw_complex* p = nullptr;
    explicit FftwBuffer(size_t n) { p = fftw_alloc_complex(n); }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

/// Pseudospectral product on a grid padded to at least 3K+1 points per axis,
/// which leaves quadratic products alias-free after truncation back to K.
VelocityField nonlinear_pseudospectral(const VelocityField& u, const VelocityField& v) {
    const auto& lat = *u.lattice();
    const int K = lat.cutoff();
    const int M = 3 * K + 2;
    const size_t G = static_cast<size_t>(M) * M * M;

    FftwBuffer in(G), out(G);
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(g_fftw_planner_mutex);
        bwd = fftw_plan_dft_3d(M, M, M, in.p, out.p, FFTW_BACKWARD, FFTW_ESTIMATE);
        fwd = fftw_plan_dft_3d(M, M, M, in.p, out.p, FFTW_FORWARD, FFTW_ESTIMATE);
    }

    auto grid_site = [&](const std::array<int, 3>& k) {
        const int g1 = k[0] >= 0 ? k[0] : k[0] + M;
        const int g2 = k[1] >= 0 ? k[1] : k[1] + M;
        const int g3 = k[2] >= 0 ? k[2] : k[2] + M;
        return (static_cast<size_t>(g1) * M + g2) * M + g3;
    };

    auto scatter = [&](const VelocityField& w, int comp, bool derivative, int axis) {
        std::memset(in.p, 0, G * sizeof(fftw_complex));
        const auto& l = *w.lattice();
        for (int i = 0; i < w.mode_count(); ++i) {
            const auto& k = l.wavevector(i);
            const auto& kp = l.physical_wavevector(i);
            Complex c = w.mode(i)[comp];
            Complex cc = std::conj(w.mode(i)[comp]);
            if (derivative) {
                c *= Complex(0.0, kp[axis]);
                cc *= Complex(0.0, -kp[axis]);
            }
            const size_t s = grid_site(k);
            in.p[s][0] = c.real(), in.p[s][1] = c.imag();
            const size_t sm = grid_site({-k[0], -k[1], -k[2]});
            in.p[sm][0] = cc.real(), in.p[sm][1] = cc.imag();
        }
        fftw_execute(bwd);
    };

    std::vector<std::vector<double>> ug(3, std::vector<double>(G));
    for (int comp = 0; comp < 3; ++comp) {
        scatter(u, comp, false, 0);
        for (size_t g = 0; g < G; ++g) ug[comp][g] = out.p[g][0];
    }

    std::vector<std::vector<double>> wg(3, std::vector<double>(G, 0.0));
    for (int comp = 0; comp < 3; ++comp)
        for (int axis = 0; axis < 3; ++axis) {
            scatter(v, comp, true, axis);
            auto& acc = wg[comp];
            const auto& ua = ug[axis];
            for (size_t g = 0; g < G; ++g) acc[g] += ua[g] * out.p[g][0];
        }

    std::vector<Vec3c> coeffs(lat.mode_count(), Vec3c{});
    const double norm = 1.0 / static_cast<double>(G);
    for (int comp = 0; comp < 3; ++comp) {
        for (size_t g = 0; g < G; ++g) in.p[g][0] = wg[comp][g], in.p[g][1] = 0.0;
        fftw_execute(fwd);
        for (int i = 0; i < lat.mode_count(); ++i) {
            const size_t s = grid_site(lat.wavevector(i));
            coeffs[i][comp] = Complex(out.p[s][0] * norm, out.p[s][1] * norm);
        }
    }

    {
        std::lock_guard<std::mutex> lock(g_fftw_planner_mutex);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    return leray_project(u.lattice(), std::move(coeffs));
}

}  // namespace

VelocityField nonlinear_B(const VelocityField& u, const VelocityField& v,
                          NonlinearMethod method) {
    check_same_lattice(u, v, "nonlinear_B");
    if (method == NonlinearMethod::Convolution) return nonlinear_convolution(u, v);
    return nonlinear_pseudospectral(u, v);
}

double trilinear_b(const VelocityField& u, const VelocityField& v, const VelocityField& w,
                   NonlinearMethod method) {
    check_same_lattice(u, w, "trilinear_b");
    return l2_inner(nonlinear_B(u, v, method), w);
}

VelocityField galerkin_project(const VelocityField& u, int m) {
    if (m < 1 || m > u.mode_count())
        throw std::invalid_argument("galerkin_project: mode count out of range");
    VelocityField out = u;
    for (int i = m; i < out.mode_count(); ++i) out.mode(i) = Vec3c{};
    return out;
}

double divergence_linf(const VelocityField& u) {
    const auto& lat = *u.lattice();
    double worst = 0.0;
    for (int i = 0; i < u.mode_count(); ++i) {
        const auto& kp = lat.physical_wavevector(i);
        const auto& c = u.mode(i);
        worst = std::max(worst, std::abs(kp[0] * c[0] + kp[1] * c[1] + kp[2] * c[2]));
    }
    return worst;
}

double coeff_linf(const VelocityField& u) {
    double worst = 0.0;
    for (const auto& c : u.coeffs())
        for (const auto& e : c) worst = std::max(worst, std::abs(e));
    return worst;
}

std::pair<std::array<double, 3>, std::array<double, 3>>
polarization_basis(const std::array<double, 3>& kappa) {
    const double k2 = kappa[0] * kappa[0] + kappa[1] * kappa[1] + kappa[2] * kappa[2];
    if (!(k2 > 0.0)) throw std::invalid_argument("polarization_basis: zero wavevector");
    int axis = 0;
    for (int d = 1; d < 3; ++d)
        if (std::abs(kappa[d]) < std::abs(kappa[axis])) axis = d;
    std::array<double, 3> a{0.0, 0.0, 0.0};
    a[axis] = 1.0;
    std::array<double, 3> e1{kappa[1] * a[2] - kappa[2] * a[1],
                             kappa[2] * a[0] - kappa[0] * a[2],
                             kappa[0] * a[1] - kappa[1] * a[0]};
    const double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
    for (auto& x : e1) x /= n1;
    std::array<double, 3> e2{kappa[1] * e1[2] - kappa[2] * e1[1],
                             kappa[2] * e1[0] - kappa[0] * e1[2],
                             kappa[0] * e1[1] - kappa[1] * e1[0]};
    const double n2 = std::sqrt(e2[0] * e2[0] + e2[1] * e2[1] + e2[2] * e2[2]);
    for (auto& x : e2) x /= n2;
    return {e1, e2};
}

VelocityField unit_mode(const LatticePtr& lattice, int mode_index, int polarization,
                        double phase) {
    if (!lattice) throw std::invalid_argument("unit_mode: null lattice");
    if (mode_index < 0 || mode_index >= lattice->mode_count())
        throw std::invalid_argument("unit_mode: mode index out of range");
    if (polarization != 0 && polarization != 1)
        throw std::invalid_argument("unit_mode: polarization must be 0 or 1");
    auto f = VelocityField::zero(lattice);
    const auto [e1, e2] = polarization_basis(lattice->physical_wavevector(mode_index));
    const auto& e = polarization == 0 ? e1 : e2;
    // |u|_{L2}^2 = vol * 2 * amp^2, so amp = 1/sqrt(2 vol) normalizes to one.
    const double amp = 1.0 / std::sqrt(2.0 * lattice->volume());
    const Complex rot = std::polar(amp, phase);
    for (int d = 0; d < 3; ++d) f.mode(mode_index)[d] = rot * e[d];
    return f;
}

VelocityField abc_field(const LatticePtr& lattice, double a, double b, double c) {
    if (!lattice) throw std::invalid_argument("abc_field: null lattice");
    for (double l : lattice->lengths())
        if (std::abs(l - 2.0 * kPi) > 1e-12 * l)
            throw std::invalid_argument("abc_field: requires a cubic box with period 2*pi");
    auto f = VelocityField::zero(lattice);
    const Complex ih(0.0, -0.5);  // coefficient of sin terms
    const int ex = lattice->rep_index({1, 0, 0});
    const int ey = lattice->rep_index({0, 1, 0});
    const int ez = lattice->rep_index({0, 0, 1});
    if (ex < 0 || ey < 0 || ez < 0)
        throw std::invalid_argument("abc_field: lattice lacks the unit shell");
    // u = (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)
    f.mode(ez)[0] = ih * a;
    f.mode(ez)[1] = 0.5 * a;
    f.mode(ey)[0] = 0.5 * c;
    f.mode(ey)[2] = ih * c;
    f.mode(ex)[1] = ih * b;
    f.mode(ex)[2] = 0.5 * b;
    return f;
}

}  // namespace nsstat
