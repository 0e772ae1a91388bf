#pragma once

// Independent test oracles. Everything here recomputes quantities through a
// different route than the library (physical-space quadrature, brute-force
// enumeration, explicit randomness) so agreement is evidence, not tautology.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "nsstat/spectral.hpp"

namespace oracle {

constexpr double kPi = 3.14159265358979323846;

/// Point evaluation u(x) = sum over stored modes of 2 Re(c(k) e^{i kappa.x}).
inline std::array<double, 3> eval_at(const nsstat::VelocityField& u,
                                     const std::array<double, 3>& x) {
    const auto& lat = *u.lattice();
    std::array<double, 3> val{0.0, 0.0, 0.0};
    for (int i = 0; i < u.mode_count(); ++i) {
        const auto& kp = lat.physical_wavevector(i);
        const double phase = kp[0] * x[0] + kp[1] * x[1] + kp[2] * x[2];
        const nsstat::Complex e(std::cos(phase), std::sin(phase));
        for (int d = 0; d < 3; ++d) val[d] += 2.0 * (u.mode(i)[d] * e).real();
    }
    return val;
}

/// Point evaluation of the Jacobian dv_alpha/dx_j.
inline std::array<std::array<double, 3>, 3> eval_grad_at(const nsstat::VelocityField& v,
                                                         const std::array<double, 3>& x) {
    const auto& lat = *v.lattice();
    std::array<std::array<double, 3>, 3> g{};  // g[j][alpha] = d_j v_alpha
    for (int i = 0; i < v.mode_count(); ++i) {
        const auto& kp = lat.physical_wavevector(i);
        const double phase = kp[0] * x[0] + kp[1] * x[1] + kp[2] * x[2];
        const nsstat::Complex e(std::cos(phase), std::sin(phase));
        for (int j = 0; j < 3; ++j) {
            const nsstat::Complex de = nsstat::Complex(0.0, kp[j]) * e;
            for (int d = 0; d < 3; ++d) g[j][d] += 2.0 * (v.mode(i)[d] * de).real();
        }
    }
    return g;
}

/// Uniform periodic grid points for quadrature, m per axis.
inline std::vector<std::array<double, 3>> grid_points(const nsstat::WaveLattice& lat, int m) {
    std::vector<std::array<double, 3>> pts;
    pts.reserve(static_cast<size_t>(m) * m * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c)
                pts.push_back({lat.lengths()[0] * a / m, lat.lengths()[1] * b / m,
                               lat.lengths()[2] * c / m});
    return pts;
}

/// Physical-space L2 inner product by the periodic trapezoid (= rectangle)
/// rule on an m^3 grid; exact for trig polynomials below the alias limit.
inline double quad_l2_inner(const nsstat::VelocityField& u, const nsstat::VelocityField& v,
                            int m) {
    const auto& lat = *u.lattice();
    const double w = lat.volume() / (static_cast<double>(m) * m * m);
    double s = 0.0;
    for (const auto& x : grid_points(lat, m)) {
        const auto uu = eval_at(u, x);
        const auto vv = eval_at(v, x);
        s += uu[0] * vv[0] + uu[1] * vv[1] + uu[2] * vv[2];
    }
    return w * s;
}

/// Physical-space quadrature of the advection integral ((u.grad)v, w).
inline double quad_trilinear(const nsstat::VelocityField& u, const nsstat::VelocityField& v,
                             const nsstat::VelocityField& w, int m) {
    const auto& lat = *u.lattice();
    const double wt = lat.volume() / (static_cast<double>(m) * m * m);
    double s = 0.0;
    for (const auto& x : grid_points(lat, m)) {
        const auto uu = eval_at(u, x);
        const auto gv = eval_grad_at(v, x);
        const auto ww = eval_at(w, x);
        for (int d = 0; d < 3; ++d)
            s += (uu[0] * gv[0][d] + uu[1] * gv[1][d] + uu[2] * gv[2][d]) * ww[d];
    }
    return wt * s;
}

/// Deterministic uniform in [0,1) from the top 53 bits of the engine word.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Box-Muller normal; avoids std::normal_distribution, whose draw sequence is
/// implementation-defined.
inline double normal(std::mt19937_64& rng) {
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

/// Random divergence-free field: independent complex Gaussian pair in the
/// divergence-free plane of every stored mode, flat spectrum, scale amp.
inline nsstat::VelocityField random_field(nsstat::LatticePtr lat, std::mt19937_64& rng,
                                          double amp = 1.0) {
    auto f = nsstat::VelocityField::zero(lat);
    for (int i = 0; i < f.mode_count(); ++i) {
        const auto [e1, e2] = nsstat::polarization_basis(lat->physical_wavevector(i));
        const nsstat::Complex a1(normal(rng), normal(rng));
        const nsstat::Complex a2(normal(rng), normal(rng));
        for (int d = 0; d < 3; ++d) f.mode(i)[d] = amp * (a1 * e1[d] + a2 * e2[d]);
    }
    return f;
}

/// Relative gap |a-b| / max(|a|,|b|,floor).
inline double rel_err(double a, double b, double floor = 1e-30) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Least-squares slope and intercept of y against x.
inline std::pair<double, double> linear_fit(const std::vector<double>& x,
                                            const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {slope, intercept};
}

}  // namespace oracle
