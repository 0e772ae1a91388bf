#pragma once

#include <vector>

#include "nsstat/spectral.hpp"

namespace nsstat {

/// Polynomial of total degree at most two on R^k:
/// q(x) = c0 + sum_i lin[i] x_i + sum_{ij} quad[i][j] x_i x_j.
/// Empty lin/quad mean zero terms of that degree.
struct QuadraticProfile {
    double c0 = 0.0;
    std::vector<double> lin;
    std::vector<std::vector<double>> quad;
};

/// Functional of finitely many L2 coordinates, Phi(u) = phi((u,v_1), ...,
/// (u,v_k)), with the compactly supported C^1 profile
/// phi(x) = q(x) prod_i eta(x_i / rho_i), eta(s) = (1 - s^2)^2 on |s| < 1 and
/// zero outside. The gradient is analytic: Phi'(u) = sum_j d_j phi(x) v_j.
class CylindricalTestFunction {
public:
    CylindricalTestFunction(std::vector<TestField> fields, std::vector<double> radii,
                            QuadraticProfile profile);

    int arity() const { return static_cast<int>(fields_.size()); }
    const std::vector<TestField>& fields() const { return fields_; }
    const std::vector<double>& radii() const { return radii_; }
    const QuadraticProfile& profile() const { return profile_; }
    const LatticePtr& lattice() const { return fields_.front().lattice(); }

    /// The coordinate vector ((u,v_1), ..., (u,v_k)).
    std::vector<double> coordinates(const VelocityField& u) const;

    double profile_value(const std::vector<double>& x) const;
    std::vector<double> profile_gradient(const std::vector<double>& x) const;

private:
    std::vector<TestField> fields_;
    std::vector<double> radii_;
    QuadraticProfile profile_;
};

/// Phi(u).
double cyl_eval(const CylindricalTestFunction& phi, const VelocityField& u);

/// Phi'(u) as an element of the test space.
TestField cyl_grad(const CylindricalTestFunction& phi, const VelocityField& u);

}  // namespace nsstat
