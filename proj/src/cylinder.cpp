#include "nsstat/cylinder.hpp"

#include <cmath>
#include <stdexcept>

namespace nsstat {

namespace {

double eta(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return w * w;
}

double eta_prime(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    return -4.0 * s * (1.0 - s * s);
}

}  // namespace

CylindricalTestFunction::CylindricalTestFunction(std::vector<TestField> fields,
                                                 std::vector<double> radii,
                                                 QuadraticProfile profile)
    : fields_(std::move(fields)), radii_(std::move(radii)), profile_(std::move(profile)) {
    if (fields_.empty())
        throw std::invalid_argument("CylindricalTestFunction: needs at least one test field");
    const size_t k = fields_.size();
    for (const auto& v : fields_)
        if (!v.lattice() || !v.lattice()->compatible(*fields_.front().lattice()))
            throw std::invalid_argument("CylindricalTestFunction: fields on different lattices");
    if (radii_.size() != k)
        throw std::invalid_argument("CylindricalTestFunction: one radius per coordinate");
    for (double r : radii_)
        if (!(r > 0.0))
            throw std::invalid_argument("CylindricalTestFunction: radii must be positive");
    if (!profile_.lin.empty() && profile_.lin.size() != k)
        throw std::invalid_argument("CylindricalTestFunction: linear profile size mismatch");
    if (!profile_.quad.empty()) {
        if (profile_.quad.size() != k)
            throw std::invalid_argument("CylindricalTestFunction: quadratic profile size mismatch");
        for (const auto& row : profile_.quad)
            if (row.size() != k)
                throw std::invalid_argument(
                    "CylindricalTestFunction: quadratic profile is not square");
    }
}

std::vector<double> CylindricalTestFunction::coordinates(const VelocityField& u) const {
    std::vector<double> x(fields_.size());
    for (size_t j = 0; j < fields_.size(); ++j) x[j] = l2_inner(u, fields_[j]);
    return x;
}

double CylindricalTestFunction::profile_value(const std::vector<double>& x) const {
    const size_t k = fields_.size();
    if (x.size() != k)
        throw std::invalid_argument("CylindricalTestFunction: coordinate size mismatch");
    double bump = 1.0;
    for (size_t i = 0; i < k; ++i) {
        bump *= eta(x[i] / radii_[i]);
        if (bump == 0.0) return 0.0;
    }
    double q = profile_.c0;
    for (size_t i = 0; i < profile_.lin.size(); ++i) q += profile_.lin[i] * x[i];
    for (size_t i = 0; i < profile_.quad.size(); ++i)
        for (size_t j = 0; j < k; ++j) q += profile_.quad[i][j] * x[i] * x[j];
    return q * bump;
}

std::vector<double> CylindricalTestFunction::profile_gradient(const std::vector<double>& x) const {
    const size_t k = fields_.size();
    if (x.size() != k)
        throw std::invalid_argument("CylindricalTestFunction: coordinate size mismatch");
    std::vector<double> grad(k, 0.0);
    for (size_t i = 0; i < k; ++i)
        if (std::abs(x[i] / radii_[i]) >= 1.0) return grad;

    double q = profile_.c0;
    for (size_t i = 0; i < profile_.lin.size(); ++i) q += profile_.lin[i] * x[i];
    for (size_t i = 0; i < profile_.quad.size(); ++i)
        for (size_t j = 0; j < k; ++j) q += profile_.quad[i][j] * x[i] * x[j];

    for (size_t j = 0; j < k; ++j) {
        double dq = profile_.lin.empty() ? 0.0 : profile_.lin[j];
        if (!profile_.quad.empty())
            for (size_t i = 0; i < k; ++i)
                dq += (profile_.quad[j][i] + profile_.quad[i][j]) * x[i];

        double bump = 1.0;
        for (size_t i = 0; i < k; ++i)
            if (i != j) bump *= eta(x[i] / radii_[i]);
        const double sj = x[j] / radii_[j];
        grad[j] = dq * bump * eta(sj) + q * bump * eta_prime(sj) / radii_[j];
    }
    return grad;
}

double cyl_eval(const CylindricalTestFunction& phi, const VelocityField& u) {
    return phi.profile_value(phi.coordinates(u));
}

TestField cyl_grad(const CylindricalTestFunction& phi, const VelocityField& u) {
    const auto g = phi.profile_gradient(phi.coordinates(u));
    auto out = VelocityField::zero(phi.lattice());
    for (size_t j = 0; j < g.size(); ++j) out.add_scaled(phi.fields()[j], g[j]);
    return out;
}

}  // namespace nsstat
