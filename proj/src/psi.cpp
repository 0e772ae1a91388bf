#include "nsstat/psi.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nsstat {

PsiFunction PsiFunction::linear() { return PsiFunction(false, 0.0, "linear"); }

PsiFunction PsiFunction::saturating(double a) {
    if (!(a > 0.0)) throw std::invalid_argument("PsiFunction: saturation level must be positive");
    std::ostringstream name;
    name << "saturating(" << a << ")";
    return PsiFunction(true, a, name.str());
}

double PsiFunction::value(double r) const {
    if (r < 0.0) throw std::invalid_argument("PsiFunction: negative argument");
    return saturating_ ? a_ * (1.0 - std::exp(-r / a_)) : r;
}

double PsiFunction::derivative(double r) const {
    if (r < 0.0) throw std::invalid_argument("PsiFunction: negative argument");
    return saturating_ ? std::exp(-r / a_) : 1.0;
}

std::vector<PsiFunction> standard_psi_family() {
    return {PsiFunction::linear(), PsiFunction::saturating(1.0), PsiFunction::saturating(10.0)};
}

PsiFunction psi_family(const std::string& kind, double a) {
    PsiFunction psi = [&] {
        if (kind == "linear") return PsiFunction::linear();
        if (kind == "saturating") return PsiFunction::saturating(a);
        throw std::invalid_argument("psi_family: unknown kind '" + kind + "'");
    }();
    double prev = 0.0;
    for (double r = 0.0; r <= 1e8; r = (r == 0.0 ? 1e-8 : 10.0 * r)) {
        const double v = psi.value(r);
        const double d = psi.derivative(r);
        if (!(v >= 0.0) || v < prev || !(d >= 0.0) || !(d <= 1.0))
            throw std::runtime_error("psi_family: admissibility spot check failed");
        prev = v;
    }
    return psi;
}

}  // namespace nsstat
