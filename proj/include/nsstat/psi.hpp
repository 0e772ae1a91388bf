#pragma once

#include <string>
#include <vector>

namespace nsstat {

/// Absolutely continuous, nonnegative, nondecreasing weight with bounded
/// derivative, the multiplier class admitted by the strengthened energy
/// inequality. Two shapes: linear (psi(r) = r) and saturating
/// (psi(r) = a(1 - exp(-r/a)), which flattens past r ~ a).
class PsiFunction {
public:
    static PsiFunction linear();
    static PsiFunction saturating(double a);

    double value(double r) const;
    double derivative(double r) const;
    const std::string& name() const { return name_; }

private:
    PsiFunction(bool saturating, double a, std::string name)
        : saturating_(saturating), a_(a), name_(std::move(name)) {}

    bool saturating_;
    double a_;
    std::string name_;
};

/// The family used by the verification sweeps: linear, saturating(1),
/// saturating(10).
std::vector<PsiFunction> standard_psi_family();

/// Factory by kind name, "linear" or "saturating". The admissibility
/// invariants (nonnegative, nondecreasing, derivative within [0,1]) are spot
/// checked on a logarithmic grid before the function is handed out.
PsiFunction psi_family(const std::string& kind, double a = 1.0);

}  // namespace nsstat
