#include "frankdefect/frank_constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frankdefect {

FrankConstants FrankConstants::minus_k2(double k1, double k2, double k3) {
    FrankConstants k{k1, k2, k3, -k2, K4Convention::MinusK2};
    k.validate();
    return k;
}

FrankConstants FrankConstants::alpha_minus_k2(double k1, double k2, double k3) {
    double alpha = std::min({k1, k2, k3});
    FrankConstants k{k1, k2, k3, alpha - k2, K4Convention::AlphaMinusK2};
    k.validate();
    return k;
}

FrankConstants FrankConstants::explicit_k4(double k1, double k2, double k3, double k4) {
    FrankConstants k{k1, k2, k3, k4, K4Convention::Explicit};
    k.validate();
    return k;
}

void FrankConstants::validate() const {
    if (!(k1 > 0.0) || !(k2 > 0.0) || !(k3 > 0.0))
        throw std::domain_error("FrankConstants: k1, k2, k3 must be positive");
    if (!std::isfinite(k4))
        throw std::domain_error("FrankConstants: k4 must be finite");
}

CoercivityBounds coercivity_bounds(const FrankConstants& k) {
    k.validate();
    return {std::min({k.k1, k.k2, k.k3}), 3.0 * k.k1 + 2.0 * k.k2 + 2.0 * k.k3};
}

}  // namespace frankdefect
