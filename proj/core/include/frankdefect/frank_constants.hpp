#pragma once

namespace frankdefect {

// How the saddle-splay constant k4 is chosen.
//   MinusK2      : k4 = -k2, kills the null-Lagrangian term; the reduced
//                  energy functional assumes this convention.
//   AlphaMinusK2 : k4 = min(k1,k2,k3) - k2, the choice that makes the density
//                  coercive: (alpha/2)|grad u|^2 <= W <= (beta/2)|grad u|^2.
//   Explicit     : caller-supplied k4.
enum class K4Convention { MinusK2, AlphaMinusK2, Explicit };

struct FrankConstants {
    double k1 = 1.0;
    double k2 = 1.0;
    double k3 = 1.0;
    double k4 = -1.0;
    K4Convention convention = K4Convention::MinusK2;

    static FrankConstants minus_k2(double k1, double k2, double k3);
    static FrankConstants alpha_minus_k2(double k1, double k2, double k3);
    static FrankConstants explicit_k4(double k1, double k2, double k3, double k4);

    // Throws std::domain_error unless k1, k2, k3 > 0 and k4 is finite.
    void validate() const;
};

struct CoercivityBounds {
    double alpha;  // min(k1, k2, k3)
    double beta;   // 3 k1 + 2 k2 + 2 k3
};

CoercivityBounds coercivity_bounds(const FrankConstants& k);

}  // namespace frankdefect
