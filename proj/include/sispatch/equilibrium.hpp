#ifndef SISPATCH_EQUILIBRIUM_HPP
#define SISPATCH_EQUILIBRIUM_HPP

#include "sispatch/linalg.hpp"

namespace sispatch {

enum class EquilibriumKind { DFE, EE };
enum class Stability { Unknown, Stable, Unstable, Marginal };

inline const char* to_string(Stability s) {
    switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
    default: return "unknown";
    }
}

/// An equilibrium (S, I) with its scalar coordinate l and multiplier kappa*
/// (kappa* N alpha = dS*S + dI*I). l and kappa_star are meaningful for EE only.
struct EquilibriumSolution {
    Vector S;
    Vector I;
    double l = 0.0;
    double kappa_star = 0.0;
    EquilibriumKind kind = EquilibriumKind::DFE;
    Stability stability = Stability::Unknown;
};

} // namespace sispatch

#endif
