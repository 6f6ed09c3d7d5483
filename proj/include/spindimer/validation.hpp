#pragma once

#include "spindimer/spin_algebra.hpp"

#include <string>
#include <vector>

namespace spindimer {

/// Reference entanglement-temperature coefficients c_S (T_e = -c_S J) for
/// S = 1/2 .. 5/2, two decimals.
inline constexpr double kReferenceCoefficients[] = {0.91, 1.30, 1.74, 2.21, 2.69};

/// Reference antiferromagnetic ground state for S = 1/2 .. 5/2, as a vector on
/// the |m_A, m_B> basis. Throws InvalidArgument for other spins.
ComplexVector reference_ground_state(SpinValue s);

/// |<a|b>|^2 for normalized vectors; insensitive to global phase.
double fidelity(const ComplexVector& a, const ComplexVector& b);

struct ValidationRow {
    std::string group;  ///< "coefficients", "compounds", "series", "oracle", "witness", "ground_state"
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Negative-control knobs for exercising failure rows.
struct ValidationHooks {
    /// Added to every expected reference coefficient before comparison.
    double coefficient_offset = 0.0;
};

/// Recomputes the reference c_S coefficients, the reference compound temperatures,
/// the closed-form series coefficients, closed-form/diagonalization
/// agreement, witness-curve behavior and the reference ground states.
std::vector<ValidationRow> run_validation(const ValidationHooks& hooks = {});

}  // namespace spindimer
