#pragma once

#include <string_view>

namespace spindimer {

// Energies are kelvin throughout: J means J/k_B. Reduced units set
// k_B = mu_B = 1; molar CGS reports susceptibility in emu/mol.

namespace constants {

/// mu_B / k_B in K/T (CODATA 2018).
inline constexpr double bohr_magneton_over_boltzmann = 0.67171381563;

/// N_A mu_B^2 / k_B in emu K / mol (CODATA 2018 values of N_A, mu_B, k_B).
inline constexpr double molar_curie_constant = 0.37514809612;

}  // namespace constants

enum class UnitSystem { reduced, cgs_molar };

/// Factor multiplying 2 N g^2 F / T in the susceptibility. For cgs_molar the
/// dimer count is expressed in moles, so N_A is folded in here.
constexpr double moment_constant(UnitSystem units) noexcept {
    return units == UnitSystem::reduced ? 1.0 : constants::molar_curie_constant;
}

constexpr std::string_view to_string(UnitSystem units) noexcept {
    return units == UnitSystem::reduced ? "reduced" : "cgs";
}

}  // namespace spindimer
