#pragma once

#include "spindimer/spin_algebra.hpp"
#include "spindimer/units.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace spindimer {

/// x = J / (k_B T), J and T both in kelvin.
struct ReducedCoupling {
    double x = 0.0;

    /// Throws NonPositiveTemperature for t <= 0.
    static ReducedCoupling from(double j_kelvin, double t_kelvin);
};

/// Number of dimers in the sample. In reduced units this is a plain count;
/// in molar CGS it is moles of dimers per mole of formula units (N_A is
/// folded into the moment constant). The spin count is always twice it.
struct DimerEnsemble {
    double n_dimers = 1.0;

    double n_spins() const noexcept { return 2.0 * n_dimers; }
};

struct Susceptibility {
    double value = 0.0;
    UnitSystem units = UnitSystem::reduced;
};

/// Thermal state of a dimer, on the |m_A, m_B> basis.
struct DensityMatrix {
    ComplexMatrix rho;
    SpinValue spin;

    int dim_a() const noexcept { return spin.dimension(); }
    int dim_b() const noexcept { return spin.dimension(); }
};

/// Integer Boltzmann-sum coefficients of F^(S):
///
///   F = sum_{j>=1} numerator[j-1] e^{x exponents[j]} / sum_{j>=0} denominator[j] e^{x exponents[j]}
///
/// with numerator c_j = j(j+1)(2j+1)/6, denominator 2j+1, exponent j(j+1)/2.
struct BoltzmannSeries {
    std::vector<long> numerator;    ///< j = 1 .. 2S
    std::vector<long> denominator;  ///< j = 0 .. 2S
    std::vector<long> exponents;    ///< j = 0 .. 2S
};

BoltzmannSeries boltzmann_series(SpinValue s);

/// Closed-form F^(S)(x). Stable for any finite x: exponents are shifted by
/// their maximum so nothing overflows and extreme x saturates to the
/// limiting ratio.
double f_closed(SpinValue s, ReducedCoupling x);

/// dF/dx of the closed form.
double f_closed_derivative(SpinValue s, ReducedCoupling x);

/// rho = e^{-H/T}/Z at zero field, built from the exact spectrum with the
/// ground energy subtracted.
DensityMatrix thermal_density_matrix(const DimerModel& model, double t_kelvin);

/// tr(rho S_alpha,tot^2) at zero field.
double spin_fluctuation(const DimerModel& model, double t_kelvin, Axis axis);

/// Diagonalization oracle for F: <S_z,tot^2>_rho / 2.
double f_numeric(const DimerModel& model, double t_kelvin);

/// chi(T) = 2 N (g mu_B)^2 / (k_B T) F^(S)(J, T).
Susceptibility susceptibility(const DimerModel& model, double t_kelvin,
                              const DimerEnsemble& ensemble = {},
                              UnitSystem units = UnitSystem::reduced);

/// dchi/dJ at fixed g, in the same units as susceptibility().
double susceptibility_d_exchange(const DimerModel& model, double t_kelvin,
                                 const DimerEnsemble& ensemble, UnitSystem units);

/// EW = 3 k_B T chi / ((g mu_B)^2 N S) - 1 with N the number of spins.
///
/// `constants` selects which mu_B^2/k_B is used; it must match the units
/// chi_avg is expressed in, otherwise UnitMismatch is thrown.
double witness(SpinValue s, double g_factor, double t_kelvin, Susceptibility chi_avg,
               const DimerEnsemble& ensemble, UnitSystem constants);

/// EW for a model susceptibility collapses to 3F/S - 1.
double witness_from_f(SpinValue s, double f_value);

enum class CurveSource { model, experiment };

constexpr std::string_view to_string(CurveSource source) noexcept {
    return source == CurveSource::model ? "model" : "experiment";
}

struct WitnessPoint {
    double t_kelvin = 0.0;
    double chi_avg = 0.0;
    double ew = 0.0;
};

/// Fit information carried by experimental curves, used to propagate the
/// exchange uncertainty into crossing estimates.
struct CurveFitInfo {
    double sigma_j = 0.0;
};

struct WitnessCurve {
    std::vector<WitnessPoint> points;
    SpinValue spin;
    double j_exchange = 0.0;
    double g_factor = 2.0;
    CurveSource source = CurveSource::model;
    UnitSystem units = UnitSystem::reduced;
    /// chi_avg taken as a single-axis measurement (exact for the model).
    bool assumed_isotropic = true;
    std::optional<CurveFitInfo> fit;
};

/// Curve of (T, chi_avg, EW) from the model; chi_avg = chi_z by isotropy.
/// Throws InvalidArgument if the grid is empty or not strictly increasing,
/// NonPositiveTemperature if any t <= 0.
WitnessCurve witness_curve(const DimerModel& model, std::span<const double> t_grid,
                           const DimerEnsemble& ensemble = {},
                           UnitSystem units = UnitSystem::reduced);

enum class GridSpacing { linear, log };

/// `points` temperatures from tmin to tmax inclusive. points == 1 yields {tmin}.
std::vector<double> temperature_grid(double tmin, double tmax, int points,
                                     GridSpacing spacing = GridSpacing::log);

/// Log grid with a fixed density per decade (default 400).
std::vector<double> log_grid_per_decade(double tmin, double tmax, int points_per_decade = 400);

/// Throws unless the grid is nonempty, positive and strictly increasing.
void validate_grid(std::span<const double> t_grid);

}  // namespace spindimer
