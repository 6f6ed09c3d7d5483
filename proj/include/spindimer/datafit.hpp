#pragma once

#include "spindimer/spin_algebra.hpp"
#include "spindimer/thermo.hpp"
#include "spindimer/units.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spindimer {

struct DataPoint {
    double t_kelvin = 0.0;
    double chi = 0.0;
    std::optional<double> sigma;
};

/// Measured chi(T) for one sample. chi is per mole of formula units in
/// cgs_molar, per `moles_of_dimers_per_mol` dimers.
struct ExperimentalDataset {
    std::vector<DataPoint> points;
    UnitSystem units = UnitSystem::cgs_molar;
    SpinValue spin;
    std::string sample_label;
    double moles_of_dimers_per_mol = 1.0;

    DimerEnsemble ensemble() const { return {moles_of_dimers_per_mol}; }
};

/// Out-of-band description of a CSV file: the columns carry only numbers.
struct DatasetFormat {
    SpinValue spin;
    UnitSystem units = UnitSystem::cgs_molar;
    std::string sample_label;
    double moles_of_dimers_per_mol = 1.0;
};

/// Reads `t_kelvin,chi_emu_per_mol[,sigma_emu_per_mol]` CSV.
///
/// `#` lines and blank lines are skipped. Throws ParseError with the
/// offending line for malformed or non-finite rows, chi <= 0, or sigma <= 0;
/// NonMonotonicTemperature unless t is strictly increasing; EmptyDataset
/// when no rows remain.
ExperimentalDataset load_dataset(std::istream& source, const DatasetFormat& format);

/// Writes the dataset in the same CSV layout load_dataset reads. The sigma
/// column is emitted when every point has one.
void write_dataset_csv(std::ostream& out, const ExperimentalDataset& data);

struct FitOptions {
    /// Adds a temperature-independent chi_0 to the model.
    bool fit_background = false;
    int max_iterations = 500;
    double initial_damping = 1e-3;
    /// Relative step size that ends the iteration.
    double step_tolerance = 1e-13;
    /// Largest cosine between the residual and a Jacobian column accepted
    /// as a stationary point.
    double gradient_tolerance = 1e-6;
};

struct FitResult {
    double j_exchange = 0.0;
    double g_factor = 0.0;
    std::optional<double> background;  ///< chi_0, when fitted
    UnitSystem units = UnitSystem::cgs_molar;
    /// Parameter covariance, order (J, g[, chi_0]).
    Eigen::MatrixXd covariance;
    /// sqrt(mean squared unweighted residual), in the data's chi units.
    double rms_residual = 0.0;
    /// Gradient measure at the returned point: the largest cosine between
    /// the weighted residual and a Jacobian column (0 for an exact fit).
    double gradient_norm = 0.0;
    bool converged = false;
    int n_iterations = 0;
    std::size_t n_points = 0;

    double sigma_j() const { return std::sqrt(covariance(0, 0)); }
    double sigma_g() const { return std::sqrt(covariance(1, 1)); }
};

/// (J_0, g_0): g_0 = 2 and J_0 from a Curie-Weiss line through 1/chi over
/// the upper third of the temperature range, J_0 = 3 theta / (S(S+1)).
std::pair<double, double> initial_guess(const ExperimentalDataset& data);

/// Weighted least squares of chi(T; J, g) against the data by damped
/// Gauss-Newton. Weights are 1/sigma^2 when every point has sigma, else 1.
///
/// Throws InvalidArgument for fewer than 8 points or a bad initial guess,
/// NonConvergence after max_iterations, SingularJacobian if the normal
/// matrix cannot be inverted at the optimum.
FitResult fit_model(const ExperimentalDataset& data, std::pair<double, double> init,
                    const FitOptions& options = {});

/// Per-point EW from measured chi with the fitted g (and background removed
/// when one was fitted). Throws InvalidArgument if the fit did not converge.
WitnessCurve experimental_witness_curve(const ExperimentalDataset& data, const FitResult& fit);

enum class CrossingMethod { linear_interp, fit_propagated };

constexpr std::string_view to_string(CrossingMethod method) noexcept {
    return method == CrossingMethod::linear_interp ? "linear_interp" : "fit_propagated";
}

struct CrossingEstimate {
    double t_e = 0.0;
    double sigma_t_e = 0.0;
    CrossingMethod method = CrossingMethod::linear_interp;
};

/// Lowest-temperature sign change of EW, linearly interpolated. sigma is
/// half the bracketing interval; when the curve carries fit information it
/// is combined in quadrature with c_S sigma_J. Returns nullopt if EW never
/// changes sign.
std::optional<CrossingEstimate> zero_crossing(const WitnessCurve& curve);

/// Model data for tests and fixtures. `relative_noise` > 0 adds
/// multiplicative Gaussian noise and fills sigma = relative_noise * chi_true.
struct SynthesisOptions {
    UnitSystem units = UnitSystem::cgs_molar;
    double relative_noise = 0.0;
    std::uint64_t seed = 0;
    std::string sample_label = "synthetic";
    double moles_of_dimers_per_mol = 1.0;
};

ExperimentalDataset synthesize_dataset(const DimerModel& model, std::span<const double> t_grid,
                                       const SynthesisOptions& options = {});

}  // namespace spindimer
