#pragma once

#include "spindimer/datafit.hpp"
#include "spindimer/entanglement.hpp"
#include "spindimer/thermo.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace spindimer {

/// Fit report with fields j_kelvin, g, covariance (row-major 2x2 J/g
/// block), rms_residual, converged, n_points, t_e_kelvin and
/// t_e_sigma_kelvin (both null without a crossing), plus descriptive extras.
nlohmann::json fit_report_json(const ExperimentalDataset& data, const FitResult& fit,
                               const std::optional<CrossingEstimate>& crossing);

nlohmann::json to_json(const EntanglementReport& report, const DimerModel& model);
nlohmann::json to_json(const GroundStateReport& report, SpinValue spin);

/// Header `t_kelvin,chi,ew`.
void write_curve_csv(std::ostream& out, const WitnessCurve& curve);

/// Renders a state as a sum over |m_A, m_B> kets with nonnegligible
/// amplitude, e.g. "0.707107|1/2,-1/2> - 0.707107|-1/2,1/2>". The global
/// phase is fixed so the first such amplitude (highest m_A) is real and
/// positive.
std::string format_ket(const ComplexVector& psi, SpinValue spin, double cutoff = 1e-9);

/// Writes `content` to a sibling temporary file and renames it over `path`,
/// so readers never see a partial file. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace spindimer
