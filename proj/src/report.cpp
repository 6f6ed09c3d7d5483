#include "spindimer/report.hpp"

#include "spindimer/errors.hpp"
#include "spindimer/format.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace spindimer {

namespace {

std::string format_m(int twice_m) {
    if (twice_m % 2 == 0) return std::to_string(twice_m / 2);
    return std::to_string(twice_m) + "/2";
}

nlohmann::json nullable(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json fit_report_json(const ExperimentalDataset& data, const FitResult& fit,
                               const std::optional<CrossingEstimate>& crossing) {
    nlohmann::json j;
    j["sample"] = data.sample_label;
    j["spin"] = data.spin.to_string();
    j["units"] = std::string(to_string(data.units));
    j["j_kelvin"] = fit.j_exchange;
    j["g"] = fit.g_factor;
    j["covariance"] = {fit.covariance(0, 0), fit.covariance(0, 1), fit.covariance(1, 0),
                       fit.covariance(1, 1)};
    if (fit.background) {
        j["chi0_emu_per_mol"] = *fit.background;
        j["chi0_sigma_emu_per_mol"] = std::sqrt(fit.covariance(2, 2));
    }
    j["rms_residual"] = fit.rms_residual;
    j["converged"] = fit.converged;
    j["n_iterations"] = fit.n_iterations;
    j["n_points"] = fit.n_points;
    j["assumed_isotropic"] = true;
    j["t_e_kelvin"] = crossing ? nlohmann::json(crossing->t_e) : nlohmann::json(nullptr);
    j["t_e_sigma_kelvin"] = crossing ? nlohmann::json(crossing->sigma_t_e) : nlohmann::json(nullptr);
    j["t_e_method"] =
        crossing ? nlohmann::json(std::string(to_string(crossing->method))) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const GroundStateReport& report, SpinValue spin) {
    nlohmann::json j;
    j["energy_kelvin"] = report.energy;
    j["degeneracy"] = report.degeneracy;
    j["total_spin_j"] = report.total_spin_j;
    j["is_entangled_pure_state"] = report.is_entangled_pure_state;
    auto states = nlohmann::json::array();
    for (Eigen::Index c = 0; c < report.state_vectors.cols(); ++c) {
        states.push_back(format_ket(report.state_vectors.col(c), spin));
    }
    j["states"] = states;
    return j;
}

nlohmann::json to_json(const EntanglementReport& report, const DimerModel& model) {
    nlohmann::json j;
    j["spin"] = model.spin.to_string();
    j["j_kelvin"] = model.j_exchange;
    j["coefficient"] = report.coefficient;
    j["detected"] = report.detected;
    j["t_e_kelvin"] = nullable(report.t_e);
    j["x_e"] = nullable(report.x_e);
    j["diagnostic_t_e_kelvin"] = report.diagnostic_t_e;
    j["magnetic_order"] = model.j_exchange < 0.0 ? "antiferromagnetic" : "ferromagnetic";
    j["ground_state"] = to_json(report.ground_state, model.spin);
    return j;
}

void write_curve_csv(std::ostream& out, const WitnessCurve& curve) {
    out << "t_kelvin,chi,ew\n";
    for (const auto& p : curve.points) {
        out << format_double(p.t_kelvin) << ',' << format_double(p.chi_avg) << ','
            << format_double(p.ew) << '\n';
    }
}

std::string format_ket(const ComplexVector& psi, SpinValue spin, double cutoff) {
    const int d = spin.dimension();
    if (psi.size() != static_cast<Eigen::Index>(d) * d) {
        throw DimensionMismatch("state length does not match the dimer dimension");
    }

    Complex phase(1.0, 0.0);
    for (Eigen::Index k = 0; k < psi.size(); ++k) {
        if (std::abs(psi(k)) > cutoff) {
            phase = std::conj(psi(k)) / std::abs(psi(k));
            break;
        }
    }

    std::ostringstream out;
    out.precision(6);
    bool first = true;
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            const Complex amp = phase * psi(a * d + b);
            if (std::abs(amp) <= cutoff) continue;
            const std::string ket =
                "|" + format_m(spin.twice_s() - 2 * a) + "," + format_m(spin.twice_s() - 2 * b) + ">";
            if (std::abs(amp.imag()) > cutoff) {
                out << (first ? "" : " + ") << "(" << amp.real() << (amp.imag() < 0 ? "-" : "+")
                    << std::abs(amp.imag()) << "i)" << ket;
            } else if (first) {
                out << amp.real() << ket;
            } else {
                out << (amp.real() < 0 ? " - " : " + ") << std::abs(amp.real()) << ket;
            }
            first = false;
        }
    }
    return first ? "0" : out.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw IoError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

}  // namespace spindimer
