#include "spindimer/validation.hpp"

#include "spindimer/entanglement.hpp"
#include "spindimer/errors.hpp"
#include "spindimer/format.hpp"
#include "spindimer/thermo.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spindimer {

namespace {

// Sign of |m, -m> in the reference states, m_A descending.
const std::vector<std::vector<int>> kReferenceSigns = {
    {+1, -1},
    {+1, -1, +1},
    {+1, -1, +1, -1},
    {-1, +1, -1, +1, -1},
    {-1, +1, -1, +1, -1, +1},
};

std::string describe(double value) {
    std::ostringstream out;
    out.precision(10);
    out << value;
    return out.str();
}

std::vector<SpinValue> reference_spins() {
    return {SpinValue(1), SpinValue(2), SpinValue(3), SpinValue(4), SpinValue(5)};
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void add_coefficient_rows(std::vector<ValidationRow>& rows, const ValidationHooks& hooks) {
    const auto start = std::chrono::steady_clock::now();
    const auto spins = reference_spins();
    for (std::size_t i = 0; i < spins.size(); ++i) {
        const double c = critical_coefficient(spins[i]);
        const double expected = kReferenceCoefficients[i] + hooks.coefficient_offset;
        rows.push_back({"coefficients", "c_S S=" + spins[i].to_string(), std::abs(c - expected) <= 0.005,
                        "computed " + describe(c) + ", expected " + describe(expected)});
    }
    const double c_half = critical_coefficient(SpinValue(1));
    const double analytic = 1.0 / std::log(3.0);
    rows.push_back({"coefficients", "c_1/2 = 1/ln 3", std::abs(c_half - analytic) < 1e-10,
                    "difference " + describe(c_half - analytic)});
    const double seconds = elapsed_seconds(start);
    rows.push_back({"coefficients", "runtime < 1 s", seconds < 1.0, describe(seconds) + " s"});
}

void add_compound_rows(std::vector<ValidationRow>& rows) {
    const auto start = std::chrono::steady_clock::now();
    struct Compound {
        const char* name;
        int twice_s;
        double j;
        double t_e;
    };
    for (const auto& c : {Compound{"Cu", 1, -2.86, 2.60}, Compound{"Mn", 5, -3.83, 10.30}}) {
        const auto report = entanglement_temperature({SpinValue(c.twice_s), c.j, 2.0});
        const bool ok = report.detected && report.t_e && std::abs(*report.t_e - c.t_e) <= 0.01;
        rows.push_back({"compounds", std::string(c.name) + " T_e", ok,
                        "computed " + describe(report.t_e.value_or(NAN)) + " K, expected " +
                            describe(c.t_e) + " K"});
    }
    const auto fe = entanglement_temperature({SpinValue(4), 7.6, 2.0});
    rows.push_back({"compounds", "Fe not detected", !fe.detected && !fe.t_e &&
                                                     std::abs(fe.diagnostic_t_e - (-16.8)) <= 0.05,
                    "diagnostic " + describe(fe.diagnostic_t_e) + " K, expected -16.8 K"});
    const double seconds = elapsed_seconds(start);
    rows.push_back({"compounds", "runtime < 1 s", seconds < 1.0, describe(seconds) + " s"});
}

void add_series_rows(std::vector<ValidationRow>& rows) {
    const auto five_halves = boltzmann_series(SpinValue(5));
    const std::vector<long> num{1, 5, 14, 30, 55};
    const std::vector<long> den{1, 3, 5, 7, 9, 11};
    const std::vector<long> expo{0, 1, 3, 6, 10, 15};
    rows.push_back({"series", "S=5/2 numerator 1,5,14,30,55", five_halves.numerator == num, ""});
    rows.push_back({"series", "S=5/2 denominator 1,3,5,7,9,11", five_halves.denominator == den, ""});
    rows.push_back({"series", "S=5/2 exponents 0,1,3,6,10,15", five_halves.exponents == expo, ""});

    // e^x / (1 + 3 e^x) is 1/(3 + e^-x) term by term.
    const auto half = boltzmann_series(SpinValue(1));
    const bool exact = half.numerator == std::vector<long>{1} &&
                       half.denominator == std::vector<long>{1, 3} &&
                       half.exponents == std::vector<long>{0, 1};
    double worst = 0.0;
    for (double x = -20.0; x <= 20.0; x += 0.25) {
        const double ref = 1.0 / (3.0 + std::exp(-x));
        worst = std::max(worst, std::abs(f_closed(SpinValue(1), {x}) - ref) / ref);
    }
    rows.push_back({"series", "S=1/2 equals 1/(3+e^-x)", exact && worst < 1e-14,
                    "max relative deviation " + describe(worst)});

    // Truncation rule: each lower spin drops the last term of the next one up.
    bool truncation = true;
    for (int twice = 1; twice < 5; ++twice) {
        auto lower = boltzmann_series(SpinValue(twice));
        auto upper = boltzmann_series(SpinValue(twice + 1));
        upper.numerator.pop_back();
        upper.denominator.pop_back();
        upper.exponents.pop_back();
        truncation = truncation && lower.numerator == upper.numerator &&
                     lower.denominator == upper.denominator && lower.exponents == upper.exponents;
    }
    rows.push_back({"series", "truncation from S=5/2 down to 1/2", truncation, ""});
}

void add_oracle_rows(std::vector<ValidationRow>& rows) {
    const auto start = std::chrono::steady_clock::now();
    const auto magnitudes = temperature_grid(0.1, 10.0, 10);
    const auto temperatures = temperature_grid(0.05, 50.0, 20);
    for (const auto s : reference_spins()) {
        double worst = 0.0;
        for (const double mag : magnitudes) {
            for (const double sign : {-1.0, 1.0}) {
                const DimerModel model{s, sign * mag, 2.0};
                for (const double t : temperatures) {
                    const double diff = std::abs(f_closed(s, ReducedCoupling::from(model.j_exchange, t)) -
                                                 f_numeric(model, t));
                    worst = std::max(worst, diff);
                }
            }
        }
        rows.push_back({"oracle", "closed form vs diagonalization S=" + s.to_string(), worst < 1e-9,
                        "max |diff| " + describe(worst)});
    }
    const double seconds = elapsed_seconds(start);
    rows.push_back({"oracle", "runtime < 10 s", seconds < 10.0, describe(seconds) + " s"});
}

void add_witness_rows(std::vector<ValidationRow>& rows) {
    const auto grid = log_grid_per_decade(0.01, 100.0);
    for (const auto s : reference_spins()) {
        const DimerModel afm{s, -1.0, 2.0};
        const auto curve = witness_curve(afm, grid);
        int changes = 0;
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            changes += (curve.points[i - 1].ew < 0.0) != (curve.points[i].ew < 0.0);
        }
        const double ew_cold = curve.points.front().ew;
        rows.push_back({"witness", "AFM S=" + s.to_string() + " one zero, EW(|J|/100) < -0.999",
                        changes == 1 && ew_cold < -0.999,
                        std::to_string(changes) + " sign change(s), EW(|J|/100) = " + describe(ew_cold)});

        const DimerModel fm{s, 1.0, 2.0};
        double min_ew = INFINITY;
        for (const auto& p : witness_curve(fm, grid).points) min_ew = std::min(min_ew, p.ew);
        rows.push_back({"witness", "FM S=" + s.to_string() + " min EW > 0", min_ew > 0.0,
                        "min EW " + describe(min_ew)});
    }
}

void add_ground_state_rows(std::vector<ValidationRow>& rows) {
    for (const auto s : reference_spins()) {
        const auto gs = ground_state({s, -1.0, 2.0});
        const double f = gs.degeneracy == 1 ? fidelity(gs.state_vectors.col(0), reference_ground_state(s)) : 0.0;
        rows.push_back({"ground_state", "AFM S=" + s.to_string() + " matches reference state",
                        gs.degeneracy == 1 && 1.0 - std::sqrt(f) < 1e-10,
                        "overlap " + describe(std::sqrt(f))});
    }
}

}  // namespace

ComplexVector reference_ground_state(SpinValue s) {
    if (s.twice_s() > 5) throw InvalidArgument("reference ground states cover S = 1/2 .. 5/2 only");
    const auto& signs = kReferenceSigns[s.twice_s() - 1];
    const int d = s.dimension();
    ComplexVector psi = ComplexVector::Zero(d * d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = 0; k < d; ++k) {
        // |m, -m> with m = S - k: m_A index k, m_B index d - 1 - k.
        psi(k * d + (d - 1 - k)) = signs[k] * norm;
    }
    return psi;
}

double fidelity(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("fidelity of vectors of different length");
    return std::norm(a.dot(b));
}

std::vector<ValidationRow> run_validation(const ValidationHooks& hooks) {
    std::vector<ValidationRow> rows;
    add_coefficient_rows(rows, hooks);
    add_compound_rows(rows);
    add_series_rows(rows);
    add_oracle_rows(rows);
    add_witness_rows(rows);
    add_ground_state_rows(rows);
    return rows;
}

}  // namespace spindimer
