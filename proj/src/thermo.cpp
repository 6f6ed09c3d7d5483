#include "spindimer/thermo.hpp"

#include "spindimer/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spindimer {

namespace {

void require_positive_temperature(double t_kelvin) {
    if (!(t_kelvin > 0.0) || !std::isfinite(t_kelvin)) {
        throw NonPositiveTemperature("temperature must be positive and finite, got " +
                                     std::to_string(t_kelvin));
    }
}

// Shifted Boltzmann sums of the closed form. Every weight is e^{x (k_j - k_ref)}
// with k_ref the exponent that dominates for this sign of x, so no weight
// exceeds 1 and differences are formed before the multiplication by x.
struct ShiftedSums {
    double numerator = 0.0;
    double denominator = 0.0;
    double numerator_moment = 0.0;    // sum c_j k_j w_j
    double denominator_moment = 0.0;  // sum d_j k_j w_j
};

ShiftedSums shifted_sums(SpinValue s, double x) {
    const int jmax = s.twice_s();
    const double k_ref = x > 0.0 ? 0.5 * jmax * (jmax + 1.0) : 0.0;
    ShiftedSums sums;
    for (int j = 0; j <= jmax; ++j) {
        const double k = 0.5 * j * (j + 1.0);
        const double w = std::exp(x * (k - k_ref));
        const double c = j * (j + 1.0) * (2.0 * j + 1.0) / 6.0;
        const double d = 2.0 * j + 1.0;
        sums.numerator += c * w;
        sums.denominator += d * w;
        sums.numerator_moment += c * k * w;
        sums.denominator_moment += d * k * w;
    }
    return sums;
}

}  // namespace

ReducedCoupling ReducedCoupling::from(double j_kelvin, double t_kelvin) {
    require_positive_temperature(t_kelvin);
    return {j_kelvin / t_kelvin};
}

BoltzmannSeries boltzmann_series(SpinValue s) {
    BoltzmannSeries series;
    for (long j = 0; j <= s.twice_s(); ++j) {
        if (j > 0) series.numerator.push_back(j * (j + 1) * (2 * j + 1) / 6);
        series.denominator.push_back(2 * j + 1);
        series.exponents.push_back(j * (j + 1) / 2);
    }
    return series;
}

double f_closed(SpinValue s, ReducedCoupling x) {
    const auto sums = shifted_sums(s, x.x);
    return sums.numerator / sums.denominator;
}

double f_closed_derivative(SpinValue s, ReducedCoupling x) {
    const auto sums = shifted_sums(s, x.x);
    const double f = sums.numerator / sums.denominator;
    return sums.numerator_moment / sums.denominator - f * sums.denominator_moment / sums.denominator;
}

DensityMatrix thermal_density_matrix(const DimerModel& model, double t_kelvin) {
    require_positive_temperature(t_kelvin);
    const auto spectrum = eigendecompose(dimer_hamiltonian(model));
    const double e_min = spectrum.eigenvalues.minCoeff();

    const Eigen::VectorXd weights =
        (-(spectrum.eigenvalues.array() - e_min) / t_kelvin).exp().matrix();
    const double z = weights.sum();

    const auto& v = spectrum.eigenvectors;
    ComplexMatrix rho = v * (weights / z).cast<Complex>().asDiagonal() * v.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {std::move(rho), model.spin};
}

double spin_fluctuation(const DimerModel& model, double t_kelvin, Axis axis) {
    const auto state = thermal_density_matrix(model, t_kelvin);
    const ComplexMatrix s_tot = total_spin_component(model.spin, axis);
    return (state.rho * s_tot * s_tot).trace().real();
}

double f_numeric(const DimerModel& model, double t_kelvin) {
    return 0.5 * spin_fluctuation(model, t_kelvin, Axis::z);
}

Susceptibility susceptibility(const DimerModel& model, double t_kelvin,
                              const DimerEnsemble& ensemble, UnitSystem units) {
    model.validate();
    const auto x = ReducedCoupling::from(model.j_exchange, t_kelvin);
    const double g2 = model.g_factor * model.g_factor;
    const double chi =
        2.0 * ensemble.n_dimers * g2 * moment_constant(units) * f_closed(model.spin, x) / t_kelvin;
    return {chi, units};
}

double susceptibility_d_exchange(const DimerModel& model, double t_kelvin,
                                 const DimerEnsemble& ensemble, UnitSystem units) {
    model.validate();
    const auto x = ReducedCoupling::from(model.j_exchange, t_kelvin);
    const double g2 = model.g_factor * model.g_factor;
    return 2.0 * ensemble.n_dimers * g2 * moment_constant(units) *
           f_closed_derivative(model.spin, x) / (t_kelvin * t_kelvin);
}

double witness(SpinValue s, double g_factor, double t_kelvin, Susceptibility chi_avg,
               const DimerEnsemble& ensemble, UnitSystem constants) {
    require_positive_temperature(t_kelvin);
    if (chi_avg.units != constants) {
        throw UnitMismatch("susceptibility is in " + std::string(to_string(chi_avg.units)) +
                           " units but the " + std::string(to_string(constants)) +
                           " constant set was selected");
    }
    if (!(g_factor > 0.0)) throw InvalidArgument("g factor must be positive");
    if (!(chi_avg.value >= 0.0)) throw InvalidArgument("susceptibility must be non-negative");
    if (!(ensemble.n_spins() > 0.0)) throw InvalidArgument("ensemble must contain spins");

    const double separable_bound = g_factor * g_factor * moment_constant(constants) *
                                   ensemble.n_spins() * s.value() / (3.0 * t_kelvin);
    return chi_avg.value / separable_bound - 1.0;
}

double witness_from_f(SpinValue s, double f_value) { return 3.0 * f_value / s.value() - 1.0; }

void validate_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) throw InvalidArgument("temperature grid is empty");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i])) {
            throw NonPositiveTemperature("grid temperature " + std::to_string(t_grid[i]) +
                                         " is not positive");
        }
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
            throw InvalidArgument("temperature grid must be strictly increasing");
        }
    }
}

WitnessCurve witness_curve(const DimerModel& model, std::span<const double> t_grid,
                           const DimerEnsemble& ensemble, UnitSystem units) {
    model.validate();
    validate_grid(t_grid);

    WitnessCurve curve{.points = {},
                       .spin = model.spin,
                       .j_exchange = model.j_exchange,
                       .g_factor = model.g_factor,
                       .source = CurveSource::model,
                       .units = units,
                       .assumed_isotropic = false,
                       .fit = std::nullopt};
    curve.points.reserve(t_grid.size());
    for (const double t : t_grid) {
        const auto chi = susceptibility(model, t, ensemble, units);
        curve.points.push_back(
            {t, chi.value, witness(model.spin, model.g_factor, t, chi, ensemble, units)});
    }
    return curve;
}

std::vector<double> temperature_grid(double tmin, double tmax, int points, GridSpacing spacing) {
    if (points < 1) throw InvalidArgument("grid needs at least one point");
    if (!(tmin > 0.0)) throw NonPositiveTemperature("tmin must be positive");
    if (points == 1) return {tmin};
    if (!(tmax > tmin) || !std::isfinite(tmax)) {
        throw InvalidArgument("tmax must exceed tmin");
    }

    std::vector<double> grid(points);
    const double n = points - 1.0;
    for (int i = 0; i < points; ++i) {
        grid[i] = spacing == GridSpacing::linear
                      ? tmin + (tmax - tmin) * (i / n)
                      : std::exp(std::log(tmin) + (std::log(tmax) - std::log(tmin)) * (i / n));
    }
    grid.front() = tmin;
    grid.back() = tmax;
    return grid;
}

std::vector<double> log_grid_per_decade(double tmin, double tmax, int points_per_decade) {
    if (points_per_decade < 1) throw InvalidArgument("points_per_decade must be positive");
    if (!(tmin > 0.0)) throw NonPositiveTemperature("tmin must be positive");
    if (!(tmax > tmin)) throw InvalidArgument("tmax must exceed tmin");
    const int points =
        1 + static_cast<int>(std::ceil(points_per_decade * std::log10(tmax / tmin)));
    return temperature_grid(tmin, tmax, std::max(points, 2), GridSpacing::log);
}

}  // namespace spindimer
