#include <doctest.h>

#include "spindimer/entanglement.hpp"
#include "spindimer/errors.hpp"
#include "spindimer/thermo.hpp"

#include <cmath>
#include <numbers>

using namespace spindimer;

namespace {

const SpinValue kHalf(1);
const SpinValue kFiveHalves(5);

std::vector<SpinValue> table_spins() {
    return {SpinValue(1), SpinValue(2), SpinValue(3), SpinValue(4), SpinValue(5)};
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("closed form reproduces the reference coefficient tables") {
    const auto s52 = boltzmann_series(kFiveHalves);
    CHECK(s52.numerator == std::vector<long>{1, 5, 14, 30, 55});
    CHECK(s52.denominator == std::vector<long>{1, 3, 5, 7, 9, 11});
    CHECK(s52.exponents == std::vector<long>{0, 1, 3, 6, 10, 15});

    const auto s12 = boltzmann_series(kHalf);
    CHECK(s12.numerator == std::vector<long>{1});
    CHECK(s12.denominator == std::vector<long>{1, 3});
    CHECK(s12.exponents == std::vector<long>{0, 1});

    for (double x = -30.0; x <= 30.0; x += 0.5) {
        CHECK(f_closed(kHalf, {x}) == doctest::Approx(1.0 / (3.0 + std::exp(-x))).epsilon(1e-14));
    }
}

TEST_CASE("closed form reference values") {
    CHECK(f_closed(kHalf, {0.0}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(f_closed(kHalf, {-std::log(3.0)}) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(f_closed(kFiveHalves, {0.0}) == doctest::Approx(35.0 / 12.0).epsilon(1e-14));

    // F(0) = S(S+1)/3 in general.
    for (int twice = 1; twice <= 12; ++twice) {
        const SpinValue s(twice);
        CHECK(f_closed(s, {0.0}) == doctest::Approx(s.value() * (s.value() + 1.0) / 3.0).epsilon(1e-13));
    }
}

TEST_CASE("closed form is finite and saturates for extreme couplings") {
    for (const auto s : table_spins()) {
        const auto series = boltzmann_series(s);
        const double ferro_limit =
            static_cast<double>(series.numerator.back()) / static_cast<double>(series.denominator.back());
        CHECK(std::abs(f_closed(s, {700.0}) - ferro_limit) < 1e-12);
        CHECK(std::abs(f_closed(s, {1e6}) - ferro_limit) < 1e-12);
        CHECK(f_closed(s, {-700.0}) >= 0.0);
        CHECK(f_closed(s, {-700.0}) < 1e-300);
        CHECK(std::isfinite(f_closed(s, {-1e300})));
        CHECK(std::isfinite(f_closed(s, {1e300})));
        for (double x = -50.0; x <= 50.0; x += 1.0) {
            const double f = f_closed(s, {x});
            CHECK(f > 0.0);
            CHECK(f <= ferro_limit + 1e-15);
        }
    }
}

TEST_CASE("closed-form derivative agrees with central differences") {
    for (const auto s : table_spins()) {
        for (double x = -6.0; x <= 6.0; x += 0.75) {
            const double h = 1e-5;
            const double fd = (f_closed(s, {x + h}) - f_closed(s, {x - h})) / (2.0 * h);
            CHECK(f_closed_derivative(s, {x}) == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("diagonalization oracle") {
    SUBCASE("infinite temperature") {
        CHECK(std::abs(f_numeric({kHalf, -1.0, 2.0}, 1e8) - 0.25) < 1e-7);
    }
    SUBCASE("two-qubit threshold t = 1/ln 3") {
        CHECK(std::abs(f_numeric({kHalf, -1.0, 2.0}, 1.0 / std::log(3.0)) - 1.0 / 6.0) < 1e-10);
    }
    SUBCASE("S=5/2 ferromagnet") {
        CHECK(std::abs(f_numeric({kFiveHalves, 2.0, 2.0}, 1.0) - f_closed(kFiveHalves, {2.0})) < 1e-10);
    }
    SUBCASE("property: closed form on a 20x20 log grid") {
        const auto magnitudes = temperature_grid(0.1, 10.0, 10);
        const auto temperatures = temperature_grid(0.05, 50.0, 20);
        for (const auto s : table_spins()) {
            double worst = 0.0;
            for (const double mag : magnitudes) {
                for (const double sign : {-1.0, 1.0}) {
                    const DimerModel model{s, sign * mag, 2.0};
                    for (const double t : temperatures) {
                        worst = std::max(worst, std::abs(f_closed(s, ReducedCoupling::from(model.j_exchange, t)) -
                                                         f_numeric(model, t)));
                    }
                }
            }
            CAPTURE(s.to_string());
            CHECK(worst < 1e-9);
        }
    }
    CHECK_THROWS_AS(f_numeric({kHalf, -1.0, 2.0}, 0.0), NonPositiveTemperature);
    CHECK_THROWS_AS(f_numeric({kHalf, -1.0, 2.0}, -1.0), NonPositiveTemperature);
}

TEST_CASE("thermal density matrix") {
    SUBCASE("valid state for every spin and temperature") {
        for (const auto s : table_spins()) {
            for (const double t : {0.01, 0.3, 1.0, 7.0, 1e4}) {
                const auto state = thermal_density_matrix({s, -1.3, 2.0}, t);
                CHECK(std::abs(state.rho.trace() - Complex(1.0, 0.0)) < 1e-12);
                CHECK(max_abs(state.rho - state.rho.adjoint()) < 1e-12);
                CHECK(eigendecompose(state.rho).eigenvalues.minCoeff() > -1e-10);
            }
        }
    }
    SUBCASE("infinite temperature gives the maximally mixed state") {
        const auto state = thermal_density_matrix({kFiveHalves, -1.0, 2.0}, 1e8);
        CHECK(max_abs(state.rho - ComplexMatrix::Identity(36, 36) / 36.0) < 1e-6);
    }
    SUBCASE("low temperature antiferromagnet collapses onto the singlet") {
        const auto state = thermal_density_matrix({kHalf, -1.0, 2.0}, 0.01);
        ComplexVector singlet = ComplexVector::Zero(4);
        singlet(1) = 1.0 / std::sqrt(2.0);
        singlet(2) = -1.0 / std::sqrt(2.0);
        const ComplexMatrix diff = state.rho - singlet * singlet.adjoint();
        const auto eig = eigendecompose(diff).eigenvalues;
        CHECK(0.5 * eig.cwiseAbs().sum() < 1e-10);
    }
    CHECK_THROWS_AS(thermal_density_matrix({kHalf, -1.0, 2.0}, 0.0), NonPositiveTemperature);
}

TEST_CASE("isotropy of the zero-field fluctuations") {
    for (const auto s : table_spins()) {
        for (const double t : {0.2, 1.0, 5.0}) {
            const DimerModel model{s, -1.0, 2.0};
            const double fx = spin_fluctuation(model, t, Axis::x);
            const double fy = spin_fluctuation(model, t, Axis::y);
            const double fz = spin_fluctuation(model, t, Axis::z);
            CHECK(std::abs(fx - fz) < 1e-10);
            CHECK(std::abs(fy - fz) < 1e-10);
        }
    }
}

TEST_CASE("susceptibility") {
    const auto chi = susceptibility({kHalf, 0.0, 2.0}, 1.0, {1.0}, UnitSystem::reduced);
    CHECK(chi.value == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(chi.units == UnitSystem::reduced);
    // Independent route through the diagonalization oracle.
    CHECK(chi.value == doctest::Approx(2.0 * 4.0 * f_numeric({kHalf, 0.0, 2.0}, 1.0)).epsilon(1e-12));

    for (const auto s : table_spins()) {
        const double g = 2.05;
        const double t = 1e7;
        const double curie = 2.0 * 3.0 * g * g * s.value() * (s.value() + 1.0) / 3.0;
        CHECK(susceptibility({s, -1.0, g}, t, {3.0}).value * t == doctest::Approx(curie).epsilon(1e-6));
        CHECK(susceptibility({s, -1.0, g}, 0.005).value < 1e-30);
    }

    const auto reduced = susceptibility({kFiveHalves, -3.0, 2.0}, 4.0, {1.0}, UnitSystem::reduced);
    const auto cgs = susceptibility({kFiveHalves, -3.0, 2.0}, 4.0, {1.0}, UnitSystem::cgs_molar);
    CHECK(cgs.value == doctest::Approx(reduced.value * constants::molar_curie_constant).epsilon(1e-14));

    CHECK_THROWS_AS(susceptibility({kHalf, -1.0, 2.0}, 0.0), NonPositiveTemperature);
}

TEST_CASE("susceptibility derivative in J agrees with central differences") {
    for (const auto s : table_spins()) {
        const double j = -2.2;
        const double t = 3.1;
        const double h = 1e-6;
        const auto chi = [&](double jj) {
            return susceptibility({s, jj, 2.1}, t, {1.0}, UnitSystem::cgs_molar).value;
        };
        const double fd = (chi(j + h) - chi(j - h)) / (2.0 * h);
        CHECK(susceptibility_d_exchange({s, j, 2.1}, t, {1.0}, UnitSystem::cgs_molar) ==
              doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("witness from model susceptibility collapses to 3F/S - 1") {
    for (const auto s : table_spins()) {
        for (const auto units : {UnitSystem::reduced, UnitSystem::cgs_molar}) {
            for (const double t : {0.1, 0.9, 4.0, 60.0}) {
                const DimerModel model{s, -1.7, 2.3};
                const DimerEnsemble ens{0.5};
                const auto chi = susceptibility(model, t, ens, units);
                const double ew = witness(s, model.g_factor, t, chi, ens, units);
                const double f = f_closed(s, ReducedCoupling::from(model.j_exchange, t));
                CHECK(std::abs(ew - witness_from_f(s, f)) < 1e-12);
            }
        }
    }
}

TEST_CASE("witness reference values") {
    SUBCASE("x = 0 gives EW = S") {
        for (const auto s : table_spins()) {
            const DimerModel free{s, 0.0, 2.0};
            const auto chi = susceptibility(free, 2.0);
            CHECK(witness(s, 2.0, 2.0, chi, {}, UnitSystem::reduced) == doctest::Approx(s.value()).epsilon(1e-13));
        }
    }
    SUBCASE("antiferromagnet at low temperature approaches -1") {
        for (const auto s : table_spins()) {
            const DimerModel model{s, -1.0, 2.0};
            double previous = 0.0;
            for (const double t : {0.3, 0.1, 0.03, 0.01}) {
                const auto chi = susceptibility(model, t);
                const double ew = witness(s, 2.0, t, chi, {}, UnitSystem::reduced);
                if (t < 0.3) CHECK(ew <= previous);
                previous = ew;
            }
            CHECK(previous > -1.0 - 1e-15);
            CHECK(previous < -1.0 + 1e-4);
        }
    }
    SUBCASE("EW vanishes at T_e") {
        for (const auto s : table_spins()) {
            const DimerModel model{s, -2.0, 2.0};
            const double t_e = 2.0 * critical_coefficient(s);
            const auto chi = susceptibility(model, t_e);
            CHECK(std::abs(witness(s, 2.0, t_e, chi, {}, UnitSystem::reduced)) < 1e-10);
        }
    }
    SUBCASE("unit mismatch and bad arguments") {
        const auto chi = susceptibility({kHalf, -1.0, 2.0}, 1.0, {}, UnitSystem::reduced);
        CHECK_THROWS_AS(witness(kHalf, 2.0, 1.0, chi, {}, UnitSystem::cgs_molar), UnitMismatch);
        CHECK_THROWS_AS(witness(kHalf, 2.0, 0.0, chi, {}, UnitSystem::reduced), NonPositiveTemperature);
        CHECK_THROWS_AS(witness(kHalf, 2.0, 1.0, {-1.0, UnitSystem::reduced}, {}, UnitSystem::reduced),
                        InvalidArgument);
        CHECK_THROWS_AS(witness(kHalf, 2.0, 1.0, chi, {0.0}, UnitSystem::reduced), InvalidArgument);
    }
}

TEST_CASE("witness scale invariance in (J, T)") {
    for (const auto s : table_spins()) {
        for (const double c : {0.1, 3.0, 100.0}) {
            for (const double t : {0.4, 1.0, 2.5}) {
                const double base = witness_curve({s, -1.3, 2.0}, std::vector<double>{t}).points[0].ew;
                const double scaled = witness_curve({s, -1.3 * c, 2.0}, std::vector<double>{t * c}).points[0].ew;
                CHECK(std::abs(base - scaled) < 1e-12);
            }
        }
    }
}

TEST_CASE("EW < 0 exactly when F < S/3") {
    const auto grid = log_grid_per_decade(0.01, 100.0, 50);
    for (const auto s : table_spins()) {
        for (const double j : {-1.0, 1.0}) {
            const auto curve = witness_curve({s, j, 2.0}, grid);
            for (const auto& p : curve.points) {
                const double f = f_closed(s, ReducedCoupling::from(j, p.t_kelvin));
                CHECK((p.ew < 0.0) == (f < s.value() / 3.0));
            }
        }
    }
}

TEST_CASE("witness curves") {
    SUBCASE("S=1/2 antiferromagnet crosses once at 1/ln 3") {
        const auto grid = temperature_grid(0.02, 5.0, 500, GridSpacing::linear);
        const auto curve = witness_curve({kHalf, -1.0, 2.0}, grid);
        int changes = 0;
        double crossing = 0.0;
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            if ((curve.points[i - 1].ew < 0.0) != (curve.points[i].ew < 0.0)) {
                ++changes;
                crossing = curve.points[i].t_kelvin;
            }
        }
        CHECK(changes == 1);
        const double spacing = grid[1] - grid[0];
        CHECK(std::abs(crossing - 1.0 / std::log(3.0)) <= spacing);
        CHECK(std::abs(crossing - 0.9102) <= spacing);
        CHECK(curve.source == CurveSource::model);
        CHECK(curve.spin == kHalf);
    }
    SUBCASE("ferromagnets never go below zero") {
        const auto grid = temperature_grid(0.02, 50.0, 800);
        for (const auto s : table_spins()) {
            for (const auto& p : witness_curve({s, 1.0, 2.0}, grid).points) CHECK(p.ew > 0.0);
        }
    }
    SUBCASE("high temperature limit EW -> S") {
        const auto curve = witness_curve({kFiveHalves, -1.0, 2.0}, std::vector<double>{1e6});
        CHECK(curve.points[0].ew == doctest::Approx(2.5).epsilon(1e-5));
    }
    SUBCASE("grid validation") {
        CHECK_THROWS_AS(witness_curve({kHalf, -1.0, 2.0}, std::vector<double>{}), InvalidArgument);
        CHECK_THROWS_AS(witness_curve({kHalf, -1.0, 2.0}, std::vector<double>{1.0, 1.0}), InvalidArgument);
        CHECK_THROWS_AS(witness_curve({kHalf, -1.0, 2.0}, std::vector<double>{-1.0, 1.0}), NonPositiveTemperature);
    }
}

TEST_CASE("temperature grids") {
    CHECK(temperature_grid(0.5, 2.0, 1) == std::vector<double>{0.5});
    const auto lin = temperature_grid(1.0, 3.0, 5, GridSpacing::linear);
    CHECK(lin.size() == 5);
    CHECK(lin[1] == doctest::Approx(1.5));
    const auto lg = temperature_grid(0.1, 10.0, 3, GridSpacing::log);
    CHECK(lg[1] == doctest::Approx(1.0));
    CHECK(lg.back() == 10.0);
    CHECK(log_grid_per_decade(1.0, 100.0, 400).size() == 801);
    CHECK_THROWS_AS(temperature_grid(0.0, 1.0, 3), NonPositiveTemperature);
    CHECK_THROWS_AS(temperature_grid(2.0, 1.0, 3), InvalidArgument);
    CHECK_THROWS_AS(temperature_grid(1.0, 2.0, 0), InvalidArgument);
}
