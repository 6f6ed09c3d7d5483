#include <doctest.h>

#include "spindimer/errors.hpp"
#include "spindimer/spin_algebra.hpp"
#include "spindimer/units.hpp"

#include <algorithm>
#include <random>

using namespace spindimer;

namespace {

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<double> sorted_eigenvalues(const ComplexMatrix& h) {
    const auto spec = eigendecompose(h);
    return {spec.eigenvalues.data(), spec.eigenvalues.data() + spec.eigenvalues.size()};
}

// Expand the analytic levels into a sorted list with multiplicities.
std::vector<double> expanded_levels(const DimerModel& model) {
    std::vector<double> out;
    for (const auto& level : dimer_levels(model)) out.insert(out.end(), level.degeneracy, level.energy);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("SpinValue parsing keeps 2S exact") {
    CHECK(SpinValue::parse("1/2").twice_s() == 1);
    CHECK(SpinValue::parse("0.5").twice_s() == 1);
    CHECK(SpinValue::parse("5/2").twice_s() == 5);
    CHECK(SpinValue::parse("2").twice_s() == 4);
    CHECK(SpinValue::parse("2/1").twice_s() == 4);
    CHECK(SpinValue::parse(" 3/2 ").dimension() == 4);
    CHECK(SpinValue(3).to_string() == "3/2");
    CHECK(SpinValue(4).to_string() == "2");

    CHECK_THROWS_AS(SpinValue(0), InvalidArgument);
    CHECK_THROWS_AS(SpinValue::parse("0"), InvalidArgument);
    CHECK_THROWS_AS(SpinValue::parse("1/3"), InvalidArgument);
    CHECK_THROWS_AS(SpinValue::parse("0.3"), InvalidArgument);
    CHECK_THROWS_AS(SpinValue::parse("-1/2"), InvalidArgument);
    CHECK_THROWS_AS(SpinValue::parse("half"), InvalidArgument);
}

TEST_CASE("spin-1/2 sz is diag(1/2, -1/2)") {
    const auto ops = spin_operators(SpinValue(1));
    CHECK(ops.sz(0, 0).real() == doctest::Approx(0.5));
    CHECK(ops.sz(1, 1).real() == doctest::Approx(-0.5));
    CHECK(std::abs(ops.sz(0, 1)) == 0.0);
}

TEST_CASE("spin operators satisfy su(2) for 2S = 1..10") {
    const Complex i_unit(0.0, 1.0);
    for (int twice = 1; twice <= 10; ++twice) {
        CAPTURE(twice);
        const SpinValue s(twice);
        const auto ops = spin_operators(s);
        const double spin = s.value();
        const auto id = ComplexMatrix::Identity(s.dimension(), s.dimension());

        CHECK(ops.sx.rows() == s.dimension());
        CHECK(max_abs(ops.sx * ops.sy - ops.sy * ops.sx - i_unit * ops.sz) < 1e-12);
        CHECK(max_abs(ops.sy * ops.sz - ops.sz * ops.sy - i_unit * ops.sx) < 1e-12);
        CHECK(max_abs(ops.sz * ops.sx - ops.sx * ops.sz - i_unit * ops.sy) < 1e-12);
        CHECK(max_abs(ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz - spin * (spin + 1.0) * id) < 1e-12);
        CHECK(max_abs(ops.sx - ops.sx.adjoint()) < 1e-15);
        CHECK(max_abs(ops.sy - ops.sy.adjoint()) < 1e-15);

        for (int k = 0; k < s.dimension(); ++k) CHECK(ops.sz(k, k).real() == doctest::Approx(spin - k));
    }
}

TEST_CASE("spin-1 Casimir is 2 I") {
    const auto ops = spin_operators(SpinValue(2));
    const ComplexMatrix c = ops.sx * ops.sx + ops.sy * ops.sy + ops.sz * ops.sz;
    CHECK(max_abs(c - 2.0 * ComplexMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("kron places the left factor on the outer index") {
    ComplexMatrix a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0, 1, 1, 0;
    const auto k = kron(a, b);
    CHECK(k.rows() == 4);
    CHECK(k(0, 1).real() == 1.0);
    CHECK(k(2, 1).real() == 3.0);
    CHECK(k(2, 3).real() == 4.0);
    CHECK(k(1, 2).real() == 2.0);
}

TEST_CASE("spin-1/2 antiferromagnetic dimer levels") {
    const DimerModel model{SpinValue(1), -1.0, 2.0};
    const auto eig = sorted_eigenvalues(dimer_hamiltonian(model));
    const std::vector<double> expected{-0.75, 0.25, 0.25, 0.25};
    for (std::size_t i = 0; i < 4; ++i) CHECK(eig[i] == doctest::Approx(expected[i]).epsilon(1e-12));

    const auto levels = dimer_levels(model);
    REQUIRE(levels.size() == 2);
    CHECK(levels[0].energy == doctest::Approx(-0.75));
    CHECK(levels[0].total_spin_j == 0);
    CHECK(levels[0].degeneracy == 1);
    CHECK(levels[1].energy == doctest::Approx(0.25));
    CHECK(levels[1].total_spin_j == 1);
    CHECK(levels[1].degeneracy == 3);
}

TEST_CASE("zero exchange at zero field is the zero matrix") {
    for (int twice = 1; twice <= 5; ++twice) {
        const auto h = dimer_hamiltonian({SpinValue(twice), 0.0, 2.0});
        CHECK(max_abs(h) == 0.0);
        for (const auto& level : dimer_levels({SpinValue(twice), 0.0, 2.0})) CHECK(level.energy == 0.0);
    }
}

TEST_CASE("pure Zeeman splitting of a spin-1/2 pair") {
    const double g = 2.0;
    const double bz = 1.5;
    const auto eig = sorted_eigenvalues(dimer_hamiltonian({SpinValue(1), 0.0, g}, {0.0, 0.0, bz}));
    const double unit = g * constants::bohr_magneton_over_boltzmann * bz;
    // -g mu_B B m for m = 1, 0, 0, -1, ascending.
    const std::vector<double> expected{-unit, 0.0, 0.0, unit};
    for (std::size_t i = 0; i < 4; ++i) CHECK(eig[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("S=5/2 exponent differences are j(j+1)/2 in units of |J|") {
    const auto levels = dimer_levels({SpinValue(5), -1.0, 2.0});
    REQUIRE(levels.size() == 6);
    const std::vector<double> expected{0, 1, 3, 6, 10, 15};
    for (std::size_t j = 0; j < levels.size(); ++j) {
        CHECK(levels[j].energy - levels[0].energy == doctest::Approx(expected[j]));
    }
    int total = 0;
    for (const auto& l : levels) total += l.degeneracy;
    CHECK(total == 36);
}

TEST_CASE("property: exact diagonalization reproduces the analytic levels") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> j_dist(-10.0, 10.0);
    for (int twice = 1; twice <= 5; ++twice) {
        for (int trial = 0; trial < 20; ++trial) {
            const DimerModel model{SpinValue(twice), j_dist(rng), 2.0};
            CAPTURE(twice);
            CAPTURE(model.j_exchange);
            const auto numeric = sorted_eigenvalues(dimer_hamiltonian(model));
            const auto analytic = expanded_levels(model);
            REQUIRE(numeric.size() == analytic.size());
            for (std::size_t k = 0; k < numeric.size(); ++k) CHECK(std::abs(numeric[k] - analytic[k]) < 1e-9);
        }
    }
}

TEST_CASE("H commutes with total S_z for a z field, and the exchange part is traceless") {
    for (int twice = 1; twice <= 5; ++twice) {
        const SpinValue s(twice);
        const DimerModel model{s, -2.3, 2.1};
        const auto h = dimer_hamiltonian(model, {0.0, 0.0, 0.7});
        const auto sz = total_spin_component(s, Axis::z);
        CHECK(max_abs(h * sz - sz * h) < 1e-12);
        CHECK(std::abs(dimer_hamiltonian(model).trace()) < 1e-10);
    }
}

TEST_CASE("single-axis exchange terms share one spectrum") {
    for (int twice = 1; twice <= 5; ++twice) {
        const auto ops = spin_operators(SpinValue(twice));
        const auto ex = sorted_eigenvalues(kron(ops.sx, ops.sx));
        const auto ey = sorted_eigenvalues(kron(ops.sy, ops.sy));
        const auto ez = sorted_eigenvalues(kron(ops.sz, ops.sz));
        for (std::size_t k = 0; k < ex.size(); ++k) {
            CHECK(std::abs(ex[k] - ez[k]) < 1e-10);
            CHECK(std::abs(ey[k] - ez[k]) < 1e-10);
        }
    }
}

TEST_CASE("eigendecompose contract") {
    SUBCASE("identity") {
        const auto spec = eigendecompose(ComplexMatrix::Identity(4, 4));
        for (int k = 0; k < 4; ++k) CHECK(spec.eigenvalues(k) == doctest::Approx(1.0));
    }
    SUBCASE("ascending order") {
        ComplexMatrix d = ComplexMatrix::Zero(2, 2);
        d(0, 0) = 2.0;
        d(1, 1) = 1.0;
        const auto spec = eigendecompose(d);
        CHECK(spec.eigenvalues(0) == doctest::Approx(1.0));
        CHECK(spec.eigenvalues(1) == doctest::Approx(2.0));
    }
    SUBCASE("reconstruction and orthonormality on the S=5/2 Hamiltonian") {
        const auto h = dimer_hamiltonian({SpinValue(5), 1.7, 2.0}, {0.3, -0.2, 0.5});
        const auto spec = eigendecompose(h);
        const auto& v = spec.eigenvectors;
        const ComplexMatrix rebuilt = v * spec.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint();
        CHECK(max_abs(rebuilt - h) < 1e-10);
        CHECK(max_abs(v.adjoint() * v - ComplexMatrix::Identity(36, 36)) < 1e-10);
        for (Eigen::Index k = 1; k < spec.eigenvalues.size(); ++k) {
            CHECK(spec.eigenvalues(k) >= spec.eigenvalues(k - 1));
        }
    }
    SUBCASE("spin-1/2 singlet ground vector") {
        const auto spec = eigendecompose(dimer_hamiltonian({SpinValue(1), -1.0, 2.0}));
        ComplexVector singlet = ComplexVector::Zero(4);
        singlet(1) = 1.0 / std::sqrt(2.0);   // |1/2,-1/2>
        singlet(2) = -1.0 / std::sqrt(2.0);  // |-1/2,1/2>
        CHECK(std::abs(spec.eigenvectors.col(0).dot(singlet)) > 1.0 - 1e-10);
    }
    SUBCASE("non-Hermitian input is rejected") {
        ComplexMatrix m = ComplexMatrix::Identity(3, 3);
        m(0, 2) = 1e-6;
        CHECK_THROWS_AS(eigendecompose(m), NonHermitianInput);
        m(0, 2) = 1e-11;
        CHECK_NOTHROW(eigendecompose(m));
    }
}

TEST_CASE("model validation") {
    CHECK_THROWS_AS(dimer_hamiltonian({SpinValue(1), -1.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(dimer_hamiltonian({SpinValue(1), -1.0, -2.0}), InvalidArgument);
    CHECK_THROWS_AS(dimer_hamiltonian({SpinValue(1), NAN, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(dimer_hamiltonian({SpinValue(1), -1.0, 2.0}, {INFINITY, 0, 0}), InvalidArgument);
}
