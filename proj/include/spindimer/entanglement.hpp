#pragma once

#include "spindimer/spin_algebra.hpp"
#include "spindimer/thermo.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace spindimer {

/// Root of `f` on [lo, hi], where f(lo) and f(hi) have opposite signs.
///
/// Each iteration tries a secant step inside the current bracket and falls
/// back to bisection whenever the secant fails to at least halve the
/// bracket, so the width shrinks geometrically. Stops once the bracket is
/// narrower than `x_tol`. Throws InvalidArgument if the endpoints do not
/// bracket a sign change.
double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double x_tol = 1e-12, int max_iterations = 400);

/// Number of sign changes of f over `samples` points of [lo, hi].
int count_sign_changes(const std::function<double(double)>& f, std::span<const double> samples);

/// c_S with T_e = -c_S J: c_S = -1/x_e where x_e < 0 solves F^(S)(x) = S/3.
double critical_coefficient(SpinValue s);

struct GroundStateReport {
    double energy = 0.0;  ///< kelvin
    int degeneracy = 0;
    int total_spin_j = 0;
    /// Orthonormal basis of the ground manifold (columns).
    ComplexMatrix state_vectors;
    /// True only for a nondegenerate ground state with Schmidt rank > 1.
    /// A degenerate manifold contains product states and is reported false.
    bool is_entangled_pure_state = false;
};

struct EntanglementReport {
    std::optional<double> t_e;  ///< kelvin; present iff detected
    std::optional<double> x_e;  ///< J / T_e; present iff detected
    double coefficient = 0.0;   ///< c_S
    /// -c_S J regardless of sign. For J > 0 this is the unphysical negative
    /// temperature reported as a diagnostic.
    double diagnostic_t_e = 0.0;
    bool detected = false;
    GroundStateReport ground_state;
};

/// Throws ZeroExchange for J == 0.
EntanglementReport entanglement_temperature(const DimerModel& model);

/// Throws ZeroExchange for J == 0.
GroundStateReport ground_state(const DimerModel& model);

/// Schmidt coefficients of a pure state on C^dim_a (x) C^dim_b, descending.
Eigen::VectorXd schmidt_coefficients(const ComplexVector& psi, int dim_a, int dim_b);

enum class Subsystem { a, b };

/// Partial transpose on the chosen tensor factor (A is the left factor).
ComplexMatrix partial_transpose(const ComplexMatrix& rho, int dim_a, int dim_b,
                                Subsystem which = Subsystem::b);

struct NegativityResult {
    double negativity = 0.0;
    double min_pt_eigenvalue = 0.0;
};

/// Sum of |lambda| over the negative eigenvalues of rho^{T_B}. Throws
/// DimensionMismatch unless dim_a * dim_b matches rho.
NegativityResult negativity(const ComplexMatrix& rho, int dim_a, int dim_b);
NegativityResult negativity(const DensityMatrix& state);

struct ScanRow {
    double t_kelvin = 0.0;
    double ew = 0.0;
    double negativity = 0.0;
};

/// Model EW next to the negativity of the thermal state at each grid point.
std::vector<ScanRow> witness_vs_negativity_scan(const DimerModel& model,
                                                std::span<const double> t_grid);

/// Header `t_kelvin,ew,negativity`, one row per point, 17 significant digits.
void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows);

}  // namespace spindimer
