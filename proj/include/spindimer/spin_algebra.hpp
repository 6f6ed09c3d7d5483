#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace spindimer {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Spin quantum number S, stored as 2S so half-integers stay exact.
class SpinValue {
public:
    /// Throws InvalidArgument unless twice_s >= 1.
    explicit SpinValue(int twice_s);

    /// Accepts "5/2", "2.5", "2" and "0.5". Rejects anything that is not a
    /// positive multiple of 1/2.
    static SpinValue parse(std::string_view text);

    int twice_s() const noexcept { return twice_s_; }
    double value() const noexcept { return 0.5 * twice_s_; }
    /// Single-spin Hilbert space dimension 2S+1.
    int dimension() const noexcept { return twice_s_ + 1; }

    /// "1/2", "1", "3/2", ...
    std::string to_string() const;

    friend bool operator==(SpinValue, SpinValue) = default;

private:
    int twice_s_;
};

/// Spin-S matrices in the |m> basis with m = S, S-1, ..., -S (units of hbar).
struct SpinOperatorTriple {
    ComplexMatrix sx;
    ComplexMatrix sy;
    ComplexMatrix sz;
};

/// Isotropic Heisenberg dimer H = -J S_A.S_B - g mu_B B.(S_A + S_B).
///
/// Sign convention: J < 0 is antiferromagnetic, J > 0 ferromagnetic.
/// j_exchange is J/k_B in kelvin.
struct DimerModel {
    SpinValue spin;
    double j_exchange = 0.0;
    double g_factor = 2.0;

    /// Throws InvalidArgument if g <= 0 or J is not finite.
    void validate() const;
};

/// Magnetic field in tesla.
struct BField {
    double bx = 0.0;
    double by = 0.0;
    double bz = 0.0;
};

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;  ///< ascending
    ComplexMatrix eigenvectors;   ///< column k pairs with eigenvalues[k]
};

/// One total-spin multiplet of the zero-field dimer.
struct DimerLevel {
    double energy = 0.0;  ///< kelvin
    int total_spin_j = 0;
    int degeneracy = 0;
};

SpinOperatorTriple spin_operators(SpinValue s);

/// Kronecker product with `a` as the left factor.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Two-spin Hamiltonian in kelvin on the basis |m_A, m_B>, A the left
/// tensor factor, each m descending.
ComplexMatrix dimer_hamiltonian(const DimerModel& model, const BField& field = {});

enum class Axis { x, y, z };

/// S_alpha,tot = S_alpha (x) 1 + 1 (x) S_alpha on the dimer space.
ComplexMatrix total_spin_component(SpinValue s, Axis axis);

/// Dense Hermitian eigendecomposition. Throws NonHermitianInput if
/// max |H - H^dagger| exceeds 1e-9. No basis is promised inside degenerate
/// subspaces.
SpectralDecomposition eigendecompose(const ComplexMatrix& h);

/// Analytic zero-field levels E_j = -(J/2)[j(j+1) - 2S(S+1)], j = 0..2S,
/// in order of increasing j.
std::vector<DimerLevel> dimer_levels(const DimerModel& model);

}  // namespace spindimer
