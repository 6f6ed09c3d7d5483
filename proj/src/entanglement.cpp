#include "spindimer/entanglement.hpp"

#include "spindimer/errors.hpp"
#include "spindimer/format.hpp"

#include <cmath>
#include <string>

namespace spindimer {

namespace {

// Degenerate levels of the dimer are separated by at least |J|, so this
// only has to absorb eigensolver roundoff.
constexpr double kDegeneracyTolerance = 1e-9;

// Schmidt coefficients below this count as zero when deciding rank.
constexpr double kSchmidtTolerance = 1e-10;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi,
                           double x_tol, int max_iterations) {
    double a = lo;
    double b = hi;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (sign_of(fa) == sign_of(fb)) {
        throw InvalidArgument("root finder endpoints do not bracket a sign change");
    }

    for (int it = 0; it < max_iterations && std::abs(b - a) > x_tol; ++it) {
        const double width = std::abs(b - a);

        double c = b - fb * (b - a) / (fb - fa);
        const double lower = std::min(a, b);
        const double upper = std::max(a, b);
        if (!(c > lower && c < upper)) c = 0.5 * (a + b);

        double fc = f(c);
        if (fc == 0.0) return c;
        if (sign_of(fc) == sign_of(fa)) {
            a = c;
            fa = fc;
        } else {
            b = c;
            fb = fc;
        }

        if (std::abs(b - a) > 0.5 * width) {
            const double m = 0.5 * (a + b);
            const double fm = f(m);
            if (fm == 0.0) return m;
            if (sign_of(fm) == sign_of(fa)) {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
        }
    }
    // Return the endpoint with the smaller residual.
    return std::abs(fa) < std::abs(fb) ? a : b;
}

int count_sign_changes(const std::function<double(double)>& f, std::span<const double> samples) {
    int changes = 0;
    int previous = 0;
    for (const double x : samples) {
        const int s = sign_of(f(x));
        if (s == 0) continue;
        if (previous != 0 && s != previous) ++changes;
        previous = s;
    }
    return changes;
}

double critical_coefficient(SpinValue s) {
    const double threshold = s.value() / 3.0;
    const auto gap = [&](double x) { return f_closed(s, {x}) - threshold; };

    // F rises from 0 at x -> -inf to S(S+1)/3 > S/3 at x = 0, so the root
    // lies in (-50, 0) for every S >= 1/2. Scan |x| logarithmically so the
    // bracket is found even when x_e is close to zero for large S.
    std::vector<double> scan;
    constexpr int kScanPoints = 2000;
    for (int i = 0; i < kScanPoints; ++i) {
        const double log_abs = std::log(50.0) + (std::log(1e-8) - std::log(50.0)) * i / (kScanPoints - 1.0);
        scan.push_back(-std::exp(log_abs));
    }
    if (count_sign_changes(gap, scan) != 1) {
        throw Error("expected exactly one crossing of F = S/3 for S = " + s.to_string());
    }

    double lo = scan.front();
    double hi = scan.back();
    for (std::size_t i = 1; i < scan.size(); ++i) {
        if (gap(scan[i]) >= 0.0) {
            lo = scan[i - 1];
            hi = scan[i];
            break;
        }
    }
    const double x_e = find_root_bracketed(gap, lo, hi, 1e-13);
    return -1.0 / x_e;
}

Eigen::VectorXd schmidt_coefficients(const ComplexVector& psi, int dim_a, int dim_b) {
    if (psi.size() != static_cast<Eigen::Index>(dim_a) * dim_b) {
        throw DimensionMismatch("state length does not equal dim_a * dim_b");
    }
    // Row index m_A, column index m_B.
    ComplexMatrix coeffs(dim_a, dim_b);
    for (int a = 0; a < dim_a; ++a) {
        for (int b = 0; b < dim_b; ++b) coeffs(a, b) = psi(a * dim_b + b);
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(coeffs);
    return svd.singularValues();
}

GroundStateReport ground_state(const DimerModel& model) {
    model.validate();
    if (model.j_exchange == 0.0) throw ZeroExchange();

    const auto spectrum = eigendecompose(dimer_hamiltonian(model));
    const double e0 = spectrum.eigenvalues(0);
    int degeneracy = 1;
    while (degeneracy < spectrum.eigenvalues.size() &&
           spectrum.eigenvalues(degeneracy) - e0 < kDegeneracyTolerance * std::max(1.0, std::abs(model.j_exchange))) {
        ++degeneracy;
    }

    GroundStateReport report;
    report.energy = e0;
    report.degeneracy = degeneracy;
    report.total_spin_j = (degeneracy - 1) / 2;
    report.state_vectors = spectrum.eigenvectors.leftCols(degeneracy);

    if (degeneracy == 1) {
        const int d = model.spin.dimension();
        const auto schmidt = schmidt_coefficients(report.state_vectors.col(0), d, d);
        int rank = 0;
        for (Eigen::Index i = 0; i < schmidt.size(); ++i) rank += schmidt(i) > kSchmidtTolerance;
        report.is_entangled_pure_state = rank > 1;
    }
    return report;
}

EntanglementReport entanglement_temperature(const DimerModel& model) {
    model.validate();
    if (model.j_exchange == 0.0) throw ZeroExchange();

    EntanglementReport report;
    report.coefficient = critical_coefficient(model.spin);
    report.diagnostic_t_e = -report.coefficient * model.j_exchange;
    report.detected = model.j_exchange < 0.0;
    if (report.detected) {
        report.t_e = report.diagnostic_t_e;
        report.x_e = -1.0 / report.coefficient;
    }
    report.ground_state = ground_state(model);
    return report;
}

ComplexMatrix partial_transpose(const ComplexMatrix& rho, int dim_a, int dim_b, Subsystem which) {
    const Eigen::Index n = static_cast<Eigen::Index>(dim_a) * dim_b;
    if (dim_a < 1 || dim_b < 1 || rho.rows() != n || rho.cols() != n) {
        throw DimensionMismatch("density matrix is " + std::to_string(rho.rows()) + "x" +
                                std::to_string(rho.cols()) + " but dim_a * dim_b = " +
                                std::to_string(n));
    }
    ComplexMatrix out(n, n);
    for (int a = 0; a < dim_a; ++a) {
        for (int b = 0; b < dim_b; ++b) {
            for (int ap = 0; ap < dim_a; ++ap) {
                for (int bp = 0; bp < dim_b; ++bp) {
                    const auto row = a * dim_b + b;
                    const auto col = ap * dim_b + bp;
                    out(row, col) = which == Subsystem::b ? rho(a * dim_b + bp, ap * dim_b + b)
                                                          : rho(ap * dim_b + b, a * dim_b + bp);
                }
            }
        }
    }
    return out;
}

NegativityResult negativity(const ComplexMatrix& rho, int dim_a, int dim_b) {
    const ComplexMatrix pt = partial_transpose(rho, dim_a, dim_b, Subsystem::b);
    const auto spectrum = eigendecompose(pt);
    NegativityResult result;
    result.min_pt_eigenvalue = spectrum.eigenvalues.minCoeff();
    for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
        if (spectrum.eigenvalues(i) < 0.0) result.negativity -= spectrum.eigenvalues(i);
    }
    return result;
}

NegativityResult negativity(const DensityMatrix& state) {
    return negativity(state.rho, state.dim_a(), state.dim_b());
}

std::vector<ScanRow> witness_vs_negativity_scan(const DimerModel& model,
                                                std::span<const double> t_grid) {
    model.validate();
    if (model.j_exchange == 0.0) throw ZeroExchange();
    const auto curve = witness_curve(model, t_grid);

    std::vector<ScanRow> rows;
    rows.reserve(curve.points.size());
    for (const auto& p : curve.points) {
        const auto n = negativity(thermal_density_matrix(model, p.t_kelvin));
        rows.push_back({p.t_kelvin, p.ew, n.negativity});
    }
    return rows;
}

void write_scan_csv(std::ostream& out, std::span<const ScanRow> rows) {
    out << "t_kelvin,ew,negativity\n";
    for (const auto& r : rows) {
        out << format_double(r.t_kelvin) << ',' << format_double(r.ew) << ','
            << format_double(r.negativity) << '\n';
    }
}

}  // namespace spindimer
