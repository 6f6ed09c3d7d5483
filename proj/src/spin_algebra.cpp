#include "spindimer/spin_algebra.hpp"

#include "spindimer/errors.hpp"
#include "spindimer/units.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace spindimer {

namespace {

double parse_number(std::string_view text) {
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty()) {
        throw InvalidArgument("cannot parse spin value '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

SpinValue::SpinValue(int twice_s) : twice_s_(twice_s) {
    if (twice_s < 1) {
        throw InvalidArgument("spin must be at least 1/2 (twice_s >= 1), got twice_s = " +
                              std::to_string(twice_s));
    }
}

SpinValue SpinValue::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);

    double twice = 0.0;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const double num = parse_number(text.substr(0, slash));
        const double den = parse_number(text.substr(slash + 1));
        if (den != 1.0 && den != 2.0) {
            throw InvalidArgument("spin denominator must be 1 or 2: '" + std::string(text) + "'");
        }
        twice = 2.0 * num / den;
    } else {
        twice = 2.0 * parse_number(text);
    }
    const double rounded = std::round(twice);
    if (!std::isfinite(twice) || std::abs(twice - rounded) > 1e-9 || rounded < 1.0 ||
        rounded > 1e6) {
        throw InvalidArgument("spin must be a positive multiple of 1/2: '" + std::string(text) +
                              "'");
    }
    return SpinValue(static_cast<int>(rounded));
}

std::string SpinValue::to_string() const {
    if (twice_s_ % 2 == 0) return std::to_string(twice_s_ / 2);
    return std::to_string(twice_s_) + "/2";
}

void DimerModel::validate() const {
    if (!std::isfinite(j_exchange)) throw InvalidArgument("J must be finite");
    if (!(g_factor > 0.0) || !std::isfinite(g_factor)) {
        throw InvalidArgument("g factor must be positive and finite");
    }
}

SpinOperatorTriple spin_operators(SpinValue s) {
    const int d = s.dimension();
    const double spin = s.value();

    ComplexMatrix sz = ComplexMatrix::Zero(d, d);
    ComplexMatrix splus = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = spin - k;
        sz(k, k) = m;
        // <m+1| S+ |m> lives at row k-1, column k.
        if (k > 0) splus(k - 1, k) = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
    }
    const ComplexMatrix sminus = splus.adjoint();
    const Complex i_unit(0.0, 1.0);

    return {(splus + sminus) * 0.5, (splus - sminus) / (2.0 * i_unit), sz};
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix total_spin_component(SpinValue s, Axis axis) {
    const auto ops = spin_operators(s);
    const ComplexMatrix& op = axis == Axis::x ? ops.sx : axis == Axis::y ? ops.sy : ops.sz;
    const ComplexMatrix id = ComplexMatrix::Identity(s.dimension(), s.dimension());
    return kron(op, id) + kron(id, op);
}

ComplexMatrix dimer_hamiltonian(const DimerModel& model, const BField& field) {
    model.validate();
    if (!std::isfinite(field.bx) || !std::isfinite(field.by) || !std::isfinite(field.bz)) {
        throw InvalidArgument("magnetic field components must be finite");
    }
    const auto ops = spin_operators(model.spin);
    const ComplexMatrix id = ComplexMatrix::Identity(model.spin.dimension(), model.spin.dimension());

    ComplexMatrix h = -model.j_exchange *
                      (kron(ops.sx, ops.sx) + kron(ops.sy, ops.sy) + kron(ops.sz, ops.sz));

    const double zeeman = model.g_factor * constants::bohr_magneton_over_boltzmann;
    const std::pair<double, const ComplexMatrix*> terms[] = {
        {field.bx, &ops.sx}, {field.by, &ops.sy}, {field.bz, &ops.sz}};
    for (const auto& [b, op] : terms) {
        if (b != 0.0) h -= zeeman * b * (kron(*op, id) + kron(id, *op));
    }
    return h;
}

SpectralDecomposition eigendecompose(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw DimensionMismatch("eigendecompose needs a square matrix");
    if (h.size() > 0) {
        const double deviation = (h - h.adjoint()).cwiseAbs().maxCoeff();
        if (!(deviation <= 1e-9)) {
            throw NonHermitianInput("matrix deviates from Hermitian by " + std::to_string(deviation));
        }
    }
    // Symmetrize so roundoff in the input cannot leak into the solver.
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<DimerLevel> dimer_levels(const DimerModel& model) {
    model.validate();
    const double spin = model.spin.value();
    std::vector<DimerLevel> levels;
    levels.reserve(model.spin.twice_s() + 1);
    for (int j = 0; j <= model.spin.twice_s(); ++j) {
        const double energy =
            -0.5 * model.j_exchange * (j * (j + 1.0) - 2.0 * spin * (spin + 1.0));
        levels.push_back({energy, j, 2 * j + 1});
    }
    return levels;
}

}  // namespace spindimer
