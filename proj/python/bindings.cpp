#include "spindimer/datafit.hpp"
#include "spindimer/entanglement.hpp"
#include "spindimer/errors.hpp"
#include "spindimer/thermo.hpp"
#include "spindimer/validation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace spindimer;

namespace {

UnitSystem parse_units(const std::string& units) {
    if (units == "reduced") return UnitSystem::reduced;
    if (units == "cgs") return UnitSystem::cgs_molar;
    throw InvalidArgument("units must be 'reduced' or 'cgs'");
}

py::dict ground_state_dict(const GroundStateReport& gs) {
    py::dict d;
    d["energy"] = gs.energy;
    d["degeneracy"] = gs.degeneracy;
    d["total_spin_j"] = gs.total_spin_j;
    d["state_vectors"] = gs.state_vectors;
    d["is_entangled_pure_state"] = gs.is_entangled_pure_state;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heisenberg spin-dimer thermal entanglement (C++ core)";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
    py::register_exception<ZeroExchange>(m, "ZeroExchange", error.ptr());
    py::register_exception<NonPositiveTemperature>(m, "NonPositiveTemperature", error.ptr());
    py::register_exception<UnitMismatch>(m, "UnitMismatch", error.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", error.ptr());
    py::register_exception<NonHermitianInput>(m, "NonHermitianInput", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<NonMonotonicTemperature>(m, "NonMonotonicTemperature", error.ptr());
    py::register_exception<EmptyDataset>(m, "EmptyDataset", error.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", error.ptr());
    py::register_exception<SingularJacobian>(m, "SingularJacobian", error.ptr());

    py::class_<SpinValue>(m, "SpinValue")
        .def(py::init<int>(), py::arg("twice_s"))
        .def(py::init([](const std::string& text) { return SpinValue::parse(text); }))
        .def(py::init([](double s) { return SpinValue::parse(std::to_string(s)); }))
        .def_property_readonly("twice_s", &SpinValue::twice_s)
        .def_property_readonly("value", &SpinValue::value)
        .def_property_readonly("dimension", &SpinValue::dimension)
        .def("__str__", &SpinValue::to_string)
        .def("__repr__", [](SpinValue s) { return "SpinValue('" + s.to_string() + "')"; })
        .def("__eq__", [](SpinValue a, SpinValue b) { return a == b; });
    py::implicitly_convertible<py::str, SpinValue>();
    py::implicitly_convertible<py::float_, SpinValue>();

    py::class_<DimerModel>(m, "DimerModel")
        .def(py::init([](SpinValue spin, double j, double g) {
                 DimerModel model{spin, j, g};
                 model.validate();
                 return model;
             }),
             py::arg("spin"), py::arg("j"), py::arg("g") = 2.0)
        .def_readonly("spin", &DimerModel::spin)
        .def_readonly("j_exchange", &DimerModel::j_exchange)
        .def_readonly("g_factor", &DimerModel::g_factor);

    m.def("spin_operators", [](SpinValue s) {
        const auto ops = spin_operators(s);
        return py::make_tuple(ops.sx, ops.sy, ops.sz);
    });
    m.def(
        "dimer_hamiltonian",
        [](const DimerModel& model, double bx, double by, double bz) {
            return dimer_hamiltonian(model, {bx, by, bz});
        },
        py::arg("model"), py::arg("bx") = 0.0, py::arg("by") = 0.0, py::arg("bz") = 0.0);
    m.def("eigendecompose", [](const ComplexMatrix& h) {
        const auto spec = eigendecompose(h);
        return py::make_tuple(spec.eigenvalues, spec.eigenvectors);
    });
    m.def("dimer_levels", [](const DimerModel& model) {
        std::vector<py::tuple> out;
        for (const auto& l : dimer_levels(model)) out.push_back(py::make_tuple(l.energy, l.total_spin_j, l.degeneracy));
        return out;
    });

    m.def("f_closed", [](SpinValue s, double x) { return f_closed(s, {x}); }, py::arg("spin"), py::arg("x"));
    m.def("f_numeric", &f_numeric, py::arg("model"), py::arg("t"));
    m.def("boltzmann_series", [](SpinValue s) {
        const auto series = boltzmann_series(s);
        return py::make_tuple(series.numerator, series.denominator, series.exponents);
    });
    m.def(
        "thermal_density_matrix",
        [](const DimerModel& model, double t) { return thermal_density_matrix(model, t).rho; },
        py::arg("model"), py::arg("t"));
    m.def(
        "susceptibility",
        [](const DimerModel& model, double t, double n_dimers, const std::string& units) {
            return susceptibility(model, t, {n_dimers}, parse_units(units)).value;
        },
        py::arg("model"), py::arg("t"), py::arg("n_dimers") = 1.0, py::arg("units") = "reduced");
    m.def(
        "witness",
        [](SpinValue s, double g, double t, double chi, double n_dimers, const std::string& units) {
            const auto u = parse_units(units);
            return witness(s, g, t, {chi, u}, {n_dimers}, u);
        },
        py::arg("spin"), py::arg("g"), py::arg("t"), py::arg("chi"), py::arg("n_dimers") = 1.0,
        py::arg("units") = "reduced");
    m.def(
        "witness_curve",
        [](const DimerModel& model, const std::vector<double>& grid, double n_dimers,
           const std::string& units) {
            const auto curve = witness_curve(model, grid, {n_dimers}, parse_units(units));
            Eigen::MatrixXd out(curve.points.size(), 3);
            for (std::size_t i = 0; i < curve.points.size(); ++i) {
                out.row(i) << curve.points[i].t_kelvin, curve.points[i].chi_avg, curve.points[i].ew;
            }
            return out;
        },
        py::arg("model"), py::arg("t_grid"), py::arg("n_dimers") = 1.0, py::arg("units") = "reduced",
        "Columns: t_kelvin, chi, ew.");
    m.def(
        "temperature_grid",
        [](double tmin, double tmax, int points, const std::string& spacing) {
            if (spacing != "lin" && spacing != "log") throw InvalidArgument("spacing must be 'lin' or 'log'");
            return temperature_grid(tmin, tmax, points, spacing == "lin" ? GridSpacing::linear : GridSpacing::log);
        },
        py::arg("tmin"), py::arg("tmax"), py::arg("points"), py::arg("spacing") = "log");

    m.def("critical_coefficient", &critical_coefficient, py::arg("spin"));
    m.def("entanglement_temperature", [](const DimerModel& model) {
        const auto r = entanglement_temperature(model);
        py::dict d;
        d["t_e"] = r.t_e;
        d["x_e"] = r.x_e;
        d["coefficient"] = r.coefficient;
        d["diagnostic_t_e"] = r.diagnostic_t_e;
        d["detected"] = r.detected;
        d["ground_state"] = ground_state_dict(r.ground_state);
        return d;
    });
    m.def("ground_state", [](const DimerModel& model) { return ground_state_dict(ground_state(model)); });
    m.def(
        "negativity",
        [](const ComplexMatrix& rho, int dim_a, int dim_b) {
            const auto n = negativity(rho, dim_a, dim_b);
            return py::make_tuple(n.negativity, n.min_pt_eigenvalue);
        },
        py::arg("rho"), py::arg("dim_a"), py::arg("dim_b"));
    m.def(
        "witness_vs_negativity_scan",
        [](const DimerModel& model, const std::vector<double>& grid) {
            const auto rows = witness_vs_negativity_scan(model, grid);
            Eigen::MatrixXd out(rows.size(), 3);
            for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) << rows[i].t_kelvin, rows[i].ew, rows[i].negativity;
            return out;
        },
        "Columns: t_kelvin, ew, negativity.");
    m.def("reference_ground_state", &reference_ground_state);

    m.def(
        "fit",
        [](SpinValue spin, const std::vector<double>& t, const std::vector<double>& chi,
           std::optional<std::vector<double>> sigma, const std::string& units, double moles,
           std::optional<double> j0, std::optional<double> g0, bool background) {
            if (t.size() != chi.size() || (sigma && sigma->size() != t.size())) {
                throw InvalidArgument("t, chi and sigma must have equal length");
            }
            ExperimentalDataset data{.points = {},
                                     .units = parse_units(units),
                                     .spin = spin,
                                     .sample_label = "python",
                                     .moles_of_dimers_per_mol = moles};
            for (std::size_t i = 0; i < t.size(); ++i) {
                data.points.push_back({t[i], chi[i], sigma ? std::optional<double>((*sigma)[i]) : std::nullopt});
            }
            auto init = initial_guess(data);
            if (j0) init.first = *j0;
            if (g0) init.second = *g0;
            FitOptions options;
            options.fit_background = background;
            const auto fit = fit_model(data, init, options);

            py::dict d;
            d["j"] = fit.j_exchange;
            d["g"] = fit.g_factor;
            d["background"] = fit.background;
            d["covariance"] = fit.covariance;
            d["rms_residual"] = fit.rms_residual;
            d["converged"] = fit.converged;
            d["n_iterations"] = fit.n_iterations;
            d["t_e"] = py::none();
            d["t_e_sigma"] = py::none();
            if (fit.converged) {
                if (const auto crossing = zero_crossing(experimental_witness_curve(data, fit))) {
                    d["t_e"] = crossing->t_e;
                    d["t_e_sigma"] = crossing->sigma_t_e;
                }
            }
            return d;
        },
        py::arg("spin"), py::arg("t"), py::arg("chi"), py::arg("sigma") = py::none(),
        py::arg("units") = "cgs", py::arg("moles") = 1.0, py::arg("j0") = py::none(),
        py::arg("g0") = py::none(), py::arg("background") = false);

    m.def("run_validation", []() {
        std::vector<py::dict> out;
        for (const auto& r : run_validation()) {
            py::dict d;
            d["group"] = r.group;
            d["name"] = r.name;
            d["passed"] = r.passed;
            d["detail"] = r.detail;
            out.push_back(d);
        }
        return out;
    });

    m.attr("MU_B_OVER_K_B") = constants::bohr_magneton_over_boltzmann;
    m.attr("MOLAR_CURIE_CONSTANT") = constants::molar_curie_constant;
}
