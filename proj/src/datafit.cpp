#include "spindimer/datafit.hpp"

#include "spindimer/entanglement.hpp"
#include "spindimer/errors.hpp"
#include "spindimer/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <string>
#include <string_view>

namespace spindimer {

namespace {

constexpr std::size_t kMinFitPoints = 8;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_field(std::string_view field, std::size_t line_no, std::string_view column) {
    double value = 0.0;
    const auto* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), last, value);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(line_no, "cannot parse " + std::string(column) + " value '" +
                                      std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(line_no, "non-finite " + std::string(column) + " value");
    }
    return value;
}

bool is_header(const std::vector<std::string_view>& fields) {
    return !fields.empty() && fields[0] == "t_kelvin";
}

// Model chi at one temperature plus its partial derivatives in (J, g).
struct ModelEval {
    double chi;
    double d_j;
    double d_g;
};

ModelEval evaluate_model(SpinValue spin, double j, double g, double t, const DimerEnsemble& ens,
                         UnitSystem units) {
    const double prefactor = 2.0 * ens.n_dimers * moment_constant(units) / t;
    const ReducedCoupling x{j / t};
    const double f = f_closed(spin, x);
    const double chi = prefactor * g * g * f;
    return {chi, prefactor * g * g * f_closed_derivative(spin, x) / t, 2.0 * prefactor * g * f};
}

struct Linearization {
    Eigen::VectorXd residual;  // weighted
    Eigen::MatrixXd jacobian;  // weighted
    double cost = 0.0;         // sum of squared weighted residuals
};

Linearization linearize(const ExperimentalDataset& data, const Eigen::VectorXd& params,
                        bool weighted, bool background) {
    const auto n = static_cast<Eigen::Index>(data.points.size());
    Linearization lin{Eigen::VectorXd(n), Eigen::MatrixXd(n, params.size()), 0.0};
    const auto ens = data.ensemble();
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& p = data.points[i];
        const double w = weighted ? 1.0 / *p.sigma : 1.0;
        const auto m = evaluate_model(data.spin, params(0), params(1), p.t_kelvin, ens, data.units);
        const double chi0 = background ? params(2) : 0.0;
        lin.residual(i) = w * (m.chi + chi0 - p.chi);
        lin.jacobian(i, 0) = w * m.d_j;
        lin.jacobian(i, 1) = w * m.d_g;
        if (background) lin.jacobian(i, 2) = w;
    }
    lin.cost = lin.residual.squaredNorm();
    return lin;
}

double cost_at(const ExperimentalDataset& data, const Eigen::VectorXd& params, bool weighted,
               bool background) {
    double cost = 0.0;
    const auto ens = data.ensemble();
    for (const auto& p : data.points) {
        const double w = weighted ? 1.0 / *p.sigma : 1.0;
        const auto m = evaluate_model(data.spin, params(0), params(1), p.t_kelvin, ens, data.units);
        const double r = w * (m.chi + (background ? params(2) : 0.0) - p.chi);
        cost += r * r;
    }
    return cost;
}

// Largest |cos| between the residual and any Jacobian column, or 0 when the
// residual is at roundoff level relative to the data.
double gradient_cosine(const Linearization& lin, double data_norm) {
    const double r_norm = lin.residual.norm();
    if (r_norm <= 1e-10 * data_norm) return 0.0;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < lin.jacobian.cols(); ++k) {
        const double col_norm = lin.jacobian.col(k).norm();
        if (col_norm == 0.0) continue;
        worst = std::max(worst, std::abs(lin.jacobian.col(k).dot(lin.residual)) / (col_norm * r_norm));
    }
    return worst;
}

}  // namespace

ExperimentalDataset load_dataset(std::istream& source, const DatasetFormat& format) {
    ExperimentalDataset data{.points = {},
                             .units = format.units,
                             .spin = format.spin,
                             .sample_label = format.sample_label,
                             .moles_of_dimers_per_mol = format.moles_of_dimers_per_mol};
    if (!(format.moles_of_dimers_per_mol > 0.0)) {
        throw InvalidArgument("moles_of_dimers_per_mol must be positive");
    }

    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    std::size_t expected_columns = 0;
    while (std::getline(source, line)) {
        ++line_no;
        const auto view = trim(line);
        if (view.empty() || view.front() == '#') continue;

        const auto fields = split_commas(view);
        if (!seen_header && data.points.empty() && is_header(fields)) {
            if (fields.size() < 2 || fields.size() > 3 || fields[1] != "chi_emu_per_mol" ||
                (fields.size() == 3 && fields[2] != "sigma_emu_per_mol")) {
                throw ParseError(line_no, "unexpected header '" + std::string(view) + "'");
            }
            expected_columns = fields.size();
            seen_header = true;
            continue;
        }
        if (fields.size() < 2 || fields.size() > 3) {
            throw ParseError(line_no, "expected 2 or 3 columns, found " + std::to_string(fields.size()));
        }
        if (expected_columns != 0 && fields.size() != expected_columns) {
            throw ParseError(line_no, "expected " + std::to_string(expected_columns) +
                                          " columns, found " + std::to_string(fields.size()));
        }

        DataPoint point;
        point.t_kelvin = parse_field(fields[0], line_no, "temperature");
        point.chi = parse_field(fields[1], line_no, "susceptibility");
        if (fields.size() == 3) point.sigma = parse_field(fields[2], line_no, "sigma");

        if (!(point.t_kelvin > 0.0)) throw ParseError(line_no, "temperature must be positive");
        if (!(point.chi > 0.0)) throw ParseError(line_no, "susceptibility must be positive");
        if (point.sigma && !(*point.sigma > 0.0)) throw ParseError(line_no, "sigma must be positive");
        if (!data.points.empty() && !(point.t_kelvin > data.points.back().t_kelvin)) {
            throw NonMonotonicTemperature(line_no, "temperature " + format_double(point.t_kelvin) +
                                                       " does not increase");
        }
        data.points.push_back(point);
    }
    if (data.points.empty()) throw EmptyDataset();
    return data;
}

void write_dataset_csv(std::ostream& out, const ExperimentalDataset& data) {
    const bool with_sigma = !data.points.empty() &&
                            std::all_of(data.points.begin(), data.points.end(),
                                        [](const DataPoint& p) { return p.sigma.has_value(); });
    out << "# sample: " << data.sample_label << "\n";
    out << "# spin: " << data.spin.to_string() << "\n";
    out << (with_sigma ? "t_kelvin,chi_emu_per_mol,sigma_emu_per_mol\n" : "t_kelvin,chi_emu_per_mol\n");
    for (const auto& p : data.points) {
        out << format_double(p.t_kelvin) << ',' << format_double(p.chi);
        if (with_sigma) out << ',' << format_double(*p.sigma);
        out << '\n';
    }
}

std::pair<double, double> initial_guess(const ExperimentalDataset& data) {
    const auto& pts = data.points;
    if (pts.size() < 2) throw InvalidArgument("need at least two points for an initial guess");

    const double t_cut = pts.front().t_kelvin + (2.0 / 3.0) * (pts.back().t_kelvin - pts.front().t_kelvin);
    std::size_t first = pts.size();
    while (first > 0 && pts[first - 1].t_kelvin >= t_cut) --first;
    first = std::min(first, pts.size() - std::max<std::size_t>(2, pts.size() / 3));

    // Least-squares line 1/chi = a t + b.
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(pts.size() - first);
    for (std::size_t i = first; i < pts.size(); ++i) {
        const double t = pts[i].t_kelvin;
        const double y = 1.0 / pts[i].chi;
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double denom = n * stt - st * st;
    const double a = (n * sty - st * sy) / denom;
    const double b = (sy - a * st) / n;

    const double spin = data.spin.value();
    double j0 = 3.0 * (-b / a) / (spin * (spin + 1.0));
    if (!std::isfinite(j0) || !(a > 0.0)) j0 = -1.0;
    if (std::abs(j0) < 1e-3) j0 = std::copysign(1e-3, j0 == 0.0 ? -1.0 : j0);
    return {j0, 2.0};
}

FitResult fit_model(const ExperimentalDataset& data, std::pair<double, double> init,
                    const FitOptions& options) {
    if (data.points.size() < kMinFitPoints) {
        throw InvalidArgument("fitting needs at least " + std::to_string(kMinFitPoints) +
                              " points, got " + std::to_string(data.points.size()));
    }
    if (!std::isfinite(init.first) || !std::isfinite(init.second) || !(init.second > 0.0)) {
        throw InvalidArgument("initial guess must be finite with g0 > 0");
    }

    const bool weighted = std::all_of(data.points.begin(), data.points.end(),
                                      [](const DataPoint& p) { return p.sigma.has_value(); });
    const bool background = options.fit_background;
    const Eigen::Index n_params = background ? 3 : 2;

    Eigen::VectorXd params(n_params);
    params(0) = init.first;
    params(1) = init.second;
    if (background) params(2) = 0.0;

    double data_norm = 0.0;
    for (const auto& p : data.points) {
        const double y = weighted ? p.chi / *p.sigma : p.chi;
        data_norm += y * y;
    }
    data_norm = std::sqrt(data_norm);

    auto lin = linearize(data, params, weighted, background);
    double damping = options.initial_damping;
    int iteration = 0;
    bool stalled = false;

    for (; iteration < options.max_iterations; ++iteration) {
        if (gradient_cosine(lin, data_norm) <= options.gradient_tolerance * 1e-3) break;

        const Eigen::MatrixXd normal = lin.jacobian.transpose() * lin.jacobian;
        const Eigen::VectorXd gradient = lin.jacobian.transpose() * lin.residual;
        Eigen::VectorXd scale = normal.diagonal().cwiseMax(1e-300);

        bool accepted = false;
        Eigen::VectorXd step;
        while (damping < 1e20) {
            Eigen::MatrixXd damped = normal;
            damped.diagonal() += damping * scale;
            step = damped.ldlt().solve(-gradient);
            const Eigen::VectorXd trial = params + step;
            if (step.allFinite() && cost_at(data, trial, weighted, background) < lin.cost) {
                params = trial;
                damping = std::max(damping / 10.0, 1e-15);
                accepted = true;
                break;
            }
            damping *= 10.0;
        }
        if (!accepted) {
            stalled = true;
            break;
        }
        lin = linearize(data, params, weighted, background);

        double relative_step = 0.0;
        for (Eigen::Index k = 0; k < n_params; ++k) {
            const double ref = std::max(std::abs(params(k)), k == 2 ? data_norm * 1e-12 : 1e-12);
            relative_step = std::max(relative_step, std::abs(step(k)) / ref);
        }
        if (relative_step < options.step_tolerance) {
            ++iteration;
            break;
        }
    }
    if (iteration >= options.max_iterations && !stalled &&
        gradient_cosine(lin, data_norm) > options.gradient_tolerance) {
        throw NonConvergence("fit did not converge within " + std::to_string(options.max_iterations) +
                             " iterations");
    }

    // Covariance from the Gauss-Newton normal matrix, column-scaled so the
    // conditioning test does not depend on parameter units.
    Eigen::VectorXd col_scale(n_params);
    for (Eigen::Index k = 0; k < n_params; ++k) {
        col_scale(k) = lin.jacobian.col(k).norm();
        if (col_scale(k) == 0.0) throw SingularJacobian("model is insensitive to a parameter");
    }
    const Eigen::MatrixXd scaled = lin.jacobian * col_scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-12 * sv(0)) {
        throw SingularJacobian("Jacobian is rank deficient at the optimum");
    }
    const Eigen::MatrixXd scaled_inv = (scaled.transpose() * scaled).inverse();
    Eigen::MatrixXd covariance = col_scale.cwiseInverse().asDiagonal() * scaled_inv *
                                 col_scale.cwiseInverse().asDiagonal();
    const auto n = static_cast<double>(data.points.size());
    if (!weighted) covariance *= lin.cost / std::max(1.0, n - static_cast<double>(n_params));
    covariance = 0.5 * (covariance + covariance.transpose()).eval();

    double sum_sq = 0.0;
    const auto ens = data.ensemble();
    for (const auto& p : data.points) {
        const auto m = evaluate_model(data.spin, params(0), params(1), p.t_kelvin, ens, data.units);
        const double r = m.chi + (background ? params(2) : 0.0) - p.chi;
        sum_sq += r * r;
    }

    FitResult result;
    result.j_exchange = params(0);
    result.g_factor = std::abs(params(1));
    if (background) result.background = params(2);
    result.units = data.units;
    result.covariance = covariance;
    result.rms_residual = std::sqrt(sum_sq / n);
    result.gradient_norm = gradient_cosine(lin, data_norm);
    result.converged = result.gradient_norm <= options.gradient_tolerance;
    result.n_iterations = iteration;
    result.n_points = data.points.size();
    return result;
}

WitnessCurve experimental_witness_curve(const ExperimentalDataset& data, const FitResult& fit) {
    if (!fit.converged) throw InvalidArgument("witness curve needs a converged fit");
    if (fit.units != data.units) {
        throw UnitMismatch("fit was made in " + std::string(to_string(fit.units)) +
                           " units but the dataset is " + std::string(to_string(data.units)));
    }

    WitnessCurve curve{.points = {},
                       .spin = data.spin,
                       .j_exchange = fit.j_exchange,
                       .g_factor = fit.g_factor,
                       .source = CurveSource::experiment,
                       .units = data.units,
                       .assumed_isotropic = true,
                       .fit = std::nullopt};
    if (fit.covariance.rows() >= 1 && std::isfinite(fit.covariance(0, 0))) {
        curve.fit = CurveFitInfo{fit.sigma_j()};
    }

    const double chi0 = fit.background.value_or(0.0);
    const auto ens = data.ensemble();
    curve.points.reserve(data.points.size());
    for (const auto& p : data.points) {
        // A background larger than chi would give chi_avg < 0; clamp to the
        // fully entangled limit EW = -1.
        const Susceptibility chi{std::max(p.chi - chi0, 0.0), data.units};
        curve.points.push_back(
            {p.t_kelvin, chi.value, witness(data.spin, fit.g_factor, p.t_kelvin, chi, ens, data.units)});
    }
    return curve;
}

std::optional<CrossingEstimate> zero_crossing(const WitnessCurve& curve) {
    const auto& pts = curve.points;
    if (pts.empty()) throw InvalidArgument("zero_crossing needs a nonempty curve");

    std::optional<CrossingEstimate> found;
    for (std::size_t i = 0; i < pts.size() && !found; ++i) {
        if (pts[i].ew == 0.0) {
            double spacing = 0.0;
            if (i + 1 < pts.size()) spacing = pts[i + 1].t_kelvin - pts[i].t_kelvin;
            if (i > 0) spacing = std::max(spacing, pts[i].t_kelvin - pts[i - 1].t_kelvin);
            found = CrossingEstimate{pts[i].t_kelvin, spacing, CrossingMethod::linear_interp};
        } else if (i + 1 < pts.size() && pts[i + 1].ew != 0.0 &&
                   (pts[i].ew < 0.0) != (pts[i + 1].ew < 0.0)) {
            const auto& lo = pts[i];
            const auto& hi = pts[i + 1];
            const double frac = lo.ew / (lo.ew - hi.ew);
            found = CrossingEstimate{lo.t_kelvin + frac * (hi.t_kelvin - lo.t_kelvin),
                                     0.5 * (hi.t_kelvin - lo.t_kelvin), CrossingMethod::linear_interp};
        }
    }
    if (found && curve.fit) {
        const double propagated = critical_coefficient(curve.spin) * curve.fit->sigma_j;
        found->sigma_t_e = std::hypot(found->sigma_t_e, propagated);
        found->method = CrossingMethod::fit_propagated;
    }
    return found;
}

ExperimentalDataset synthesize_dataset(const DimerModel& model, std::span<const double> t_grid,
                                       const SynthesisOptions& options) {
    model.validate();
    validate_grid(t_grid);
    if (options.relative_noise < 0.0) throw InvalidArgument("relative_noise must be non-negative");

    ExperimentalDataset data{.points = {},
                             .units = options.units,
                             .spin = model.spin,
                             .sample_label = options.sample_label,
                             .moles_of_dimers_per_mol = options.moles_of_dimers_per_mol};
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (const double t : t_grid) {
        const double chi = susceptibility(model, t, data.ensemble(), options.units).value;
        DataPoint p{t, chi, std::nullopt};
        if (options.relative_noise > 0.0) {
            p.chi = chi * (1.0 + options.relative_noise * normal(rng));
            p.sigma = options.relative_noise * chi;
        }
        data.points.push_back(p);
    }
    return data;
}

}  // namespace spindimer
