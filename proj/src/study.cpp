#include "vbdf2/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <stdexcept>

#include "vbdf2/heat1d.hpp"
#include "vbdf2/semilinear2d.hpp"

namespace vbdf2 {

namespace {

std::string format_error_value(double e) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4E", e);
    return buf;
}

std::string format_order_value(double o) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", o);
    return buf;
}

const char* certificate_status(const CertificateResult& cert) {
    switch (cert.status) {
        case CertificateResult::Status::holds: return "holds";
        case CertificateResult::Status::violated: return "violated";
        default: return "not_applicable";
    }
}

/// Smallest c1 admitted by the max-step condition, or 0.5 when the problem
/// has no lower-order perturbation and any c1 works.
double auto_certificate_c1(const ProblemDefinition& problem, const TimeMesh& mesh) {
    double gamma = 0.0;
    for (double t : mesh.node_times()) gamma = std::max(gamma, problem.gamma_bound(t));
    const double product =
        (4.0 + 2.0 * std::sqrt(2.0)) * gamma * gamma * mesh_stats(mesh).max_step;
    if (product <= 0.0) return 0.5;
    return std::min(product, 0.999);  // the certificate refuses if this is too small
}

RunOutcome run_single(const StudyConfig& config, const ProblemDefinition& problem,
                      int num_steps) {
    RunOutcome outcome;
    outcome.num_steps = num_steps;
    try {
        const TimeMesh mesh = make_mesh(config, num_steps);
        const Trajectory trajectory =
            integrate(problem, mesh, config.start, config.mode(), config.fixed_point);
        outcome.report = error_report(trajectory, problem, config.scheme_label());
        if (config.mode() == SchemeMode::linear) {
            const double c1 = config.certificate_c1 > 0.0
                                  ? config.certificate_c1
                                  : auto_certificate_c1(problem, mesh);
            outcome.certificate = energy_stability_certificate(trajectory, problem, c1);
        } else {
            outcome.certificate.reason = "semilinear run";
        }
    } catch (const std::exception& err) {
        outcome.failed = true;
        outcome.error = err.what();
    }
    return outcome;
}

double functional_value(const ErrorReport& report, int which) {
    switch (which) {
        case 0: return report.e_linf_v;
        case 1: return report.e_l2_hh;
        case 2: return report.e_linf_h;
        default: return report.e_l2_v;
    }
}

const char* functional_name(int which) {
    switch (which) {
        case 0: return "E_linf_V";
        case 1: return "E_l2_HH";
        case 2: return "E_linf_H";
        default: return "E_l2_V";
    }
}

}  // namespace

void StudyConfig::validate() const {
    if (problem == ProblemKind::heat1d) {
        if (space_points < 2) throw std::invalid_argument("heat1d needs M >= 2");
    } else {
        if (space_points < 4 || space_points % 2 != 0) {
            throw std::invalid_argument("semilinear2d needs an even M >= 4");
        }
        if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    }
    if (!(horizon > 0.0)) throw std::invalid_argument("T must be positive");
    if (mesh_family == MeshFamily::graded && !(grading >= 1.0)) {
        throw std::invalid_argument("grading exponent must be >= 1");
    }
    if (mesh_family == MeshFamily::geometric && !(ratio > 0.0)) {
        throw std::invalid_argument("geometric ratio must be positive");
    }
    if (step_counts.empty()) throw std::invalid_argument("step count list is empty");
    int previous = 1;
    for (int n : step_counts) {
        if (n < 2) throw std::invalid_argument("every N must be >= 2");
        if (n <= previous && previous > 1) {
            throw std::invalid_argument("step counts must be strictly increasing");
        }
        previous = n;
    }
    if (!(fixed_point.tolerance > 0.0) || fixed_point.max_iterations < 1) {
        throw std::invalid_argument("bad fixed-point settings");
    }
}

std::string StudyConfig::scheme_label() const {
    const bool constant_steps =
        mesh_family == MeshFamily::uniform ||
        (mesh_family == MeshFamily::graded && grading == 1.0) ||
        (mesh_family == MeshFamily::geometric && ratio == 1.0);
    std::string label = constant_steps ? "CSBDF2" : "VSBDF2";
    label += (start == StartScheme::trapezoidal) ? "-TF" : "-BE";
    return label;
}

std::unique_ptr<ProblemDefinition> make_problem(const StudyConfig& config) {
    if (config.problem == ProblemKind::heat1d) {
        return heat1d_problem(config.space_points, config.b);
    }
    return semilinear2d_problem(config.space_points, config.epsilon);
}

TimeMesh make_mesh(const StudyConfig& config, int num_steps) {
    switch (config.mesh_family) {
        case MeshFamily::uniform:
            return TimeMesh::uniform(config.horizon, num_steps);
        case MeshFamily::graded:
            return TimeMesh::graded(config.horizon, num_steps, config.grading);
        case MeshFamily::geometric:
            // Ratio 1 means the uniform mesh; the geometric constructor
            // rejects it by design.
            if (config.ratio == 1.0) return TimeMesh::uniform(config.horizon, num_steps);
            return TimeMesh::geometric(config.horizon, num_steps, config.ratio);
    }
    throw std::logic_error("unreachable");
}

StudyResult run_convergence_study(const StudyConfig& config) {
    config.validate();

    StudyResult result;
    result.config = config;

    const std::unique_ptr<ProblemDefinition> problem = make_problem(config);

    std::vector<std::future<RunOutcome>> futures;
    futures.reserve(config.step_counts.size());
    for (int n : config.step_counts) {
        futures.push_back(std::async(std::launch::async, [&config, &problem, n] {
            return run_single(config, *problem, n);
        }));
    }
    for (auto& f : futures) {
        result.runs.push_back(f.get());
        result.any_failed = result.any_failed || result.runs.back().failed;
    }

    result.tables.resize(4);
    for (int which = 0; which < 4; ++which) {
        ConvergenceTable& table = result.tables[static_cast<std::size_t>(which)];
        table.caption = config.scheme_label() + std::string(" ") + functional_name(which);
        const RunOutcome* previous = nullptr;
        for (const RunOutcome& run : result.runs) {
            if (run.failed) {
                previous = nullptr;
                continue;
            }
            ConvergenceTable::Row row;
            row.num_steps = run.num_steps;
            row.error = functional_value(run.report, which);
            if (previous != nullptr) {
                row.order = observed_order(functional_value(previous->report, which), row.error);
            }
            table.rows.push_back(row);
            previous = &run;
        }
    }
    return result;
}

std::string emit_table(const ConvergenceTable& table, OutputFormat format) {
    std::string out;
    if (format == OutputFormat::md) {
        if (!table.caption.empty()) out += "### " + table.caption + "\n\n";
        out += "| N | Error | Order |\n|---:|---:|---:|\n";
        for (const auto& row : table.rows) {
            out += "| " + std::to_string(row.num_steps) + " | " + format_error_value(row.error) +
                   " | " + (row.order ? format_order_value(*row.order) : std::string()) + " |\n";
        }
    } else {
        out += "N,error,order\n";
        for (const auto& row : table.rows) {
            out += std::to_string(row.num_steps) + "," + format_error_value(row.error) + "," +
                   (row.order ? format_order_value(*row.order) : std::string()) + "\n";
        }
    }
    return out;
}

std::string study_csv(const StudyResult& result) {
    std::string out =
        "scheme,N,E_linf_V,E_l2_HH,E_linf_H,E_l2_V,"
        "ord_linf_V,ord_l2_HH,ord_linf_H,ord_l2_V,certificate,lhs,rhs\n";
    const std::string label = result.config.scheme_label();
    const RunOutcome* previous = nullptr;
    for (const RunOutcome& run : result.runs) {
        if (run.failed) {
            out += label + "," + std::to_string(run.num_steps) + ",,,,,,,,,failed,,\n";
            previous = nullptr;
            continue;
        }
        out += label + "," + std::to_string(run.num_steps);
        for (int which = 0; which < 4; ++which) {
            out += "," + format_error_value(functional_value(run.report, which));
        }
        for (int which = 0; which < 4; ++which) {
            out += ",";
            if (previous != nullptr) {
                out += format_order_value(observed_order(
                    functional_value(previous->report, which),
                    functional_value(run.report, which)));
            }
        }
        out += std::string(",") + certificate_status(run.certificate);
        if (run.certificate.status != CertificateResult::Status::not_applicable) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), ",%.10E,%.10E", run.certificate.lhs,
                          run.certificate.rhs);
            out += buf;
        } else {
            out += ",,";
        }
        out += "\n";
        previous = &run;
    }
    return out;
}

std::string study_markdown(const StudyResult& result) {
    std::string out;
    for (const ConvergenceTable& table : result.tables) {
        out += emit_table(table, OutputFormat::md);
        out += "\n";
    }
    return out;
}

Series norm_series(const Trajectory& trajectory, const ProblemDefinition& problem,
                   std::string id) {
    Series series;
    series.id = std::move(id);
    const double initial = problem.h_norm(trajectory.state(0));
    for (int n = 0; n <= trajectory.mesh.num_steps(); ++n) {
        const double norm = problem.h_norm(trajectory.state(n));
        series.points.push_back({n, trajectory.mesh.time(n), {norm}});
        if (initial > 0.0) {
            series.max_over_initial = std::max(series.max_over_initial, norm / initial);
        }
    }
    return series;
}

Series error_series(const Trajectory& trajectory, const ProblemDefinition& problem,
                    const StateFunction& exact, std::string id) {
    Series series;
    series.id = std::move(id);
    for (int n = 0; n <= trajectory.mesh.num_steps(); ++n) {
        const StateVector e = trajectory.state(n) - exact(trajectory.mesh.time(n));
        series.points.push_back(
            {n, trajectory.mesh.time(n), {problem.h_norm(e), problem.v_seminorm(e)}});
    }
    return series;
}

SweepResult run_stability_sweep(const StudyConfig& config, const std::vector<double>& ratios) {
    StudyConfig sweep_config = config;
    sweep_config.mesh_family = MeshFamily::geometric;
    sweep_config.validate();
    if (ratios.empty()) throw std::invalid_argument("ratio grid is empty");
    const int num_steps = sweep_config.step_counts.front();

    SweepResult result;
    const std::unique_ptr<ProblemDefinition> problem = make_problem(sweep_config);
    for (double r : ratios) {
        sweep_config.ratio = r;
        char id[32];
        std::snprintf(id, sizeof(id), "r=%g", r);
        const TimeMesh mesh = make_mesh(sweep_config, num_steps);
        try {
            const Trajectory trajectory = integrate(*problem, mesh, sweep_config.start,
                                                    sweep_config.mode(),
                                                    sweep_config.fixed_point);
            result.series.push_back(norm_series(trajectory, *problem, id));
        } catch (const IntegrationError& err) {
            Series series;
            if (err.partial_trajectory) {
                series = norm_series(*err.partial_trajectory, *problem, id);
            } else {
                series.id = id;
            }
            series.truncated = true;
            result.series.push_back(std::move(series));
            result.any_failed = true;
        }
    }
    return result;
}

SweepResult run_error_evolution(const StudyConfig& config) {
    config.validate();
    SweepResult result;
    const std::unique_ptr<ProblemDefinition> problem = make_problem(config);
    if (!problem->has_exact_solution()) {
        throw std::invalid_argument("error evolution needs an exact solution");
    }
    const TimeMesh mesh = make_mesh(config, config.step_counts.front());
    try {
        const Trajectory trajectory =
            integrate(*problem, mesh, config.start, config.mode(), config.fixed_point);
        result.series.push_back(error_series(
            trajectory, *problem, [&](double t) { return problem->exact_state(t); },
            config.scheme_label()));
    } catch (const IntegrationError& err) {
        Series series;
        if (err.partial_trajectory) {
            series = error_series(*err.partial_trajectory, *problem,
                                  [&](double t) { return problem->exact_state(t); },
                                  config.scheme_label());
        } else {
            series.id = config.scheme_label();
        }
        series.truncated = true;
        result.series.push_back(std::move(series));
        result.any_failed = true;
    }
    return result;
}

std::string series_csv(const SweepResult& result,
                       const std::vector<std::string>& value_names) {
    std::string out = "series_id,n,t";
    for (const std::string& name : value_names) out += "," + name;
    out += "\n";
    char buf[192];
    for (const Series& series : result.series) {
        for (const SeriesPoint& point : series.points) {
            std::string row = series.id + "," + std::to_string(point.n);
            std::snprintf(buf, sizeof(buf), ",%.17g", point.t);
            row += buf;
            for (double v : point.values) {
                std::snprintf(buf, sizeof(buf), ",%.17g", v);
                row += buf;
            }
            out += row + "\n";
        }
    }
    return out;
}

}  // namespace vbdf2
