#include "vbdf2/norms.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace vbdf2 {

ErrorReport error_report(const Trajectory& trajectory, const ProblemDefinition& problem,
                         const StateFunction& exact, std::string scheme_label) {
    if (!exact) throw std::invalid_argument("error report needs an exact solution");

    const TimeMesh& mesh = trajectory.mesh;
    const int n_steps = mesh.num_steps();

    ErrorReport report;
    report.scheme_label = std::move(scheme_label);
    report.num_steps = n_steps;
    report.step_h_norms.resize(static_cast<std::size_t>(n_steps) + 1);
    report.step_v_norms.resize(static_cast<std::size_t>(n_steps) + 1);

    double sum_hh = 0.0;
    double sum_v = 0.0;
    StateVector error_prev;
    for (int n = 0; n <= n_steps; ++n) {
        StateVector error = trajectory.state(n) - exact(mesh.time(n));
        const double h = problem.h_norm(error);
        const double v = problem.v_seminorm(error);
        report.step_h_norms[static_cast<std::size_t>(n)] = h;
        report.step_v_norms[static_cast<std::size_t>(n)] = v;
        if (n >= 1) {
            report.e_linf_h = std::max(report.e_linf_h, h);
            report.e_linf_v = std::max(report.e_linf_v, v);
        }
        if (n >= 2) {
            const double k = mesh.step(n);
            const double s = mesh.weight(n);
            const double dh = problem.h_norm(error - error_prev) / k;
            sum_hh += k * s * dh * dh;
            sum_v += k * v * v;
        }
        error_prev = std::move(error);
    }
    report.e_l2_hh = std::sqrt(sum_hh);
    report.e_l2_v = std::sqrt(sum_v);
    return report;
}

ErrorReport error_report(const Trajectory& trajectory, const ProblemDefinition& problem,
                         std::string scheme_label) {
    if (!problem.has_exact_solution()) {
        throw std::invalid_argument("problem provides no exact solution");
    }
    return error_report(
        trajectory, problem, [&problem](double t) { return problem.exact_state(t); },
        std::move(scheme_label));
}

std::string error_report_csv_row(const ErrorReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.10E,%.10E,%.10E,%.10E",
                  report.scheme_label.c_str(), report.num_steps, report.e_linf_v,
                  report.e_l2_hh, report.e_linf_h, report.e_l2_v);
    return buf;
}

double l2_hh_seminorm(const Trajectory& trajectory, const ProblemDefinition& problem, int n1,
                      int n2) {
    if (n1 < 2 || n2 > trajectory.mesh.num_steps() || n1 > n2) {
        throw std::invalid_argument("l2_hh_seminorm: bad index window");
    }
    double sum = 0.0;
    for (int j = n1; j < n2; ++j) {
        const double k = trajectory.mesh.step(j);
        const double s = trajectory.mesh.weight(j);
        const double d = problem.h_norm(trajectory.state(j) - trajectory.state(j - 1)) / k;
        sum += k * s * d * d;
    }
    return std::sqrt(sum);
}

StateVector consistency_error_d2(const StateFunction& u, const StateFunction& u_prime,
                                 const TimeMesh& mesh, int n) {
    if (n < 2 || n > mesh.num_steps()) throw std::invalid_argument("need 2 <= n <= N");
    const Bdf2Coefficients coeffs = bdf2_coefficients(mesh.step(n), mesh.ratio(n));
    const StateVector diff = bdf2_divided_difference(coeffs, u(mesh.time(n)),
                                                     u(mesh.time(n - 1)), u(mesh.time(n - 2)));
    return diff - u_prime(mesh.time(n));
}

StateVector consistency_error_d1(const StateFunction& u, const StateFunction& u_prime,
                                 const TimeMesh& mesh, int n) {
    if (n < 1 || n > mesh.num_steps()) throw std::invalid_argument("need 1 <= n <= N");
    const double k = mesh.step(n);
    const StateVector diff = scaled_sum(1.0 / k, u(mesh.time(n)), -1.0 / k, u(mesh.time(n - 1)));
    return diff - u_prime(mesh.time(n));
}

double observed_order(double error_coarse, double error_fine) {
    if (!(error_coarse > 0.0) || !(error_fine > 0.0)) {
        throw std::invalid_argument("observed order needs positive errors");
    }
    return std::log2(error_coarse / error_fine);
}

}  // namespace vbdf2
