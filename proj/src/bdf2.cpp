#include "vbdf2/bdf2.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>

namespace vbdf2 {

namespace {

constexpr double kStepResidualTol = 1e-10;  // relative, H-norm, linear solves

std::string step_message(int step_index, const char* what) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "step %d: %s", step_index, what);
    return buf;
}

/// rhs_i = f_i + b*u_i - c*w_i in a single pass. Shared by every implicit
/// step so that degenerate coefficient sets (tail = 0) reproduce the one-step
/// scheme bit for bit.
StateVector assemble_rhs(const StateVector& f, double b, const StateVector& u, double c,
                         const StateVector& w) {
    require_conformable(f, u);
    require_conformable(f, w);
    StateVector rhs(f.grid, f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        rhs.values[i] = f.values[i] + b * u.values[i] - c * w.values[i];
    }
    return rhs;
}

/// Solve (sigma I + theta (A + B)) x = rhs and verify the residual against
/// the right-hand side magnitude.
StateVector solve_checked(const ProblemDefinition& problem, double sigma, double theta,
                          const StateVector& rhs, int step_index, double* residual_out) {
    StateVector x = problem.solve_shifted(sigma, theta, rhs);

    StateVector applied = problem.apply_elliptic(x);
    const StateVector lower = problem.apply_lower_order(x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        applied.values[i] = sigma * x.values[i] + theta * (applied.values[i] + lower.values[i]) -
                            rhs.values[i];
    }
    const double residual = problem.h_norm(applied);
    const double scale = std::max(problem.h_norm(rhs), 1e-300);
    if (!(residual <= kStepResidualTol * scale)) {
        throw IntegrationError(step_index, residual,
                               step_message(step_index, "shifted linear solve failed"));
    }
    if (residual_out) *residual_out = residual;
    return x;
}

StepResult linear_step_with_coefficients(const ProblemDefinition& problem,
                                         const Bdf2Coefficients& coeffs, double t,
                                         const StateVector& u_prev, const StateVector& u_prev2,
                                         int step_index) {
    const StateVector rhs =
        assemble_rhs(problem.forcing(t), coeffs.mid, u_prev, coeffs.tail, u_prev2);
    SolverDiagnostics diag;
    diag.step_index = step_index;
    diag.linear_solves = 1;
    StateVector u = solve_checked(problem, coeffs.lead, 1.0, rhs, step_index, &diag.residual);
    return {std::move(u), diag};
}

StepResult semilinear_step_with_coefficients(const ProblemDefinition& problem,
                                             const Bdf2Coefficients& coeffs, double t,
                                             const StateVector& u_prev,
                                             const StateVector& u_prev2, double ratio,
                                             int step_index, const FixedPointConfig& config) {
    // History part of the right-hand side; the state-dependent forcing is
    // re-evaluated each sweep.
    StateVector history(u_prev.grid, u_prev.size());
    for (std::size_t i = 0; i < u_prev.size(); ++i) {
        history.values[i] = coeffs.mid * u_prev.values[i] - coeffs.tail * u_prev2.values[i];
    }

    // Second-order predictor: linear extrapolation through the last two states.
    StateVector iterate = scaled_sum(1.0 + ratio, u_prev, -ratio, u_prev2);

    SolverDiagnostics diag;
    diag.step_index = step_index;
    double diff = 0.0;
    for (int m = 1; m <= config.max_iterations; ++m) {
        StateVector rhs = problem.forcing(t, iterate);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs.values[i] += history.values[i];
        StateVector next = problem.solve_shifted(coeffs.lead, 1.0, rhs);
        ++diag.linear_solves;
        diag.nonlinear_iterations = m;
        diff = problem.h_norm(next - iterate);
        iterate = std::move(next);
        if (diff <= config.tolerance) {
            diag.residual = diff;
            return {std::move(iterate), diag};
        }
        if (!std::isfinite(diff)) break;
    }
    throw IntegrationError(
        step_index, diff,
        step_message(step_index,
                     "fixed-point iteration did not converge (step size too large?)"));
}

}  // namespace

Bdf2Coefficients bdf2_coefficients(double step, double ratio) {
    if (!(step > 0.0)) throw std::invalid_argument("step size must be positive");
    if (!(ratio >= 0.0)) throw std::invalid_argument("step ratio must be nonnegative");
    const double weight = ratio / (1.0 + ratio);
    return {(1.0 + weight) / step, (1.0 + ratio) / step, ratio * weight / step};
}

StateVector bdf2_divided_difference(const Bdf2Coefficients& coeffs, const StateVector& u,
                                    const StateVector& v, const StateVector& w) {
    require_conformable(u, v);
    require_conformable(u, w);
    StateVector out(u.grid, u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        out.values[i] =
            coeffs.lead * u.values[i] - coeffs.mid * v.values[i] + coeffs.tail * w.values[i];
    }
    return out;
}

double decomposition_residual(const Bdf2Coefficients& coeffs, double step, double weight,
                              const StateVector& u, const StateVector& v,
                              const StateVector& w) {
    const StateVector lhs = bdf2_divided_difference(coeffs, u, v, w);

    const StateVector du = scaled_sum(1.0 / step, u, -1.0 / step, v);
    StateVector rhs = du;
    if (weight > 0.0) {
        const double prev_step = step * (1.0 - weight) / weight;
        const StateVector dv = scaled_sum(1.0 / prev_step, v, -1.0 / prev_step, w);
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            rhs.values[i] = weight * (du.values[i] - dv.values[i]) + du.values[i];
        }
    }
    return euclidean_norm(lhs - rhs);
}

const char* to_string(StartScheme s) {
    return s == StartScheme::trapezoidal ? "tf" : "be";
}

const char* to_string(SchemeMode m) {
    return m == SchemeMode::linear ? "linear" : "semilinear";
}

namespace {

StepResult start_trapezoidal_result(const ProblemDefinition& problem, double k1,
                                    const StateVector& u0, const FixedPointConfig& config) {
    if (!(k1 > 0.0)) throw std::invalid_argument("starting step must be positive");

    const StateVector au0 = problem.apply_elliptic(u0);
    const StateVector bu0 = problem.apply_lower_order(u0);

    // rhs(f_half) = f_half + u0/k1 - (A+B) u0 / 2, with the half-level
    // forcing averaged between the endpoints like the states.
    auto assemble = [&](const StateVector& f_half) {
        StateVector rhs(u0.grid, u0.size());
        for (std::size_t i = 0; i < u0.size(); ++i) {
            rhs.values[i] = f_half.values[i] + u0.values[i] / k1 -
                            0.5 * (au0.values[i] + bu0.values[i]);
        }
        return rhs;
    };

    SolverDiagnostics diag;
    diag.step_index = 1;
    if (!problem.semilinear()) {
        const StateVector f_half =
            scaled_sum(0.5, problem.forcing(0.0), 0.5, problem.forcing(k1));
        const StateVector rhs = assemble(f_half);
        diag.linear_solves = 1;
        StateVector u1 = solve_checked(problem, 1.0 / k1, 0.5, rhs, 1, &diag.residual);
        return {std::move(u1), diag};
    }

    const StateVector f0 = problem.forcing(0.0, u0);
    StateVector iterate = u0;
    double diff = 0.0;
    for (int m = 1; m <= config.max_iterations; ++m) {
        const StateVector f_half = scaled_sum(0.5, f0, 0.5, problem.forcing(k1, iterate));
        const StateVector rhs = assemble(f_half);
        StateVector next = problem.solve_shifted(1.0 / k1, 0.5, rhs);
        ++diag.linear_solves;
        diag.nonlinear_iterations = m;
        diff = problem.h_norm(next - iterate);
        iterate = std::move(next);
        if (diff <= config.tolerance) {
            diag.residual = diff;
            return {std::move(iterate), diag};
        }
        if (!std::isfinite(diff)) break;
    }
    throw IntegrationError(1, diff, "step 1: trapezoidal start did not converge");
}

StepResult start_backward_euler_result(const ProblemDefinition& problem, double k1,
                                       const StateVector& u0, const FixedPointConfig& config) {
    if (!(k1 > 0.0)) throw std::invalid_argument("starting step must be positive");
    const Bdf2Coefficients coeffs = bdf2_coefficients(k1, 0.0);
    if (!problem.semilinear()) {
        return linear_step_with_coefficients(problem, coeffs, k1, u0, u0, 1);
    }
    return semilinear_step_with_coefficients(problem, coeffs, k1, u0, u0, 0.0, 1, config);
}

}  // namespace

StateVector start_trapezoidal(const ProblemDefinition& problem, double k1,
                              const StateVector& u0, const FixedPointConfig& config) {
    return start_trapezoidal_result(problem, k1, u0, config).state;
}

StateVector start_backward_euler(const ProblemDefinition& problem, double k1,
                                 const StateVector& u0, const FixedPointConfig& config) {
    return start_backward_euler_result(problem, k1, u0, config).state;
}

StepResult step_linear(const ProblemDefinition& problem, const TimeMesh& mesh, int n,
                       const StateVector& u_prev, const StateVector& u_prev2) {
    if (n < 2 || n > mesh.num_steps()) throw std::invalid_argument("step index out of range");
    const Bdf2Coefficients coeffs = bdf2_coefficients(mesh.step(n), mesh.ratio(n));
    return linear_step_with_coefficients(problem, coeffs, mesh.time(n), u_prev, u_prev2, n);
}

StepResult step_semilinear(const ProblemDefinition& problem, const TimeMesh& mesh, int n,
                           const StateVector& u_prev, const StateVector& u_prev2,
                           const FixedPointConfig& config) {
    if (n < 2 || n > mesh.num_steps()) throw std::invalid_argument("step index out of range");
    const Bdf2Coefficients coeffs = bdf2_coefficients(mesh.step(n), mesh.ratio(n));
    return semilinear_step_with_coefficients(problem, coeffs, mesh.time(n), u_prev, u_prev2,
                                             mesh.ratio(n), n, config);
}

Trajectory integrate(const ProblemDefinition& problem, const TimeMesh& mesh, StartScheme start,
                     SchemeMode mode, const FixedPointConfig& config) {
    if (mode == SchemeMode::linear && problem.semilinear()) {
        throw std::invalid_argument("semilinear problem requires semilinear mode");
    }

    Trajectory trajectory{mesh, {}, {}, mode, start};
    const int n_steps = mesh.num_steps();
    trajectory.states.reserve(static_cast<std::size_t>(n_steps) + 1);
    trajectory.diagnostics.reserve(static_cast<std::size_t>(n_steps));
    trajectory.states.push_back(problem.initial_state());

    try {
        const double k1 = mesh.first_step();
        StepResult first =
            (start == StartScheme::trapezoidal)
                ? start_trapezoidal_result(problem, k1, trajectory.states[0], config)
                : start_backward_euler_result(problem, k1, trajectory.states[0], config);
        trajectory.states.push_back(std::move(first.state));
        trajectory.diagnostics.push_back(first.diagnostics);

        for (int n = 2; n <= n_steps; ++n) {
            const StateVector& prev = trajectory.states[static_cast<std::size_t>(n - 1)];
            const StateVector& prev2 = trajectory.states[static_cast<std::size_t>(n - 2)];
            StepResult result = (mode == SchemeMode::linear)
                                    ? step_linear(problem, mesh, n, prev, prev2)
                                    : step_semilinear(problem, mesh, n, prev, prev2, config);
            trajectory.states.push_back(std::move(result.state));
            trajectory.diagnostics.push_back(result.diagnostics);
        }
    } catch (IntegrationError& err) {
        err.partial_trajectory = std::make_shared<Trajectory>(std::move(trajectory));
        throw;
    }
    return trajectory;
}

void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out) {
    out << "n,t,diag_iters,diag_residual\n";
    char buf[128];
    for (std::size_t n = 0; n < trajectory.states.size(); ++n) {
        int iters = 0;
        double residual = 0.0;
        if (n >= 1 && n - 1 < trajectory.diagnostics.size()) {
            iters = trajectory.diagnostics[n - 1].nonlinear_iterations;
            residual = trajectory.diagnostics[n - 1].residual;
        }
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%d,%.17g\n", n,
                      trajectory.mesh.time(static_cast<int>(n)), iters, residual);
        out << buf;
    }
}

static_assert(std::endian::native == std::endian::little,
              "trajectory dumps are defined little-endian");

void write_trajectory_states(const Trajectory& trajectory, std::ostream& out) {
    const std::uint64_t header[3] = {trajectory.states.size(),
                                     trajectory.states.empty() ? 0 : trajectory.states[0].size(),
                                     1};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    for (const StateVector& state : trajectory.states) {
        out.write(reinterpret_cast<const char*>(state.values.data()),
                  static_cast<std::streamsize>(state.values.size() * sizeof(double)));
    }
}

std::vector<std::vector<double>> read_trajectory_states(std::istream& in) {
    std::uint64_t header[3] = {0, 0, 0};
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!in || header[2] != 1) throw std::invalid_argument("bad state dump header");
    std::vector<std::vector<double>> states(header[0], std::vector<double>(header[1]));
    for (auto& row : states) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
    }
    if (!in) throw std::invalid_argument("truncated state dump");
    return states;
}

}  // namespace vbdf2
