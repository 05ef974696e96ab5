#include "vbdf2/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vbdf2 {

namespace {

const double kRatioLimitR0 = std::sqrt(2.0) + 1.0;
const double kRatioLimitR1 = (3.0 + std::sqrt(17.0)) / 2.0;
const double kEnergyFactor = 4.0 + 2.0 * std::sqrt(2.0);

double max_gamma_over_mesh(const ProblemDefinition& problem, const TimeMesh& mesh) {
    double gamma = 0.0;
    for (double t : mesh.node_times()) gamma = std::max(gamma, problem.gamma_bound(t));
    return gamma;
}

}  // namespace

double ratio_limit_zero_stability() { return kRatioLimitR0; }

double ratio_limit_relaxed() { return kRatioLimitR1; }

RatioCheck check_ratio_bound(const TimeMesh& mesh, RatioRegime regime) {
    RatioCheck check;
    check.limit = (regime == RatioRegime::zero_stability) ? kRatioLimitR0 : kRatioLimitR1;
    check.pass = true;
    for (int n = 2; n <= mesh.num_steps(); ++n) {
        const double r = mesh.ratio(n);
        check.max_ratio = std::max(check.max_ratio, r);
        if (check.pass && !(r < check.limit)) {
            check.pass = false;
            check.offending_index = n;
        }
    }
    return check;
}

double max_step_bound_zero_stability(double gamma_max, double c1) {
    if (!(gamma_max >= 0.0)) throw std::invalid_argument("gamma must be nonnegative");
    if (!(c1 > 0.0 && c1 < 1.0)) throw std::invalid_argument("c1 must lie in (0, 1)");
    if (gamma_max == 0.0) return std::numeric_limits<double>::infinity();
    return c1 / (kEnergyFactor * gamma_max * gamma_max);
}

double relaxed_stability_coefficient(double max_ratio) {
    if (!(max_ratio >= 1.0 && max_ratio < kRatioLimitR1)) {
        throw std::invalid_argument("ratio must lie in [1, relaxed limit)");
    }
    const double r = max_ratio;
    return std::max((2.0 + 2.0 * r) / (2.0 + r),
                    (2.0 + 2.0 * r) / (2.0 + 3.0 * r - r * r));
}

double h_stability_constant(double max_ratio) {
    if (!(max_ratio >= 1.0 && max_ratio < kRatioLimitR0)) {
        throw std::invalid_argument("ratio must lie in [1, zero-stability limit)");
    }
    const double r = max_ratio;
    return (1.0 + r) * (1.0 + r) / (1.0 + 2.0 * r - r * r);
}

CertificateResult energy_stability_certificate(const Trajectory& trajectory,
                                               const ProblemDefinition& problem, double c1) {
    if (!(c1 > 0.0 && c1 < 1.0)) throw std::invalid_argument("c1 must lie in (0, 1)");

    CertificateResult result;
    if (trajectory.mode != SchemeMode::linear) {
        result.reason = "certificate applies to linear-mode runs only";
        return result;
    }

    const TimeMesh& mesh = trajectory.mesh;
    const RatioCheck ratio_check = check_ratio_bound(mesh, RatioRegime::zero_stability);
    if (!ratio_check.pass) {
        result.reason = "step ratio at n=" + std::to_string(ratio_check.offending_index) +
                        " reaches the zero-stability limit";
        return result;
    }

    const MeshStats stats = mesh_stats(mesh);
    const double gamma = max_gamma_over_mesh(problem, mesh);
    if (kEnergyFactor * gamma * gamma * stats.max_step > c1) {
        result.reason = "max step exceeds the admissible bound for this gamma and c1";
        return result;
    }

    const int n_final = mesh.num_steps();
    auto diff_norm = [&](int j) {
        return problem.h_norm(trajectory.state(j) - trajectory.state(j - 1)) / mesh.step(j);
    };

    double lhs = mesh.step(n_final) * diff_norm(n_final) * diff_norm(n_final);
    for (int j = 2; j < n_final; ++j) {
        const double d = diff_norm(j);
        lhs += mesh.step(j) * mesh.weight(j) * d * d;
    }
    double max_v = 0.0;
    for (int j = 2; j <= n_final; ++j) {
        max_v = std::max(max_v, problem.v_seminorm(trajectory.state(j)));
    }
    lhs += max_v * max_v;

    double forcing_sum = 0.0;
    for (int j = 2; j <= n_final; ++j) {
        const double f_norm = problem.h_norm(problem.forcing(mesh.time(j)));
        forcing_sum += mesh.step(j) * f_norm * f_norm;
    }
    const double d1 = diff_norm(1);
    const double v1 = problem.v_seminorm(trajectory.state(1));
    const double data = forcing_sum + mesh.step(2) * mesh.weight(2) * d1 * d1 + v1 * v1;

    const double growth = kEnergyFactor / (1.0 - c1);
    const double big_c1 = growth * std::exp(growth * gamma * gamma * mesh.time(n_final));

    result.lhs = lhs;
    result.rhs = big_c1 * data;
    result.status = (lhs <= result.rhs) ? CertificateResult::Status::holds
                                        : CertificateResult::Status::violated;
    return result;
}

}  // namespace vbdf2
