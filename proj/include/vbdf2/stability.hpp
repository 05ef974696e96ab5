#pragma once

#include <string>

#include "vbdf2/bdf2.hpp"
#include "vbdf2/problem.hpp"
#include "vbdf2/time_mesh.hpp"

namespace vbdf2 {

/// Step-ratio ceiling for zero-stability of the two-step scheme: sqrt(2) + 1.
/// Below it the scheme is stable in the strongest set of norms.
double ratio_limit_zero_stability();

/// Relaxed step-ratio ceiling (3 + sqrt(17)) / 2 under which the energy-norm
/// stability bounds still hold.
double ratio_limit_relaxed();

enum class RatioRegime { zero_stability, relaxed };

struct RatioCheck {
    bool pass = false;
    double max_ratio = 0.0;
    double limit = 0.0;
    int offending_index = 0;  ///< first n with r_n >= limit; 0 when passing
};

/// Strict check r_n < limit for every ratio of the mesh.
RatioCheck check_ratio_bound(const TimeMesh& mesh, RatioRegime regime);

/// Largest admissible max step under the zero-stability regime,
/// c1 / ((4 + 2 sqrt(2)) gamma^2); unbounded when gamma = 0 (no lower-order
/// perturbation: unconditional stability).
double max_step_bound_zero_stability(double gamma_max, double c1);

/// Infimum of the admissible coefficient in the relaxed-regime step
/// condition: max{ (2+2R)/(2+R), (2+2R)/(2+3R-R^2) } for 1 <= R below the
/// relaxed limit (where the second denominator is positive). Callers add
/// their own margin.
double relaxed_stability_coefficient(double max_ratio);

/// The H-norm stability constant (1+R)^2 / (1 + 2R - R^2), finite for
/// 1 <= R below the zero-stability limit. The associated step condition is
/// 2 c3 gamma^2 k_max <= c2 < 1.
double h_stability_constant(double max_ratio);

struct CertificateResult {
    enum class Status { holds, violated, not_applicable };
    Status status = Status::not_applicable;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string reason;  ///< set when not applicable

    bool holds() const { return status == Status::holds; }
};

/// Checks the proved a priori energy bound on a computed linear-mode
/// trajectory: at the final index,
///
///   k_N |dU^N|^2 + sum_{j=2..N-1} k_j s_j |dU^j|^2 + max_{2<=j<=N} ||U^j||^2
///     <= C1 ( sum_{j=2..N} k_j |f^j|^2 + k_2 s_2 |dU^1|^2 + ||U^1||^2 ),
///
/// with dU^j the first divided difference and
/// C1 = (4+2 sqrt 2)/(1-c1) * exp((4+2 sqrt 2)/(1-c1) * gamma^2 t^N).
///
/// Preconditions (refused as not_applicable, distinct from a violation):
/// linear-mode run, every ratio strictly below the zero-stability limit, and
/// (4+2 sqrt 2) gamma^2 k_max <= c1.
CertificateResult energy_stability_certificate(const Trajectory& trajectory,
                                               const ProblemDefinition& problem, double c1);

}  // namespace vbdf2
