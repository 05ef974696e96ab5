#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vbdf2/bdf2.hpp"
#include "vbdf2/problem.hpp"
#include "vbdf2/time_mesh.hpp"

namespace vbdf2 {

using StateFunction = std::function<StateVector(double)>;

/// The four discrete error functionals of a run, measured at grid nodes
/// against grid-sampled exact values:
///
///   e_linf_v  = max over n = 1..N of ||e^n||_H1
///   e_l2_hh   = ( sum_{n=2..N} k_n s_n | (e^n - e^{n-1}) / k_n |_L2^2 )^(1/2)
///   e_linf_h  = max over n = 1..N of |e^n|_L2
///   e_l2_v    = ( sum_{n=2..N} k_n ||e^n||_H1^2 )^(1/2)
struct ErrorReport {
    std::string scheme_label;
    int num_steps = 0;
    double e_linf_v = 0.0;
    double e_l2_hh = 0.0;
    double e_linf_h = 0.0;
    double e_l2_v = 0.0;
    std::vector<double> step_h_norms;  ///< |e^n|, n = 0..N
    std::vector<double> step_v_norms;  ///< ||e^n||_H1, n = 0..N
};

ErrorReport error_report(const Trajectory& trajectory, const ProblemDefinition& problem,
                         const StateFunction& exact, std::string scheme_label = {});

/// Convenience overload pulling the exact solution from the problem.
ErrorReport error_report(const Trajectory& trajectory, const ProblemDefinition& problem,
                         std::string scheme_label = {});

/// scheme,N,E_linf_V,E_l2_HH,E_linf_H,E_l2_V as one CSV row (no newline).
std::string error_report_csv_row(const ErrorReport& report);

/// Windowed first-difference seminorm
///   ( sum_{j=n1..n2-1} k_j s_j |(U^j - U^{j-1}) / k_j|^2 )^(1/2),  n1 >= 2,
/// the form the energy stability certificate is stated in (the experiment
/// functionals above instead sum n = 2..N with both endpoints included).
double l2_hh_seminorm(const Trajectory& trajectory, const ProblemDefinition& problem, int n1,
                      int n2);

/// Two-step consistency error at step n >= 2: the variable-coefficient
/// backward difference of exact samples minus the exact derivative at t^n.
/// Second order in k_n.
StateVector consistency_error_d2(const StateFunction& u, const StateFunction& u_prime,
                                 const TimeMesh& mesh, int n);

/// One-step consistency error at step n >= 1: (u^n - u^{n-1})/k_n - u'(t^n).
/// First order in k_n.
StateVector consistency_error_d1(const StateFunction& u, const StateFunction& u_prime,
                                 const TimeMesh& mesh, int n);

/// log2(error_coarse / error_fine), the observed order across a doubling of N.
double observed_order(double error_coarse, double error_fine);

}  // namespace vbdf2
