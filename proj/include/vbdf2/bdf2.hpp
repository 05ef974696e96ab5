#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbdf2/problem.hpp"
#include "vbdf2/state.hpp"
#include "vbdf2/time_mesh.hpp"

namespace vbdf2 {

/// Coefficients of the variable two-step backward difference
///
///   (lead U^n - mid U^{n-1} + tail U^{n-2})
///     = ((1+s_n) U^n - (1+r_n) U^{n-1} + r_n s_n U^{n-2}) / k_n.
///
/// lead - mid + tail = 0, so constants are annihilated, and the difference
/// reproduces the derivative exactly on polynomials of degree <= 2. With
/// ratio 0 the formula degenerates to the backward Euler difference.
struct Bdf2Coefficients {
    double lead = 0.0;  ///< (1 + s_n) / k_n
    double mid = 0.0;   ///< (1 + r_n) / k_n
    double tail = 0.0;  ///< r_n s_n / k_n
};

Bdf2Coefficients bdf2_coefficients(double step, double ratio);

/// lead*u - mid*v + tail*w for consecutive states (u, v, w) = (U^n, U^{n-1}, U^{n-2}).
StateVector bdf2_divided_difference(const Bdf2Coefficients& coeffs, const StateVector& u,
                                    const StateVector& v, const StateVector& w);

/// Euclidean residual of the exact decomposition of the two-step difference
/// into  k_n s_n * (second divided difference) + (first divided difference).
/// An algebraic identity: the result is rounding noise relative to the
/// magnitude of the inputs.
double decomposition_residual(const Bdf2Coefficients& coeffs, double step, double weight,
                              const StateVector& u, const StateVector& v,
                              const StateVector& w);

struct SolverDiagnostics {
    int step_index = 0;
    int nonlinear_iterations = 0;  ///< 0 for purely linear solves
    double residual = 0.0;         ///< H-norm residual of the discrete equation
    int linear_solves = 0;
};

struct StepResult {
    StateVector state;
    SolverDiagnostics diagnostics;
};

struct FixedPointConfig {
    double tolerance = 1e-12;  ///< absolute, successive-iterate H-norm difference
    int max_iterations = 100;
};

enum class StartScheme { trapezoidal, backward_euler };
enum class SchemeMode { linear, semilinear };

const char* to_string(StartScheme s);
const char* to_string(SchemeMode m);

struct Trajectory {
    TimeMesh mesh;
    std::vector<StateVector> states;           ///< U^0..U^N
    std::vector<SolverDiagnostics> diagnostics;  ///< for steps 1..N
    SchemeMode mode = SchemeMode::linear;
    StartScheme start = StartScheme::backward_euler;

    const StateVector& state(int n) const { return states[static_cast<std::size_t>(n)]; }
};

/// Thrown when an implicit step cannot be completed. Carries the failing step
/// and, when raised inside integrate(), the trajectory computed so far.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(int step_index, double residual, const std::string& what)
        : std::runtime_error(what), step_index_(step_index), residual_(residual) {}

    int step_index() const { return step_index_; }
    double residual() const { return residual_; }

    std::shared_ptr<const Trajectory> partial_trajectory;

private:
    int step_index_;
    double residual_;
};

/// Trapezoidal starting value: U^1 solves
///   (U^1 - U^0)/k_1 + (A + B)(U^1 + U^0)/2 = (f^0 + f^1)/2
/// with the half-level forcing averaged between the endpoints, the same
/// convention as the states. Semilinear problems average f(0, U^0) and
/// f(k_1, U^1) and solve by fixed-point iteration.
StateVector start_trapezoidal(const ProblemDefinition& problem, double k1,
                              const StateVector& u0, const FixedPointConfig& config = {});

/// Backward Euler starting value: U^1 solves
///   (U^1 - U^0)/k_1 + (A + B) U^1 = f(k_1)
/// (the two-step difference with ratio 0). Semilinear problems use
/// f(k_1, U^1) and a fixed-point solve.
StateVector start_backward_euler(const ProblemDefinition& problem, double k1,
                                 const StateVector& u0, const FixedPointConfig& config = {});

/// One implicit linear step at index n >= 2:
///   (lead I + A + B) U^n = f(t^n) + mid U^{n-1} - tail U^{n-2}.
StepResult step_linear(const ProblemDefinition& problem, const TimeMesh& mesh, int n,
                       const StateVector& u_prev, const StateVector& u_prev2);

/// One implicit semilinear step at index n >= 2:
///   lead U^n + A U^n = f(t^n, U^n) + mid U^{n-1} - tail U^{n-2},
/// solved by fixed-point iteration against the shifted linear operator with
/// the two-point extrapolation (1+r_n) U^{n-1} - r_n U^{n-2} as predictor.
StepResult step_semilinear(const ProblemDefinition& problem, const TimeMesh& mesh, int n,
                           const StateVector& u_prev, const StateVector& u_prev2,
                           const FixedPointConfig& config = {});

/// Run the full integration: U^0 from the problem, U^1 from the chosen
/// starting scheme, then two-step steps up to t^N.
Trajectory integrate(const ProblemDefinition& problem, const TimeMesh& mesh,
                     StartScheme start, SchemeMode mode,
                     const FixedPointConfig& config = {});

/// Per-step diagnostics as CSV: header n,t,diag_iters,diag_residual.
void write_trajectory_csv(const Trajectory& trajectory, std::ostream& out);

/// Full-state binary dump: three little-endian 64-bit unsigned integers
/// (state count N+1, state length, format version 1) followed by the states
/// as row-major little-endian 8-byte floating point.
void write_trajectory_states(const Trajectory& trajectory, std::ostream& out);

/// Reads the payload of write_trajectory_states back as a state matrix.
std::vector<std::vector<double>> read_trajectory_states(std::istream& in);

}  // namespace vbdf2
