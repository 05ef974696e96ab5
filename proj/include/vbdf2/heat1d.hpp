#pragma once

#include <memory>

#include "vbdf2/problem.hpp"

namespace vbdf2 {

/// One-dimensional heat problem u_t = u_xx + b u + f(t, x) on [0, 1] with
/// homogeneous Dirichlet boundary values, discretized by second-order central
/// differences on cells of width 1/M (interior unknowns at x_i = i/M,
/// i = 1..M-1).
///
/// The forcing is manufactured so that grid samples of
/// u(t, x) = x (1 - x) exp(-t) satisfy the semi-discrete system exactly:
/// because the exact solution is quadratic in x, the central difference of it
/// is exact and time discretization is the only error source.
std::unique_ptr<ProblemDefinition> heat1d_problem(int cells, double b);

}  // namespace vbdf2
