#pragma once

#include <memory>

#include "vbdf2/problem.hpp"

namespace vbdf2 {

/// Two-dimensional semilinear problem
///   u_t = eps (u_xx + u_yy) + u - u^3 + g(t, x, y)
/// on the periodic unit square, collocated on an M x M grid with the
/// diffusion handled in the discrete Fourier basis (the shifted solves are
/// diagonal there and exact).
///
/// g is manufactured in closed form from the exact solution
/// u(t, x, y) = sin(2 pi x) cos(2 pi y) exp(-pi^2 t); since that solution is
/// a single resolved Fourier mode and the nonlinearity acts pointwise, its
/// grid samples satisfy the semi-discrete system exactly for any even M >= 4.
std::unique_ptr<ProblemDefinition> semilinear2d_problem(int grid_points, double epsilon);

}  // namespace vbdf2
