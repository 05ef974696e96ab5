#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>

#include "vbdf2/state.hpp"

namespace vbdf2 {

/// Abstract parabolic problem
///
///   u'(t) + A u(t) + B u(t) = f(t)          (linear mode)
///   u'(t) + A u(t)          = f(t, u(t))    (semilinear mode, B = 0)
///
/// posed on a discretized state space. A is symmetric positive definite,
/// B a lower-order perturbation with |B v| <= gamma(t) ||v||.
///
/// Implementations are immutable after construction and safe to share
/// read-only across threads; operator applications own their scratch
/// per call.
class ProblemDefinition {
public:
    virtual ~ProblemDefinition() = default;

    virtual GridTag grid() const = 0;

    /// True when the forcing depends on the state (f = f(t, u)).
    virtual bool semilinear() const { return false; }

    /// A v.
    virtual StateVector apply_elliptic(const StateVector& v) const = 0;

    /// B v. Zero by default (and for every semilinear problem).
    virtual StateVector apply_lower_order(const StateVector& v) const {
        return zeros_like(v);
    }

    /// f(t) for linear-mode problems.
    virtual StateVector forcing(double t) const {
        (void)t;
        throw std::logic_error("problem has no state-independent forcing");
    }

    /// f(t, u). Defaults to the state-independent forcing so linear problems
    /// can be driven through the semilinear machinery unchanged.
    virtual StateVector forcing(double t, const StateVector& u) const {
        (void)u;
        return forcing(t);
    }

    /// Solve (sigma I + theta (A + B)) x = rhs. theta is 1 for implicit steps
    /// and 1/2 for the trapezoidal start.
    virtual StateVector solve_shifted(double sigma, double theta,
                                      const StateVector& rhs) const = 0;

    /// Discrete L2 inner product of the state space.
    virtual double h_inner(const StateVector& a, const StateVector& b) const = 0;

    double h_norm(const StateVector& v) const { return std::sqrt(h_inner(v, v)); }

    /// Discrete H1 seminorm, the computable stand-in for the energy norm
    /// (A v, v)^(1/2).
    virtual double v_seminorm(const StateVector& v) const = 0;

    virtual StateVector initial_state() const = 0;

    virtual bool has_exact_solution() const { return false; }

    virtual StateVector exact_state(double t) const {
        (void)t;
        throw std::logic_error("problem has no exact solution");
    }

    /// Pointwise-in-time bound gamma(t) with |B v| <= gamma(t) ||v||
    /// (resp. the local Lipschitz bound of f(t, .) in semilinear mode).
    virtual double gamma_bound(double t) const = 0;
};

}  // namespace vbdf2
