#include "vbdf2/heat1d.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace vbdf2 {

namespace {

class Heat1DProblem final : public ProblemDefinition {
public:
    Heat1DProblem(int cells, double b)
        : cells_(cells), b_(b), dx_(1.0 / cells), inv_dx2_(1.0 / (dx_ * dx_)) {
        if (cells < 2) throw std::invalid_argument("heat1d needs at least 2 cells");
        // Smallest eigenvalue of the discrete second-difference operator;
        // |B v| = |b| |v| <= (|b| / sqrt(lambda_min)) ||v||.
        const double sqrt_lambda_min =
            2.0 * cells * std::sin(std::numbers::pi / (2.0 * cells));
        gamma_ = std::abs(b_) / sqrt_lambda_min;
    }

    GridTag grid() const override {
        return {GridTopology::IntervalDirichlet, static_cast<std::int32_t>(cells_)};
    }

    StateVector apply_elliptic(const StateVector& v) const override {
        check(v);
        const std::size_t n = v.size();
        StateVector out(v.grid, n);
        for (std::size_t i = 0; i < n; ++i) {
            const double left = (i == 0) ? 0.0 : v.values[i - 1];
            const double right = (i == n - 1) ? 0.0 : v.values[i + 1];
            out.values[i] = (-left + 2.0 * v.values[i] - right) * inv_dx2_;
        }
        return out;
    }

    StateVector apply_lower_order(const StateVector& v) const override {
        check(v);
        StateVector out(v.grid, v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = -b_ * v.values[i];
        return out;
    }

    StateVector forcing(double t) const override {
        // f = u_t + A u + B u for the manufactured solution: the central
        // difference of x(1-x) is exact, so this is the closed form
        // exp(-t) (2 - (1+b) x (1-x)).
        StateVector f(grid(), static_cast<std::size_t>(cells_ - 1));
        const double decay = std::exp(-t);
        for (int i = 1; i < cells_; ++i) {
            const double x = i * dx_;
            f.values[static_cast<std::size_t>(i - 1)] = decay * (2.0 - (1.0 + b_) * x * (1.0 - x));
        }
        return f;
    }

    StateVector solve_shifted(double sigma, double theta, const StateVector& rhs) const override {
        check(rhs);
        // (sigma I + theta (A + B)) reduces to the constant tridiagonal
        // [off, diag, off]; solve by the Thomas recursion.
        const double diag = sigma - theta * b_ + 2.0 * theta * inv_dx2_;
        const double off = -theta * inv_dx2_;
        const std::size_t n = rhs.size();

        std::vector<double> upper(n, 0.0);
        StateVector x(rhs.grid, n);

        double pivot = diag;
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw std::runtime_error("heat1d: singular shifted system");
        }
        upper[0] = off / pivot;
        x.values[0] = rhs.values[0] / pivot;
        for (std::size_t i = 1; i < n; ++i) {
            pivot = diag - off * upper[i - 1];
            if (pivot == 0.0 || !std::isfinite(pivot)) {
                throw std::runtime_error("heat1d: singular shifted system");
            }
            upper[i] = off / pivot;
            x.values[i] = (rhs.values[i] - off * x.values[i - 1]) / pivot;
        }
        for (std::size_t i = n - 1; i-- > 0;) {
            x.values[i] -= upper[i] * x.values[i + 1];
        }
        return x;
    }

    double h_inner(const StateVector& a, const StateVector& b) const override {
        check(a);
        require_conformable(a, b);
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
        return dx_ * s;
    }

    double v_seminorm(const StateVector& v) const override {
        check(v);
        // Difference-quotient H1 seminorm with the zero boundary values
        // included; coincides with (A v, v)^(1/2) on this grid.
        const std::size_t n = v.size();
        double s = v.values[0] * v.values[0] + v.values[n - 1] * v.values[n - 1];
        for (std::size_t i = 1; i < n; ++i) {
            const double d = v.values[i] - v.values[i - 1];
            s += d * d;
        }
        return std::sqrt(s / dx_);
    }

    StateVector initial_state() const override { return exact_state(0.0); }

    bool has_exact_solution() const override { return true; }

    StateVector exact_state(double t) const override {
        StateVector u(grid(), static_cast<std::size_t>(cells_ - 1));
        const double decay = std::exp(-t);
        for (int i = 1; i < cells_; ++i) {
            const double x = i * dx_;
            u.values[static_cast<std::size_t>(i - 1)] = x * (1.0 - x) * decay;
        }
        return u;
    }

    double gamma_bound(double) const override { return gamma_; }

private:
    void check(const StateVector& v) const {
        if (v.grid != grid() || v.size() != static_cast<std::size_t>(cells_ - 1)) {
            throw std::invalid_argument("state does not match heat1d grid");
        }
    }

    int cells_;
    double b_;
    double dx_;
    double inv_dx2_;
    double gamma_;
};

}  // namespace

std::unique_ptr<ProblemDefinition> heat1d_problem(int cells, double b) {
    return std::make_unique<Heat1DProblem>(cells, b);
}

}  // namespace vbdf2
