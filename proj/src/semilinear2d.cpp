#include "vbdf2/semilinear2d.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace vbdf2 {

namespace {

constexpr double kPi = std::numbers::pi;

class Semilinear2DProblem final : public ProblemDefinition {
public:
    Semilinear2DProblem(int grid_points, double epsilon)
        : m_(grid_points), eps_(epsilon), dx_(1.0 / grid_points) {
        if (m_ < 4 || m_ % 2 != 0) {
            throw std::invalid_argument("semilinear2d needs an even grid count >= 4");
        }
        if (!(eps_ > 0.0)) throw std::invalid_argument("diffusion must be positive");

        // Laplacian symbol on the half-spectrum layout of the real transform:
        // row j carries the signed y-wavenumber, column q the x-wavenumber.
        symbol_.resize(spectral_size());
        for (int j = 0; j < m_; ++j) {
            const int p = (j <= m_ / 2) ? j : j - m_;
            for (int q = 0; q <= m_ / 2; ++q) {
                symbol_[spectral_index(j, q)] =
                    eps_ * 4.0 * kPi * kPi * (static_cast<double>(p) * p +
                                              static_cast<double>(q) * q);
            }
        }

        // Plans are created once against scratch buffers with the unaligned
        // flag, then executed on per-call arrays; that keeps concurrent
        // operator applications safe.
        std::vector<double> real_scratch(static_cast<std::size_t>(m_) * m_);
        std::vector<std::complex<double>> spec_scratch(spectral_size());
        forward_ = fftw_plan_dft_r2c_2d(
            m_, m_, real_scratch.data(),
            reinterpret_cast<fftw_complex*>(spec_scratch.data()),
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        inverse_ = fftw_plan_dft_c2r_2d(
            m_, m_, reinterpret_cast<fftw_complex*>(spec_scratch.data()),
            real_scratch.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!forward_ || !inverse_) throw std::runtime_error("fft planning failed");
    }

    ~Semilinear2DProblem() override {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }

    Semilinear2DProblem(const Semilinear2DProblem&) = delete;
    Semilinear2DProblem& operator=(const Semilinear2DProblem&) = delete;

    GridTag grid() const override {
        return {GridTopology::SquarePeriodic, static_cast<std::int32_t>(m_)};
    }

    bool semilinear() const override { return true; }

    StateVector apply_elliptic(const StateVector& v) const override {
        check(v);
        return spectral_multiply(v, [this](std::size_t k) { return symbol_[k]; });
    }

    StateVector forcing(double t, const StateVector& u) const override {
        check(u);
        // f(t, u) = u - u^3 + g(t) with
        // g = u_t - eps Lap(u) - u + u^3 of the exact solution in closed form.
        const double decay = std::exp(-kPi * kPi * t);
        const double linear_part = 8.0 * kPi * kPi * eps_ - kPi * kPi - 1.0;
        StateVector f(u.grid, u.size());
        for (int j = 0; j < m_; ++j) {
            const double cy = std::cos(2.0 * kPi * (j * dx_));
            for (int i = 0; i < m_; ++i) {
                const double ue = std::sin(2.0 * kPi * (i * dx_)) * cy * decay;
                const double g = linear_part * ue + ue * ue * ue;
                const double ui = u.values[index(i, j)];
                f.values[index(i, j)] = ui - ui * ui * ui + g;
            }
        }
        return f;
    }

    StateVector solve_shifted(double sigma, double theta, const StateVector& rhs) const override {
        check(rhs);
        if (!(sigma > 0.0)) throw std::invalid_argument("shift must be positive");
        return spectral_multiply(
            rhs, [this, sigma, theta](std::size_t k) { return 1.0 / (sigma + theta * symbol_[k]); });
    }

    double h_inner(const StateVector& a, const StateVector& b) const override {
        check(a);
        require_conformable(a, b);
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
        return s * dx_ * dx_;
    }

    double v_seminorm(const StateVector& v) const override {
        check(v);
        // Forward difference quotients in both directions; on the unit square
        // the cell area cancels the squared spacing in the quotients.
        double s = 0.0;
        for (int j = 0; j < m_; ++j) {
            const int jp = (j + 1) % m_;
            for (int i = 0; i < m_; ++i) {
                const int ip = (i + 1) % m_;
                const double dxv = v.values[index(ip, j)] - v.values[index(i, j)];
                const double dyv = v.values[index(i, jp)] - v.values[index(i, j)];
                s += dxv * dxv + dyv * dyv;
            }
        }
        return std::sqrt(s);
    }

    StateVector initial_state() const override { return exact_state(0.0); }

    bool has_exact_solution() const override { return true; }

    StateVector exact_state(double t) const override {
        StateVector u(grid(), static_cast<std::size_t>(m_) * m_);
        const double decay = std::exp(-kPi * kPi * t);
        for (int j = 0; j < m_; ++j) {
            const double cy = std::cos(2.0 * kPi * (j * dx_));
            for (int i = 0; i < m_; ++i) {
                u.values[index(i, j)] = std::sin(2.0 * kPi * (i * dx_)) * cy * decay;
            }
        }
        return u;
    }

    double gamma_bound(double t) const override {
        // Rough local Lipschitz estimate of u - u^3 near the exact orbit,
        // converted to the energy norm through the first nonzero eigenvalue
        // of the diffusion operator.
        const double amplitude = std::exp(-kPi * kPi * t) + 1.0;
        const double lipschitz = 1.0 + 3.0 * amplitude * amplitude;
        return lipschitz / (2.0 * kPi * std::sqrt(eps_));
    }

private:
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * m_ + static_cast<std::size_t>(i);
    }

    std::size_t spectral_index(int j, int q) const {
        return static_cast<std::size_t>(j) * (m_ / 2 + 1) + static_cast<std::size_t>(q);
    }

    std::size_t spectral_size() const {
        return static_cast<std::size_t>(m_) * (m_ / 2 + 1);
    }

    void check(const StateVector& v) const {
        if (v.grid != grid() || v.size() != static_cast<std::size_t>(m_) * m_) {
            throw std::invalid_argument("state does not match semilinear2d grid");
        }
    }

    template <typename SymbolFn>
    StateVector spectral_multiply(const StateVector& v, SymbolFn&& factor) const {
        std::vector<double> real(v.values);
        std::vector<std::complex<double>> spec(spectral_size());
        fftw_execute_dft_r2c(forward_, real.data(),
                             reinterpret_cast<fftw_complex*>(spec.data()));
        for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= factor(k);
        StateVector out(v.grid, v.size());
        fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(spec.data()),
                             out.values.data());
        const double scale = 1.0 / (static_cast<double>(m_) * m_);
        for (double& x : out.values) x *= scale;
        return out;
    }

    int m_;
    double eps_;
    double dx_;
    std::vector<double> symbol_;
    fftw_plan forward_;
    fftw_plan inverse_;
};

}  // namespace

std::unique_ptr<ProblemDefinition> semilinear2d_problem(int grid_points, double epsilon) {
    return std::make_unique<Semilinear2DProblem>(grid_points, epsilon);
}

}  // namespace vbdf2
