#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vbdf2 {

/// Identifies the spatial grid a state lives on. States from different grids
/// must never be combined.
enum class GridTopology : std::uint8_t {
    Generic,            ///< plain coefficient vector (ODE systems, fixtures)
    IntervalDirichlet,  ///< interior values of [0,1] with zero boundary, extent = cell count
    SquarePeriodic,     ///< extent x extent periodic grid on [0,1]^2
};

struct GridTag {
    GridTopology topology = GridTopology::Generic;
    std::int32_t extent = 0;

    friend bool operator==(const GridTag&, const GridTag&) = default;
};

/// An element of the discretized state space: a flat array of nodal values
/// plus the grid metadata needed to check conformability.
struct StateVector {
    GridTag grid;
    std::vector<double> values;

    StateVector() = default;
    StateVector(GridTag tag, std::vector<double> vals)
        : grid(tag), values(std::move(vals)) {}
    StateVector(GridTag tag, std::initializer_list<double> vals)
        : grid(tag), values(vals) {}
    StateVector(GridTag tag, std::size_t n, double fill = 0.0)
        : grid(tag), values(n, fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    bool conformable_with(const StateVector& other) const {
        return grid == other.grid && values.size() == other.values.size();
    }
};

inline void require_conformable(const StateVector& a, const StateVector& b) {
    if (!a.conformable_with(b)) {
        throw std::invalid_argument("state vectors are not conformable");
    }
}

inline StateVector zeros_like(const StateVector& v) {
    return StateVector(v.grid, v.values.size(), 0.0);
}

/// a*x + b*y
inline StateVector scaled_sum(double a, const StateVector& x, double b, const StateVector& y) {
    require_conformable(x, y);
    StateVector out(x.grid, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.values[i] = a * x.values[i] + b * y.values[i];
    }
    return out;
}

inline StateVector operator-(const StateVector& x, const StateVector& y) {
    return scaled_sum(1.0, x, -1.0, y);
}

/// Plain Euclidean norm of the coefficient vector (no grid weights). Problem
/// classes define the properly weighted norms; this is for raw residuals.
inline double euclidean_norm(const StateVector& v) {
    double s = 0.0;
    for (double x : v.values) s += x * x;
    return std::sqrt(s);
}

}  // namespace vbdf2
