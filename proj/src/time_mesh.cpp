#include "vbdf2/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace vbdf2 {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

TimeMesh::TimeMesh(std::vector<double> node_times) : node_times_(std::move(node_times)) {
    require(node_times_.size() >= 3, "time mesh needs at least two steps");
    require(node_times_.front() == 0.0, "time mesh must start at t = 0");

    const std::size_t n_steps = node_times_.size() - 1;
    steps_.resize(n_steps);
    for (std::size_t n = 0; n < n_steps; ++n) {
        steps_[n] = node_times_[n + 1] - node_times_[n];
        require(steps_[n] > 0.0, "node times must be strictly increasing");
    }

    ratios_.resize(n_steps - 1);
    weights_.resize(n_steps - 1);
    for (std::size_t i = 0; i < n_steps - 1; ++i) {
        const double r = steps_[i + 1] / steps_[i];
        ratios_[i] = r;
        weights_[i] = r / (1.0 + r);
    }
}

TimeMesh TimeMesh::uniform(double horizon, int num_steps) {
    require(horizon > 0.0, "horizon must be positive");
    require(num_steps >= 2, "need at least two steps");

    std::vector<double> nodes(static_cast<std::size_t>(num_steps) + 1);
    for (int n = 0; n <= num_steps; ++n) {
        nodes[static_cast<std::size_t>(n)] =
            horizon * (static_cast<double>(n) / static_cast<double>(num_steps));
    }
    return TimeMesh(std::move(nodes));
}

TimeMesh TimeMesh::graded(double horizon, int num_steps, double grading) {
    require(horizon > 0.0, "horizon must be positive");
    require(num_steps >= 2, "need at least two steps");
    require(grading >= 1.0, "grading exponent must be >= 1");

    std::vector<double> nodes(static_cast<std::size_t>(num_steps) + 1);
    for (int n = 0; n <= num_steps; ++n) {
        const double q = static_cast<double>(n) / static_cast<double>(num_steps);
        nodes[static_cast<std::size_t>(n)] = horizon * std::pow(q, grading);
    }
    return TimeMesh(std::move(nodes));
}

TimeMesh TimeMesh::geometric(double horizon, int num_steps, double ratio) {
    require(horizon > 0.0, "horizon must be positive");
    require(num_steps >= 2, "need at least two steps");
    require(ratio > 0.0, "step ratio must be positive");
    require(ratio != 1.0, "ratio 1 is the uniform mesh; use uniform()");

    // t^n = T (r^n - 1) / (r^N - 1), written via expm1 so that the ratio of
    // the two small quantities stays accurate for r near 1 and t^N = T holds
    // exactly.
    const double log_r = std::log(ratio);
    const double denom = std::expm1(static_cast<double>(num_steps) * log_r);
    std::vector<double> nodes(static_cast<std::size_t>(num_steps) + 1);
    for (int n = 0; n <= num_steps; ++n) {
        nodes[static_cast<std::size_t>(n)] =
            horizon * (std::expm1(static_cast<double>(n) * log_r) / denom);
    }
    return TimeMesh(std::move(nodes));
}

TimeMesh TimeMesh::from_nodes(std::vector<double> node_times) {
    return TimeMesh(std::move(node_times));
}

MeshStats mesh_stats(const TimeMesh& mesh) {
    const int n_steps = mesh.num_steps();
    MeshStats stats;
    stats.max_step = *std::max_element(mesh.steps().begin() + 1, mesh.steps().end());
    stats.max_ratio = *std::max_element(mesh.ratios().begin(), mesh.ratios().end());

    stats.phi.assign(static_cast<std::size_t>(n_steps) - 1, 0.0);
    for (int n = 4; n <= n_steps; ++n) {
        // Prefix recurrence: going from n-1 to n admits the term j = n-2.
        const int j = n - 2;
        stats.phi[static_cast<std::size_t>(n - 2)] =
            stats.phi[static_cast<std::size_t>(n - 3)] +
            positive_part(mesh.ratio(j) - mesh.ratio(j + 2));
    }
    return stats;
}

void write_node_list(const TimeMesh& mesh, std::ostream& out) {
    char buf[64];
    for (double t : mesh.node_times()) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", t);
        out << buf;
    }
}

TimeMesh read_node_list(std::istream& in) {
    std::vector<double> nodes;
    double t = 0.0;
    while (in >> t) nodes.push_back(t);
    if (!in.eof()) throw std::invalid_argument("malformed node list");
    return TimeMesh::from_nodes(std::move(nodes));
}

}  // namespace vbdf2
