#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace vbdf2 {

/// A partition 0 = t^0 < t^1 < ... < t^N = T of the time interval, together
/// with the derived step sizes k_n = t^n - t^{n-1}, step ratios
/// r_n = k_n / k_{n-1} and the two-step weights s_n = r_n / (1 + r_n).
///
/// All derived arrays are computed from the node times by one shared code
/// path, so rebuilding a mesh from its node list reproduces them bit for bit.
/// Immutable after construction; safe to share across threads.
class TimeMesh {
public:
    /// Equidistant partition with N steps of size T/N.
    static TimeMesh uniform(double horizon, int num_steps);

    /// Power-graded partition t^n = T (n/N)^grading, concentrating nodes near
    /// t = 0. grading = 1 reproduces the uniform mesh; for grading > 1 the
    /// step ratios are > 1 and strictly decreasing.
    static TimeMesh graded(double horizon, int num_steps, double grading);

    /// Partition with constant step ratio: k_1 = T (r-1)/(r^N - 1) and
    /// k_n = r k_{n-1}. The ratio must differ from 1; use uniform() for
    /// equidistant meshes.
    static TimeMesh geometric(double horizon, int num_steps, double ratio);

    /// Build from an explicit node list (strictly increasing, starting at 0).
    static TimeMesh from_nodes(std::vector<double> node_times);

    double horizon() const { return node_times_.back(); }
    int num_steps() const { return static_cast<int>(node_times_.size()) - 1; }

    std::span<const double> node_times() const { return node_times_; }  ///< t^0..t^N
    std::span<const double> steps() const { return steps_; }            ///< k_1..k_N
    std::span<const double> ratios() const { return ratios_; }          ///< r_2..r_N
    std::span<const double> weights() const { return weights_; }        ///< s_2..s_N

    double time(int n) const { return node_times_[static_cast<std::size_t>(n)]; }
    double step(int n) const { return steps_[static_cast<std::size_t>(n - 1)]; }     ///< k_n, n in [1, N]
    double ratio(int n) const { return ratios_[static_cast<std::size_t>(n - 2)]; }   ///< r_n, n in [2, N]
    double weight(int n) const { return weights_[static_cast<std::size_t>(n - 2)]; } ///< s_n, n in [2, N]

    /// The starting step k_1, which the max-step statistic deliberately
    /// excludes (the starting scheme is analyzed separately).
    double first_step() const { return steps_.front(); }

private:
    explicit TimeMesh(std::vector<double> node_times);

    std::vector<double> node_times_;
    std::vector<double> steps_;
    std::vector<double> ratios_;
    std::vector<double> weights_;
};

/// Mesh statistics consumed by the stability conditions.
struct MeshStats {
    /// max of k_n over n >= 2 (k_1 excluded).
    double max_step = 0.0;
    /// max of r_n over n >= 2.
    double max_ratio = 0.0;
    /// phi[n-2] = total positive variation of the lag-2 ratio sequence up to
    /// n: sum over j = 2..n-2 of [r_j - r_{j+2}]_+. Zero for n <= 3,
    /// nondecreasing in n.
    std::vector<double> phi;

    double phi_at(int n) const { return phi[static_cast<std::size_t>(n - 2)]; }
    double phi_final() const { return phi.back(); }
};

MeshStats mesh_stats(const TimeMesh& mesh);

/// Positive part [x]_+ = (|x| + x) / 2.
inline double positive_part(double x) { return (std::abs(x) + x) / 2.0; }

/// One node time per line in decimal notation, full round-trip precision.
void write_node_list(const TimeMesh& mesh, std::ostream& out);

/// Inverse of write_node_list; accepts any whitespace-separated list.
TimeMesh read_node_list(std::istream& in);

}  // namespace vbdf2
