#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vbdf2/bdf2.hpp"
#include "vbdf2/norms.hpp"
#include "vbdf2/problem.hpp"
#include "vbdf2/stability.hpp"
#include "vbdf2/time_mesh.hpp"

namespace vbdf2 {

enum class ProblemKind { heat1d, semilinear2d };
enum class MeshFamily { uniform, graded, geometric };
enum class OutputFormat { csv, md };

/// One experiment description: a problem, a mesh family, a starting scheme
/// and the list of step counts to sweep.
struct StudyConfig {
    ProblemKind problem = ProblemKind::heat1d;
    int space_points = 100;   ///< M
    double b = 2.0;           ///< zero-order coefficient (heat1d)
    double epsilon = 0.01;    ///< diffusion (semilinear2d)
    double horizon = 4.0;     ///< T

    MeshFamily mesh_family = MeshFamily::graded;
    double grading = 3.0;     ///< graded meshes
    double ratio = 2.4;       ///< geometric meshes; 1 selects the uniform mesh

    StartScheme start = StartScheme::backward_euler;
    std::vector<int> step_counts = {20, 40, 80, 160, 320};

    OutputFormat format = OutputFormat::csv;
    FixedPointConfig fixed_point;

    /// c1 for the energy certificate; 0 selects the smallest admissible value.
    double certificate_c1 = 0.0;

    void validate() const;

    SchemeMode mode() const {
        return problem == ProblemKind::semilinear2d ? SchemeMode::semilinear
                                                    : SchemeMode::linear;
    }

    /// e.g. "VSBDF2-BE" (variable steps) or "CSBDF2-TF" (constant steps).
    std::string scheme_label() const;
};

std::unique_ptr<ProblemDefinition> make_problem(const StudyConfig& config);
TimeMesh make_mesh(const StudyConfig& config, int num_steps);

/// Result of a single N within a study.
struct RunOutcome {
    int num_steps = 0;
    bool failed = false;
    std::string error;
    ErrorReport report;
    CertificateResult certificate;
};

/// Rows of (N, error, observed order) for one error functional.
struct ConvergenceTable {
    struct Row {
        int num_steps = 0;
        double error = 0.0;
        std::optional<double> order;
    };
    std::string caption;
    std::vector<Row> rows;
};

struct StudyResult {
    StudyConfig config;
    std::vector<RunOutcome> runs;       ///< ordered by N
    std::vector<ConvergenceTable> tables;  ///< E_linf_V, E_l2_HH, E_linf_H, E_l2_V
    bool any_failed = false;
};

/// Integrate each N of the study (independent runs execute concurrently,
/// assembly is ordered by N), compute the error functionals, observed orders
/// across consecutive step counts and the energy certificate where it applies.
StudyResult run_convergence_study(const StudyConfig& config);

/// One table as text. Markdown renders a pipe table (N | Error | Order); CSV
/// a header plus one row per N. Errors use scientific notation with a
/// four-decimal mantissa, orders four decimals.
std::string emit_table(const ConvergenceTable& table, OutputFormat format);

/// The whole study as CSV: scheme,N,E_linf_V,E_l2_HH,E_linf_H,E_l2_V,
/// ord_linf_V,ord_l2_HH,ord_linf_H,ord_l2_V,certificate,lhs,rhs.
std::string study_csv(const StudyResult& result);

/// All four tables as Markdown sections.
std::string study_markdown(const StudyResult& result);

/// One time series of a scalar quantity along a trajectory.
struct SeriesPoint {
    int n = 0;
    double t = 0.0;
    std::vector<double> values;
};

struct Series {
    std::string id;
    std::vector<SeriesPoint> points;
    bool truncated = false;      ///< the run failed before reaching t = T
    double max_over_initial = 0.0;  ///< max_n |U^n| / |U^0| (boundedness verdict)
};

struct SweepResult {
    std::vector<Series> series;
    bool any_failed = false;
};

/// Discrete L2 norm history |U^n| for geometric meshes with the given ratios
/// (ratio 1 runs the uniform mesh). Uses the first entry of step_counts.
SweepResult run_stability_sweep(const StudyConfig& config, const std::vector<double>& ratios);

/// Error history rows (n, t, |e^n|, ||e^n||_H1) for a single configuration.
SweepResult run_error_evolution(const StudyConfig& config);

/// Norm history of an existing trajectory: value columns are |U^n| only.
Series norm_series(const Trajectory& trajectory, const ProblemDefinition& problem,
                   std::string id);

/// Error history of an existing trajectory against an exact solution:
/// value columns are |e^n|, ||e^n||_H1.
Series error_series(const Trajectory& trajectory, const ProblemDefinition& problem,
                    const StateFunction& exact, std::string id);

/// series_id,n,t,value... rows for every series. value_names labels the
/// value columns in the header.
std::string series_csv(const SweepResult& result,
                       const std::vector<std::string>& value_names = {"value"});

}  // namespace vbdf2
