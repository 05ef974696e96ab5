// Experiment runner for the variable step-size BDF2 library: convergence
// tables, stability sweeps, error histories and mesh dumps, driven by flags
// or a key=value config file.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vbdf2/study.hpp"

namespace {

struct CliOptions {
    std::string problem = "heat1d";
    int space_points = 0;     // 0 = per-problem default
    double b = 2.0;
    double epsilon = 0.01;
    double horizon = 0.0;     // 0 = per-problem default
    std::string scheme = "vsbdf2";
    double grading = 0.0;     // 0 = unset
    double ratio = 0.0;       // 0 = unset
    std::string start = "be";
    std::vector<int> step_counts = {20, 40, 80, 160, 320};
    std::string format = "csv";
    std::string out_path;
    double fp_tol = 1e-12;
    int fp_maxit = 100;
    std::vector<double> ratio_grid;
};

vbdf2::StudyConfig to_config(const CliOptions& options) {
    vbdf2::StudyConfig config;

    if (options.problem == "heat1d") {
        config.problem = vbdf2::ProblemKind::heat1d;
        config.space_points = options.space_points > 0 ? options.space_points : 100;
        config.horizon = options.horizon > 0.0 ? options.horizon : 4.0;
    } else if (options.problem == "semilinear2d") {
        config.problem = vbdf2::ProblemKind::semilinear2d;
        config.space_points = options.space_points > 0 ? options.space_points : 32;
        config.horizon = options.horizon > 0.0 ? options.horizon : 1.0;
    } else {
        throw CLI::ValidationError("--problem must be heat1d or semilinear2d");
    }
    config.b = options.b;
    config.epsilon = options.epsilon;

    if (options.scheme == "csbdf2") {
        config.mesh_family = vbdf2::MeshFamily::uniform;
    } else if (options.scheme == "vsbdf2") {
        if (options.ratio > 0.0 && options.grading > 0.0) {
            throw CLI::ValidationError("give either --grading or --ratio, not both");
        }
        if (options.ratio > 0.0) {
            config.mesh_family = vbdf2::MeshFamily::geometric;
            config.ratio = options.ratio;
        } else {
            config.mesh_family = vbdf2::MeshFamily::graded;
            config.grading = options.grading > 0.0 ? options.grading : 3.0;
        }
    } else {
        throw CLI::ValidationError("--scheme must be csbdf2 or vsbdf2");
    }

    if (options.start == "be") {
        config.start = vbdf2::StartScheme::backward_euler;
    } else if (options.start == "tf") {
        config.start = vbdf2::StartScheme::trapezoidal;
    } else {
        throw CLI::ValidationError("--start must be be or tf");
    }

    config.step_counts = options.step_counts;
    config.format = options.format == "md" ? vbdf2::OutputFormat::md
                                           : vbdf2::OutputFormat::csv;
    config.fixed_point.tolerance = options.fp_tol;
    config.fixed_point.max_iterations = options.fp_maxit;
    config.validate();
    return config;
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw std::runtime_error("cannot open " + out_path);
    file << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable step-size BDF2 experiments for parabolic problems"};
    app.require_subcommand(1);
    app.set_config("--config")->description("key=value file; command line overrides");

    CliOptions options;
    app.add_option("--problem", options.problem, "heat1d | semilinear2d")
        ->capture_default_str();
    app.add_option("--M", options.space_points, "spatial resolution (0 = problem default)");
    app.add_option("--b", options.b, "zero-order coefficient of heat1d")
        ->capture_default_str();
    app.add_option("--epsilon", options.epsilon, "diffusion of semilinear2d")
        ->capture_default_str();
    app.add_option("--T", options.horizon, "time horizon (0 = problem default)");
    app.add_option("--scheme", options.scheme, "csbdf2 | vsbdf2")->capture_default_str();
    app.add_option("--grading", options.grading, "graded-mesh exponent (vsbdf2)");
    app.add_option("--ratio", options.ratio, "geometric-mesh step ratio (vsbdf2)");
    app.add_option("--start", options.start, "starting scheme: be | tf")
        ->capture_default_str();
    app.add_option("--N", options.step_counts, "step counts, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--format", options.format, "csv | md")->capture_default_str();
    app.add_option("--out", options.out_path, "output file (default stdout)");
    app.add_option("--fp-tol", options.fp_tol, "fixed-point tolerance")
        ->capture_default_str();
    app.add_option("--fp-maxit", options.fp_maxit, "fixed-point iteration cap")
        ->capture_default_str();

    CLI::App* convergence =
        app.add_subcommand("convergence", "refinement study with observed orders");
    CLI::App* stability =
        app.add_subcommand("stability", "norm histories on geometric meshes");
    stability->add_option("--ratios", options.ratio_grid, "step-ratio grid")->delimiter(',');
    CLI::App* evolution =
        app.add_subcommand("evolution", "per-step error norms for one run");
    CLI::App* mesh_dump = app.add_subcommand("mesh", "write the time mesh as a node list");
    for (CLI::App* sub : {convergence, stability, evolution, mesh_dump}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const vbdf2::StudyConfig config = to_config(options);

        if (convergence->parsed()) {
            const vbdf2::StudyResult result = vbdf2::run_convergence_study(config);
            write_output(config.format == vbdf2::OutputFormat::md
                             ? vbdf2::study_markdown(result)
                             : vbdf2::study_csv(result),
                         options.out_path);
            return result.any_failed ? 1 : 0;
        }

        if (stability->parsed()) {
            std::vector<double> ratios = options.ratio_grid;
            if (ratios.empty()) {
                ratios.push_back(config.mesh_family == vbdf2::MeshFamily::geometric
                                     ? config.ratio
                                     : 2.4);
            }
            const vbdf2::SweepResult sweep = vbdf2::run_stability_sweep(config, ratios);
            write_output(vbdf2::series_csv(sweep, {"l2_norm"}), options.out_path);
            for (const vbdf2::Series& series : sweep.series) {
                std::fprintf(stderr, "%s: max|U^n|/|U^0| = %.6f%s\n", series.id.c_str(),
                             series.max_over_initial,
                             series.truncated ? " (truncated: solver failure)" : "");
            }
            return sweep.any_failed ? 1 : 0;
        }

        if (evolution->parsed()) {
            const vbdf2::SweepResult evo = vbdf2::run_error_evolution(config);
            write_output(vbdf2::series_csv(evo, {"l2_error", "h1_error"}), options.out_path);
            return evo.any_failed ? 1 : 0;
        }

        if (mesh_dump->parsed()) {
            const vbdf2::TimeMesh mesh =
                vbdf2::make_mesh(config, config.step_counts.front());
            if (options.out_path.empty()) {
                vbdf2::write_node_list(mesh, std::cout);
            } else {
                std::ofstream file(options.out_path);
                if (!file) throw std::runtime_error("cannot open " + options.out_path);
                vbdf2::write_node_list(mesh, file);
            }
            return 0;
        }
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
    return 0;
}
