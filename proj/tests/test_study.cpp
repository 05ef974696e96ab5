#include "doctest.h"

#include <cmath>

#include "test_helpers.hpp"
#include "vbdf2/heat1d.hpp"
#include "vbdf2/study.hpp"

using namespace vbdf2;

namespace {

StudyConfig small_heat_config() {
    StudyConfig config;
    config.problem = ProblemKind::heat1d;
    config.space_points = 40;
    config.b = 1.0;
    config.horizon = 4.0;
    config.mesh_family = MeshFamily::graded;
    config.grading = 3.0;
    config.start = StartScheme::backward_euler;
    config.step_counts = {10, 20, 40};
    return config;
}

}  // namespace

TEST_CASE("study configuration") {
    StudyConfig config = small_heat_config();
    CHECK(config.scheme_label() == "VSBDF2-BE");
    config.start = StartScheme::trapezoidal;
    CHECK(config.scheme_label() == "VSBDF2-TF");
    config.mesh_family = MeshFamily::uniform;
    CHECK(config.scheme_label() == "CSBDF2-TF");
    config.mesh_family = MeshFamily::graded;
    config.grading = 1.0;
    CHECK(config.scheme_label() == "CSBDF2-TF");

    config = small_heat_config();
    config.step_counts = {40, 20};
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = small_heat_config();
    config.step_counts.clear();
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = small_heat_config();
    config.grading = 0.5;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = small_heat_config();
    config.problem = ProblemKind::semilinear2d;
    config.space_points = 31;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("convergence study runs and orders") {
    const StudyConfig config = small_heat_config();
    const StudyResult result = run_convergence_study(config);
    REQUIRE(result.runs.size() == 3);
    CHECK(!result.any_failed);
    REQUIRE(result.tables.size() == 4);

    for (const ConvergenceTable& table : result.tables) {
        REQUIRE(table.rows.size() == 3);
        CHECK(!table.rows[0].order.has_value());
        CHECK(table.rows[1].order.has_value());
        CHECK(table.rows[2].order.has_value());
        // Second-order scheme on the graded mesh.
        CHECK(*table.rows[2].order > 1.6);
        CHECK(*table.rows[2].order < 2.4);
    }

    SUBCASE("same config twice gives byte-identical output") {
        const StudyResult again = run_convergence_study(config);
        CHECK(study_csv(result) == study_csv(again));
        CHECK(study_markdown(result) == study_markdown(again));
    }

    SUBCASE("csv shape") {
        const std::string csv = study_csv(result);
        CHECK(csv.find("scheme,N,E_linf_V,E_l2_HH,E_linf_H,E_l2_V,"
                       "ord_linf_V,ord_l2_HH,ord_linf_H,ord_l2_V,certificate,lhs,rhs\n") == 0);
        CHECK(csv.find("VSBDF2-BE,10,") != std::string::npos);
        CHECK(csv.find("VSBDF2-BE,40,") != std::string::npos);
    }
}

TEST_CASE("reference values at b = 2") {
    // Frozen values of the graded-mesh study at b = 2, cross-checked against
    // an independent implementation; guards the mesh, stepping and
    // functional conventions all at once.
    StudyConfig config = small_heat_config();
    config.space_points = 100;
    config.b = 2.0;
    config.step_counts = {160, 320};
    const StudyResult result = run_convergence_study(config);
    REQUIRE(!result.any_failed);
    CHECK(result.runs[1].report.e_linf_h == doctest::Approx(6.5767e-07).epsilon(5e-5));
    CHECK(result.runs[1].report.e_linf_v == doctest::Approx(2.0661e-06).epsilon(5e-5));
    CHECK(result.runs[1].report.e_l2_hh == doctest::Approx(4.9096e-07).epsilon(5e-5));
    CHECK(*result.tables[2].rows[1].order == doctest::Approx(2.0000).epsilon(2e-4));
}

TEST_CASE("failed runs become recorded failure rows") {
    StudyConfig config;
    config.problem = ProblemKind::semilinear2d;
    config.space_points = 8;
    config.horizon = 1.0;
    config.mesh_family = MeshFamily::uniform;
    config.step_counts = {4, 8};
    // Starve the fixed-point iteration so every run fails deterministically.
    config.fixed_point.tolerance = 1e-300;
    config.fixed_point.max_iterations = 2;

    const StudyResult result = run_convergence_study(config);
    CHECK(result.any_failed);
    REQUIRE(result.runs.size() == 2);
    CHECK(result.runs[0].failed);
    CHECK(!result.runs[0].error.empty());
    const std::string csv = study_csv(result);
    CHECK(csv.find("failed") != std::string::npos);
    for (const ConvergenceTable& table : result.tables) CHECK(table.rows.empty());
}

TEST_CASE("table rendering") {
    ConvergenceTable table;
    table.caption = "demo";

    SUBCASE("empty table renders the header only") {
        CHECK(emit_table(table, OutputFormat::csv) == "N,error,order\n");
        const std::string md = emit_table(table, OutputFormat::md);
        CHECK(md.find("| N | Error | Order |") != std::string::npos);
    }

    SUBCASE("single row has a blank order") {
        table.rows.push_back({20, 5.2723e-4, std::nullopt});
        CHECK(emit_table(table, OutputFormat::csv) == "N,error,order\n20,5.2723E-04,\n");
    }

    SUBCASE("orders print with four decimals") {
        table.rows.push_back({20, 5.2723e-4, std::nullopt});
        table.rows.push_back({40, 1.3204e-4, 1.99752});
        const std::string csv = emit_table(table, OutputFormat::csv);
        CHECK(csv.find("40,1.3204E-04,1.9975\n") != std::string::npos);
        const std::string md = emit_table(table, OutputFormat::md);
        CHECK(md.find("| 40 | 1.3204E-04 | 1.9975 |") != std::string::npos);
    }
}

TEST_CASE("stability sweep") {
    StudyConfig config = small_heat_config();
    config.mesh_family = MeshFamily::geometric;
    config.step_counts = {50};

    SUBCASE("ratio grid produces bounded decaying series") {
        const SweepResult sweep = run_stability_sweep(config, {2.0, 2.2, 2.4});
        REQUIRE(sweep.series.size() == 3);
        CHECK(!sweep.any_failed);
        for (const Series& series : sweep.series) {
            REQUIRE(series.points.size() == 51);
            CHECK(!series.truncated);
            CHECK(series.max_over_initial <= 1.5);
            CHECK(series.points.back().values[0] < series.points.front().values[0]);
        }
    }

    SUBCASE("ratio 1 falls back to the uniform mesh bit for bit") {
        const SweepResult via_ratio = run_stability_sweep(config, {1.0});
        StudyConfig uniform_config = config;
        uniform_config.mesh_family = MeshFamily::uniform;
        const SweepResult via_uniform = run_stability_sweep(uniform_config, {1.0});
        CHECK(series_csv(via_ratio) == series_csv(via_uniform));
    }
}

TEST_CASE("error evolution") {
    StudyConfig config = small_heat_config();
    config.space_points = 100;
    config.step_counts = {50};

    SUBCASE("variable steps beat constant steps for most of the run") {
        config.mesh_family = MeshFamily::geometric;
        config.ratio = 1.1;
        const SweepResult variable = run_error_evolution(config);

        StudyConfig uniform_config = config;
        uniform_config.mesh_family = MeshFamily::uniform;
        const SweepResult constant = run_error_evolution(uniform_config);

        REQUIRE(variable.series.size() == 1);
        REQUIRE(constant.series.size() == 1);
        CHECK(variable.series[0].id == "VSBDF2-BE");
        CHECK(constant.series[0].id == "CSBDF2-BE");

        // Compare the discrete L2 errors at matching step indices.
        int below = 0, total = 0;
        for (int n = 1; n <= 50; ++n) {
            const double ev = variable.series[0].points[static_cast<std::size_t>(n)].values[0];
            const double ec = constant.series[0].points[static_cast<std::size_t>(n)].values[0];
            if (ev < ec) ++below;
            ++total;
        }
        CHECK(below * 2 > total);
    }

    SUBCASE("exact trajectory turns into an all-zero series") {
        const auto problem = heat1d_problem(20, 1.0);
        const TimeMesh mesh = TimeMesh::uniform(1.0, 6);
        Trajectory traj{mesh, {}, {}, SchemeMode::linear, StartScheme::backward_euler};
        for (int n = 0; n <= 6; ++n) traj.states.push_back(problem->exact_state(mesh.time(n)));
        const Series series = error_series(
            traj, *problem, [&](double t) { return problem->exact_state(t); }, "exact");
        for (const SeriesPoint& point : series.points) {
            CHECK(point.values[0] == 0.0);
            CHECK(point.values[1] == 0.0);
        }
    }

    SUBCASE("series csv carries the requested value labels") {
        config.mesh_family = MeshFamily::uniform;
        const SweepResult sweep = run_error_evolution(config);
        const std::string csv = series_csv(sweep, {"l2_error", "h1_error"});
        CHECK(csv.rfind("series_id,n,t,l2_error,h1_error\n", 0) == 0);
    }
}
