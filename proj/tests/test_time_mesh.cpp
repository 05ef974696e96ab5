#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "test_helpers.hpp"
#include "vbdf2/time_mesh.hpp"

using namespace vbdf2;

TEST_CASE("uniform mesh basics") {
    const TimeMesh mesh = TimeMesh::uniform(4.0, 4);
    CHECK(mesh.num_steps() == 4);
    CHECK(mesh.horizon() == 4.0);
    for (int n = 1; n <= 4; ++n) CHECK(mesh.step(n) == 1.0);
    for (int n = 2; n <= 4; ++n) {
        CHECK(mesh.ratio(n) == 1.0);
        CHECK(mesh.weight(n) == 0.5);
    }

    const TimeMesh half = TimeMesh::uniform(1.0, 2);
    CHECK(half.time(0) == 0.0);
    CHECK(half.time(1) == 0.5);
    CHECK(half.time(2) == 1.0);

    const TimeMesh fine = TimeMesh::uniform(4.0, 50);
    const MeshStats stats = mesh_stats(fine);
    CHECK(stats.max_step == doctest::Approx(0.08).epsilon(1e-13));
    CHECK(stats.max_ratio == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(stats.phi_final() == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(TimeMesh::uniform(4.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(TimeMesh::uniform(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(TimeMesh::uniform(0.0, 4), std::invalid_argument);
}

TEST_CASE("graded mesh") {
    const TimeMesh mesh = TimeMesh::graded(4.0, 20, 3.0);
    CHECK(mesh.time(1) == doctest::Approx(5.0e-4).epsilon(1e-14));
    CHECK(mesh.horizon() == 4.0);
    CHECK(mesh.ratio(2) == doctest::Approx(7.0).epsilon(1e-13));

    SUBCASE("grading 1 reproduces the uniform mesh exactly") {
        const TimeMesh graded1 = TimeMesh::graded(4.0, 20, 1.0);
        const TimeMesh uniform = TimeMesh::uniform(4.0, 20);
        for (int n = 0; n <= 20; ++n) CHECK(graded1.time(n) == uniform.time(n));
        for (int n = 1; n <= 20; ++n) CHECK(graded1.step(n) == uniform.step(n));
    }

    SUBCASE("ratio sequence against the direct node formula") {
        // r_n = (n^w - (n-1)^w) / ((n-1)^w - (n-2)^w), evaluated in extended
        // precision, independent of the mesh code path.
        for (int n = 2; n <= 20; ++n) {
            const long double w = 3.0L;
            auto node = [&](int j) { return std::pow(static_cast<long double>(j), w); };
            const long double expected = (node(n) - node(n - 1)) / (node(n - 1) - node(n - 2));
            CHECK(mesh.ratio(n) ==
                  doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
        }
    }

    SUBCASE("ratios decrease strictly and stay above 1") {
        for (const double grading : {1.5, 2.0, 3.0, 4.0}) {
            for (const int num_steps : {10, 100}) {
                const TimeMesh m = TimeMesh::graded(2.0, num_steps, grading);
                for (int n = 2; n <= num_steps; ++n) {
                    CHECK(m.ratio(n) > 1.0);
                    if (n > 2) CHECK(m.ratio(n) < m.ratio(n - 1));
                }
            }
        }
    }

    CHECK_THROWS_AS(TimeMesh::graded(4.0, 20, 0.9), std::invalid_argument);
}

TEST_CASE("geometric mesh") {
    SUBCASE("two steps, ratio 2") {
        const TimeMesh mesh = TimeMesh::geometric(1.0, 2, 2.0);
        CHECK(mesh.step(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(mesh.step(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    }

    SUBCASE("first step and step sum against the extended-precision series") {
        const TimeMesh mesh = TimeMesh::geometric(4.0, 50, 2.4);
        const long double r = 2.4L;
        const long double k1_expected = 4.0L * (r - 1.0L) / (std::pow(r, 50.0L) - 1.0L);
        CHECK(mesh.first_step() ==
              doctest::Approx(static_cast<double>(k1_expected)).epsilon(1e-12));

        long double sum = 0.0L;
        long double k = mesh.first_step();
        for (int n = 1; n <= 50; ++n) {
            sum += k;
            k *= 2.4L;
        }
        CHECK(std::abs(static_cast<double>(sum) - 4.0) <= 1e-10 * 4.0);

        double direct_sum = 0.0;
        for (double step : mesh.steps()) direct_sum += step;
        CHECK(std::abs(direct_sum - 4.0) <= 1e-10 * 4.0);

        const MeshStats stats = mesh_stats(mesh);
        CHECK(stats.max_ratio == doctest::Approx(2.4).epsilon(1e-12));
    }

    SUBCASE("decreasing ratio below 1") {
        const TimeMesh mesh = TimeMesh::geometric(1.0, 10, 0.5);
        for (int n = 2; n <= 10; ++n) {
            CHECK(mesh.ratio(n) == doctest::Approx(0.5).epsilon(1e-12));
        }
        CHECK(mesh.horizon() == 1.0);
    }

    CHECK_THROWS_AS(TimeMesh::geometric(4.0, 50, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeMesh::geometric(4.0, 50, -2.0), std::invalid_argument);
}

TEST_CASE("from_nodes") {
    const TimeMesh uniform = TimeMesh::from_nodes({0.0, 1.0, 2.0, 3.0});
    CHECK(uniform.horizon() == 3.0);
    for (int n = 1; n <= 3; ++n) CHECK(uniform.step(n) == 1.0);

    const TimeMesh stretched = TimeMesh::from_nodes({0.0, 0.5, 1.5});
    CHECK(stretched.ratio(2) == 2.0);
    CHECK(stretched.weight(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-16));

    CHECK_THROWS_AS(TimeMesh::from_nodes({0.0, 1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(TimeMesh::from_nodes({0.1, 1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(TimeMesh::from_nodes({0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("mesh statistics") {
    SUBCASE("hand-evaluated positive variation") {
        // steps (1, 3, 3, 3, 3) give ratios (3, 1, 1, 1).
        const TimeMesh mesh = TimeMesh::from_nodes({0.0, 1.0, 4.0, 7.0, 10.0, 13.0});
        const MeshStats stats = mesh_stats(mesh);
        CHECK(stats.phi_at(2) == 0.0);
        CHECK(stats.phi_at(3) == 0.0);
        CHECK(stats.phi_at(5) == 2.0);
        CHECK(stats.max_step == 3.0);
        CHECK(stats.max_ratio == 3.0);
    }

    SUBCASE("prefix array against the brute-force double loop") {
        std::mt19937 rng(321);
        for (int trial = 0; trial < 100; ++trial) {
            const TimeMesh mesh = vbdf2::testing::random_mesh(rng, 12, 0.3, 3.5);
            const MeshStats stats = mesh_stats(mesh);
            for (int n = 2; n <= mesh.num_steps(); ++n) {
                double brute = 0.0;
                for (int j = 2; j <= n - 2; ++j) {
                    brute += positive_part(mesh.ratio(j) - mesh.ratio(j + 2));
                }
                CHECK(stats.phi_at(n) == doctest::Approx(brute).epsilon(1e-15));
            }
            for (int n = 3; n <= mesh.num_steps(); ++n) {
                CHECK(stats.phi_at(n) >= stats.phi_at(n - 1));
            }
        }
    }

    SUBCASE("graded positive variation matches the loop") {
        const TimeMesh mesh = TimeMesh::graded(4.0, 20, 3.0);
        const MeshStats stats = mesh_stats(mesh);
        double brute = 0.0;
        for (int j = 2; j <= 20 - 2; ++j) {
            brute += positive_part(mesh.ratio(j) - mesh.ratio(j + 2));
        }
        CHECK(stats.phi_final() == doctest::Approx(brute).epsilon(1e-15));
    }
}

TEST_CASE("mesh invariants on random meshes") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const TimeMesh mesh = vbdf2::testing::random_mesh(rng, 20, 0.2, 4.0);

        // Rebuilding from the node list reproduces all derived arrays bit for bit.
        std::vector<double> nodes(mesh.node_times().begin(), mesh.node_times().end());
        const TimeMesh rebuilt = TimeMesh::from_nodes(std::move(nodes));
        for (int n = 1; n <= mesh.num_steps(); ++n) {
            CHECK(rebuilt.step(n) == mesh.step(n));
        }
        for (int n = 2; n <= mesh.num_steps(); ++n) {
            CHECK(rebuilt.ratio(n) == mesh.ratio(n));
            CHECK(rebuilt.weight(n) == mesh.weight(n));

            // s = r/(1+r) holds exactly as stored; 1 - s = 1/(1+r) to rounding.
            const double r = mesh.ratio(n);
            const double s = mesh.weight(n);
            CHECK(s == r / (1.0 + r));
            CHECK(1.0 - s == doctest::Approx(1.0 / (1.0 + r)).epsilon(5e-16));
            CHECK(s > 0.0);
            CHECK(s < 1.0);
        }
    }
}

TEST_CASE("node list round trip") {
    const TimeMesh mesh = TimeMesh::geometric(4.0, 30, 1.7);
    std::stringstream buffer;
    write_node_list(mesh, buffer);
    const TimeMesh reread = read_node_list(buffer);
    REQUIRE(reread.num_steps() == mesh.num_steps());
    for (int n = 0; n <= mesh.num_steps(); ++n) CHECK(reread.time(n) == mesh.time(n));
    for (int n = 2; n <= mesh.num_steps(); ++n) CHECK(reread.ratio(n) == mesh.ratio(n));
}
