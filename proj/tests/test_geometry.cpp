#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <sstream>

#include "pilotshare/geometry.hpp"
#include "pilotshare/io.hpp"

using namespace pilotshare;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("torus distance on the unit square") {
    CHECK(torus_distance({0, 0}, {0, 0}, 1.0) == 0.0);
    // wrap-around beats the direct 0.8 path
    CHECK(torus_distance({0.1, 0.5}, {0.9, 0.5}, 1.0) == doctest::Approx(0.2));
    CHECK(torus_distance({0, 0}, {0.5, 0.5}, 1.0) ==
          doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("torus distance is a metric") {
    Rng rng(42);
    const double side = 2.5;
    auto pt = [&] { return Point{uniform_unit(rng) * side, uniform_unit(rng) * side}; };
    const double bound = side * std::sqrt(2.0) / 2.0 + 1e-12;
    for (int i = 0; i < 2000; ++i) {
        const Point a = pt(), b = pt(), c = pt();
        const double ab = torus_distance(a, b, side);
        const double ba = torus_distance(b, a, side);
        const double ac = torus_distance(a, c, side);
        const double cb = torus_distance(c, b, side);
        CHECK(ab == ba);
        CHECK(ab <= bound);
        CHECK(torus_distance(a, a, side) == 0.0);
        CHECK(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("channel variance follows the clamped pathloss law") {
    Deployment dep;
    dep.bs_positions = {{0.0, 0.0}};
    dep.side = 4.0;
    dep.alpha = 3.0;
    dep.min_dist = 0.01;
    dep.validate();

    CHECK(channel_variance(dep, 0, {1.0, 0.0}) == doctest::Approx(1.0));
    CHECK(channel_variance(dep, 0, {0.5, 0.0}) == doctest::Approx(8.0));
    // below min_dist the variance clamps instead of diverging
    CHECK(channel_variance(dep, 0, {0.001, 0.0}) ==
          doctest::Approx(std::pow(0.01, -3.0)));
}

TEST_CASE("generate_deployment sizes the region from the density") {
    const Deployment d25 = generate_deployment(25, 25.0, 7);
    CHECK(d25.side == doctest::Approx(1.0));
    const Deployment d7 = generate_deployment(7, 25.0, 7);
    CHECK(d7.side == doctest::Approx(std::sqrt(0.28)));
    CHECK(d7.cells() == 7);
    CHECK_NOTHROW(d7.validate());
}

TEST_CASE("generate_deployment is deterministic and validates inputs") {
    const Deployment a = generate_deployment(5, 25.0, 99);
    const Deployment b = generate_deployment(5, 25.0, 99);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a.bs_positions[i].x == b.bs_positions[i].x);
        CHECK(a.bs_positions[i].y == b.bs_positions[i].y);
    }
    CHECK(generate_deployment(5, 25.0, 100).bs_positions[0].x !=
          a.bs_positions[0].x);
    CHECK_THROWS_AS(generate_deployment(0, 25.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_deployment(5, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_deployment(5, -1.0, 1), std::invalid_argument);
}

namespace {

Deployment two_cell_strip() {
    Deployment dep;
    dep.bs_positions = {{0.25, 0.5}, {0.75, 0.5}};
    dep.side = 1.0;
    dep.alpha = 3.0;
    dep.min_dist = 0.001;
    dep.validate();
    return dep;
}

} // namespace

TEST_CASE("assign_cell picks the nearest BS, ties to the lowest index") {
    const Deployment dep = two_cell_strip();
    CHECK(assign_cell(dep, {0.25, 0.5}) == 0);
    CHECK(assign_cell(dep, {0.75, 0.5}) == 1);
    // x = 0.5 is equidistant; so is x = 0 via wrap-around
    CHECK(assign_cell(dep, {0.5, 0.3}) == 0);
    CHECK(assign_cell(dep, {0.0, 0.8}) == 0);

    Deployment single = generate_deployment(1, 25.0, 3);
    CHECK(assign_cell(single, {0.01, 0.02}) == 0);
}

TEST_CASE("sampled UEs stay in their cell, outside the exclusion disc") {
    const Deployment dep = two_cell_strip();
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t cell = i % 2;
        const Point z = sample_ue_in_cell(dep, cell, rng);
        CHECK(assign_cell(dep, z) == cell);
        CHECK(torus_distance(z, dep.bs_positions[cell], dep.side) >= dep.min_dist);
    }
}

TEST_CASE("sampling is reproducible for a fixed generator seed") {
    const Deployment dep = two_cell_strip();
    Rng a(5), b(5);
    for (int i = 0; i < 50; ++i) {
        const Point za = sample_ue_in_cell(dep, 0, a);
        const Point zb = sample_ue_in_cell(dep, 0, b);
        CHECK(za.x == zb.x);
        CHECK(za.y == zb.y);
    }
}

TEST_CASE("cell frequencies match the analytic Voronoi split") {
    // The two-BS layout splits the torus into two equal vertical strips; the
    // empirical visit frequency of uniform square points must match.
    const Deployment dep = two_cell_strip();
    Rng rng(17);
    const int n = 10000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        const Point z{uniform_unit(rng), uniform_unit(rng)};
        if (assign_cell(dep, z) == 0) ++hits;
    }
    CHECK(std::fabs(static_cast<double>(hits) / n - 0.5) < 0.02);
}

TEST_CASE("in-cell samples are uniform across the cell") {
    // Cell 0 is the strip x in (0, 0.5); split it into four equal-area
    // quadrants and expect equal occupancy.
    const Deployment dep = two_cell_strip();
    Rng rng(23);
    const int n = 20000;
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const Point z = sample_ue_in_cell(dep, 0, rng);
        const int qx = z.x < 0.25 ? 0 : 1;
        const int qy = z.y < 0.5 ? 0 : 1;
        ++counts[2 * qy + qx];
    }
    for (int q = 0; q < 4; ++q)
        CHECK(std::fabs(counts[q] / static_cast<double>(n) - 0.25) < 0.02);
}

TEST_CASE("the serving BS sees the largest channel variance") {
    const Deployment dep = generate_deployment(9, 25.0, 31);
    Rng rng(101);
    for (int i = 0; i < 500; ++i) {
        const Point z{uniform_unit(rng) * dep.side, uniform_unit(rng) * dep.side};
        const std::size_t serving = assign_cell(dep, z);
        const double best = channel_variance(dep, serving, z);
        for (std::size_t j = 0; j < dep.cells(); ++j)
            CHECK(best >= channel_variance(dep, j, z));
    }
}

TEST_CASE("a zero-measure cell is reported, not spun on forever") {
    Deployment dep;
    // two co-located BSs: every tie resolves to index 0, so cell 1 is empty
    dep.bs_positions = {{0.3, 0.3}, {0.3, 0.3}};
    dep.side = 1.0;
    dep.alpha = 3.0;
    dep.min_dist = 1e-4;
    Rng rng(1);
    CHECK_THROWS_AS(sample_ue_in_cell(dep, 1, rng), std::runtime_error);
}

TEST_CASE("deployment text record round-trips") {
    const Deployment dep = generate_deployment(6, 25.0, 77);
    std::stringstream ss;
    write_deployment(ss, dep);
    const Deployment back = read_deployment(ss);
    CHECK(back.side == dep.side);
    CHECK(back.alpha == dep.alpha);
    CHECK(back.min_dist == dep.min_dist);
    REQUIRE(back.cells() == dep.cells());
    for (std::size_t i = 0; i < dep.cells(); ++i) {
        CHECK(back.bs_positions[i].x == dep.bs_positions[i].x);
        CHECK(back.bs_positions[i].y == dep.bs_positions[i].y);
    }
    CHECK(deployment_hash(back) == deployment_hash(dep));
}

TEST_CASE("deployment validation rejects out-of-contract fields") {
    Deployment dep = generate_deployment(4, 25.0, 5);
    Deployment bad = dep;
    bad.alpha = 2.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = dep;
    bad.min_dist = dep.side; // >= side/(2L)
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = dep;
    bad.bs_positions[0].x = dep.side; // outside [0, side)
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = dep;
    bad.bs_positions.clear();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_SUITE_END();
