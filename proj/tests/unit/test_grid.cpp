#include "front_forge/grid.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

using namespace front_forge;

TEST_CASE("index and position") {
    GridField g({4, 5, 6}, 0.5, {-1.0, 0.0, 2.0}, 3.0);
    CHECK(g.size() == 120);
    CHECK(g.stride(2) == 1);
    CHECK(g.stride(0) == 30);
    const std::size_t idx = g.index({2, 3, 4, 0});
    const auto ijk = g.unravel(idx);
    CHECK(ijk[0] == 2);
    CHECK(ijk[1] == 3);
    CHECK(ijk[2] == 4);
    double pos[4];
    g.position(idx, pos);
    CHECK(pos[0] == doctest::Approx(0.0));
    CHECK(pos[1] == doctest::Approx(1.5));
    CHECK(pos[2] == doctest::Approx(4.0));
    CHECK(g.on_boundary(g.index({0, 2, 2, 0})));
    CHECK_FALSE(g.on_boundary(idx));
    CHECK_THROWS_AS(GridField({4, 2}, 0.5, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(GridField({4, 4}, 0.5, {0.0}), std::invalid_argument);
}

TEST_CASE("multilinear interpolation is exact for affine fields") {
    GridField g({6, 7}, 0.25, {1.0, -1.0});
    for (std::size_t k = 0; k < g.size(); ++k) {
        double p[4];
        g.position(k, p);
        g.values[k] = 2.0 * p[0] - 3.0 * p[1] + 0.5;
    }
    const double q[2] = {1.33, -0.41};
    CHECK(g.interpolate(q) == doctest::Approx(2.0 * 1.33 + 3.0 * 0.41 + 0.5));
}

TEST_CASE("ff-grid-v1 round trip") {
    GridField g({3, 4}, 0.1, {0.5, -0.25}, 1.75);
    for (std::size_t k = 0; k < g.size(); ++k) g.values[k] = 1.0 / (1.0 + k);
    const auto path = (std::filesystem::temp_directory_path() / "ff_grid_test.ffg").string();
    write_grid(g, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header.find("ff-grid-v1") != std::string::npos);
    const GridField r = read_grid(path);
    CHECK(r.dims == g.dims);
    CHECK(r.spacing == g.spacing);
    CHECK(r.origin == g.origin);
    CHECK(r.time == g.time);
    CHECK(r.values == g.values);
    std::filesystem::remove(path);
    CHECK_THROWS(read_grid(path));
}
