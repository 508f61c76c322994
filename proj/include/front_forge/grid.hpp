#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace front_forge {

/**
 * @brief Scalar field sampled on a uniform rectangular grid in R^N at one time.
 *
 * Row-major: the last axis (y) varies fastest. origin is the lab-frame position of node 0.
 */
struct GridField {
    std::vector<int> dims;
    double spacing = 0.0;
    std::vector<double> origin;
    double time = 0.0;
    std::vector<double> values;
    long long clamp_violations = 0;

    GridField() = default;
    GridField(std::vector<int> dims, double spacing, std::vector<double> origin, double time = 0.0);

    int N() const { return static_cast<int>(dims.size()); }
    std::size_t size() const { return values.size(); }
    std::size_t stride(int axis) const;
    std::size_t index(const std::array<int, 4>& ijk) const;
    std::array<int, 4> unravel(std::size_t idx) const;
    /// Lab-frame coordinates of a node.
    void position(std::size_t idx, double* pos) const;
    bool on_boundary(std::size_t idx) const;
    /// Multilinear interpolation at a lab-frame point; clamps to the box.
    double interpolate(const double* pos) const;
};

/// ff-grid-v1: one JSON header line {dims, spacing, origin, time, schema}, then
/// little-endian float64 values in row-major order.
void write_grid(const GridField& g, const std::string& path);
GridField read_grid(const std::string& path);

}  // namespace front_forge
