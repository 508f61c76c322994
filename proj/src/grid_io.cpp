#include "front_forge/grid.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace front_forge {

GridField::GridField(std::vector<int> d, double h, std::vector<double> o, double t)
    : dims(std::move(d)), spacing(h), origin(std::move(o)), time(t) {
    if (dims.empty() || dims.size() > 4) throw std::invalid_argument("grid: need 1 to 4 axes");
    if (origin.size() != dims.size()) throw std::invalid_argument("grid: origin/dims size mismatch");
    if (!(spacing > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
    std::size_t n = 1;
    for (int k : dims) {
        if (k < 3) throw std::invalid_argument("grid: each axis needs at least 3 nodes");
        n *= static_cast<std::size_t>(k);
    }
    values.assign(n, 0.0);
}

std::size_t GridField::stride(int axis) const {
    std::size_t s = 1;
    for (int a = N() - 1; a > axis; --a) s *= static_cast<std::size_t>(dims[a]);
    return s;
}

std::size_t GridField::index(const std::array<int, 4>& ijk) const {
    std::size_t idx = 0;
    for (int a = 0; a < N(); ++a) idx = idx * dims[a] + ijk[a];
    return idx;
}

std::array<int, 4> GridField::unravel(std::size_t idx) const {
    std::array<int, 4> ijk{};
    for (int a = N() - 1; a >= 0; --a) {
        ijk[a] = static_cast<int>(idx % dims[a]);
        idx /= dims[a];
    }
    return ijk;
}

void GridField::position(std::size_t idx, double* pos) const {
    const auto ijk = unravel(idx);
    for (int a = 0; a < N(); ++a) pos[a] = origin[a] + spacing * ijk[a];
}

bool GridField::on_boundary(std::size_t idx) const {
    const auto ijk = unravel(idx);
    for (int a = 0; a < N(); ++a)
        if (ijk[a] == 0 || ijk[a] == dims[a] - 1) return true;
    return false;
}

double GridField::interpolate(const double* pos) const {
    std::array<int, 4> base{};
    std::array<double, 4> frac{};
    for (int a = 0; a < N(); ++a) {
        double s = (pos[a] - origin[a]) / spacing;
        s = std::clamp(s, 0.0, static_cast<double>(dims[a] - 1));
        int i = std::min(static_cast<int>(std::floor(s)), dims[a] - 2);
        base[a] = i;
        frac[a] = s - i;
    }
    double acc = 0.0;
    for (int corner = 0; corner < (1 << N()); ++corner) {
        std::array<int, 4> ijk = base;
        double w = 1.0;
        for (int a = 0; a < N(); ++a) {
            const int bit = (corner >> a) & 1;
            ijk[a] += bit;
            w *= bit ? frac[a] : 1.0 - frac[a];
        }
        if (w != 0.0) acc += w * values[index(ijk)];
    }
    return acc;
}

void write_grid(const GridField& g, const std::string& path) {
    static_assert(std::endian::native == std::endian::little, "payload is written in host order");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("grid: cannot write " + path);
    nlohmann::json h = {{"dims", g.dims},
                        {"spacing", std::vector<double>(g.dims.size(), g.spacing)},
                        {"origin", g.origin},
                        {"time", g.time},
                        {"schema", "ff-grid-v1"}};
    out << h.dump() << '\n';
    out.write(reinterpret_cast<const char*>(g.values.data()),
              static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("grid: short write to " + path);
}

GridField read_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("grid: cannot read " + path);
    std::string line;
    std::getline(in, line);
    const auto h = nlohmann::json::parse(line);
    if (h.value("schema", "") != "ff-grid-v1") throw std::runtime_error("grid: unknown schema in " + path);
    const auto spacing = h.at("spacing").get<std::vector<double>>();
    for (double s : spacing)
        if (std::abs(s - spacing.front()) > 1e-15 * std::abs(s)) throw std::runtime_error("grid: anisotropic spacing");
    GridField g(h.at("dims").get<std::vector<int>>(), spacing.front(), h.at("origin").get<std::vector<double>>(),
                h.at("time").get<double>());
    in.read(reinterpret_cast<char*>(g.values.data()), static_cast<std::streamsize>(g.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("grid: truncated payload in " + path);
    return g;
}

}  // namespace front_forge
