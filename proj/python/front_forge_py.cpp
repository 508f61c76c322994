#include "front_forge/cli.hpp"
#include "front_forge/config.hpp"
#include "front_forge/errors.hpp"
#include "front_forge/grid.hpp"
#include "front_forge/harness.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace front_forge;

namespace {

py::dict check_dict(const Check& c) {
    py::dict d;
    d["name"] = c.name;
    d["anchor"] = c.anchor;
    d["measured"] = c.measured;
    d["tolerance"] = c.tolerance;
    d["comparator"] = c.comparator;
    d["pass"] = c.pass;
    d["samples"] = c.samples;
    d["informational"] = c.informational;
    return d;
}

py::list check_list(const std::vector<Check>& cs) {
    py::list l;
    for (const auto& c : cs) l.append(check_dict(c));
    return l;
}

std::vector<Front> fronts_from(const py::list& fronts) {
    std::vector<Front> out;
    for (const auto& item : fronts) {
        const auto d = item.cast<py::dict>();
        out.push_back({d["nu"].cast<std::vector<double>>(), d["theta"].cast<double>(),
                       d.contains("tau") ? d["tau"].cast<double>() : 0.0});
    }
    return out;
}

py::array_t<double> grid_values(const GridField& g) {
    std::vector<py::ssize_t> shape(g.dims.begin(), g.dims.end());
    py::array_t<double> a(shape);
    std::copy(g.values.begin(), g.values.end(), a.mutable_data());
    return a;
}

}  // namespace

PYBIND11_MODULE(front_forge, m) {
    m.doc() = "Bistable front arrangements: profile, barriers, PDE construction and checks";
    m.attr("__version__") = FF_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<ReactionSpec>(m, "ReactionSpec")
        .def_readonly("theta", &ReactionSpec::theta)
        .def_readonly("fprime0", &ReactionSpec::fprime0)
        .def_readonly("fprime1", &ReactionSpec::fprime1)
        .def_readonly("sigma", &ReactionSpec::sigma)
        .def_readonly("L", &ReactionSpec::L)
        .def_readonly("mu", &ReactionSpec::mu)
        .def("f", [](const ReactionSpec& s, double u) { return eval_f(s, u); });
    m.def("make_cubic", &make_cubic, py::arg("theta"));
    m.def("make_tabulated", &make_tabulated, py::arg("u"), py::arg("f"));

    py::class_<FrontProfile>(m, "FrontProfile")
        .def_readonly("c_f", &FrontProfile::c_f)
        .def_readonly("lambda_plus", &FrontProfile::lambda_plus)
        .def_readonly("lambda_minus", &FrontProfile::lambda_minus)
        .def_readonly("xi", &FrontProfile::xi_grid)
        .def_readonly("g", &FrontProfile::g_vals)
        .def("__call__", [](const FrontProfile& p, double xi) { return eval_g(p, xi); })
        .def("gp", [](const FrontProfile& p, double xi) { return eval_gp(p, xi); })
        .def("gpp", [](const FrontProfile& p, double xi) { return eval_gpp(p, xi); });
    m.def(
        "solve_profile", [](const ReactionSpec& s) { return solve_profile(s); }, py::arg("spec"));
    m.def(
        "profile_constants",
        [](const FrontProfile& p, const ReactionSpec& s) {
            const ProfileConstants k = profile_constants(p, s);
            return py::dict(py::arg("R_sigma") = k.R_sigma, py::arg("k_min") = k.k_min, py::arg("M_bound") = k.M_bound);
        },
        py::arg("profile"), py::arg("spec"));

    py::class_<Instance>(m, "Instance")
        .def_property_readonly("c_f", [](const Instance& i) { return i.prof.c_f; })
        .def_property_readonly("n", [](const Instance& i) { return i.arr.n(); })
        .def_property_readonly("N", [](const Instance& i) { return i.arr.N(); });
    m.def(
        "make_instance",
        [](double theta, int N, const py::list& fronts) { return make_instance(make_cubic(theta), N, fronts_from(fronts)); },
        py::arg("theta"), py::arg("N"), py::arg("fronts"),
        "Cubic reaction, its profile and an arrangement; fronts are dicts with nu, theta and optional tau.");

    m.def(
        "surface_check",
        [](const Instance& inst, int samples, std::uint64_t seed) {
            SurfaceCheckOptions o;
            o.samples = samples;
            return check_list(surface_check(inst.arr, o, seed));
        },
        py::arg("instance"), py::arg("samples") = 1000, py::arg("seed") = 1);
    m.def(
        "calibrate",
        [](const Instance& inst, int samples, std::uint64_t seed) {
            const Calibration c = calibrate_constant(inst.arr, samples, seed);
            return py::dict(py::arg("C_raw") = c.C_raw, py::arg("C_emp") = c.C_emp, py::arg("parts") = c.parts);
        },
        py::arg("instance"), py::arg("samples") = 1000, py::arg("seed") = 1);
    m.def(
        "verify_supersolution",
        [](const Instance& inst, int samples, std::uint64_t seed) {
            const Calibration c = calibrate_constant(inst.arr, samples, seed);
            const BoundParams p = admissible_params(inst.spec, inst.prof, inst.pc, inst.arr, c.C_emp);
            ResidualOptions o;
            o.samples = samples;
            return check_list(verify_supersolution(inst, p, o, seed));
        },
        py::arg("instance"), py::arg("samples") = 1000, py::arg("seed") = 1);

    m.def(
        "resolve_config",
        [](const std::string& text) { return to_json(parse_config(nlohmann::json::parse(text))).dump(); },
        py::arg("config_json"), "Resolved config (all defaults materialized) as a JSON string.");
    m.def(
        "read_grid",
        [](const std::string& path) {
            const GridField g = read_grid(path);
            return py::make_tuple(grid_values(g), g.origin, g.spacing, g.time);
        },
        py::arg("path"), "ff-grid-v1 file as (values, origin, spacing, time).");
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"front-forge"};
            full.insert(full.end(), args.begin(), args.end());
            std::ostringstream out, err;
            const int code = run_cli(full, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs a front-forge command; returns (exit_code, stdout, stderr).");
}
