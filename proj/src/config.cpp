#include "front_forge/config.hpp"

#include "front_forge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace front_forge {

using nlohmann::json;

namespace {

json box_json(const SampleBox& b) { return {{"t_half", b.t_half}, {"x_half", b.x_half}, {"xi_half", b.xi_half}}; }

json front_json(const Front& f) { return {{"nu", f.nu}, {"theta", f.theta}, {"tau", f.tau}}; }

// Element templates for arrays whose default may be empty.
const json& element_template(const std::string& path) {
    static const json front = front_json(Front{{1.0}, 0.5, 0.0});
    static const json number = 0.0;
    static const json text = "";
    static const json integer = 0;
    if (path == "/arrangement/fronts") return front;
    if (path == "/experiment/suites") return text;
    if (path == "/grid/dims") return integer;
    return number;
}

const char* type_name(const json& t) {
    if (t.is_boolean()) return "a boolean";
    if (t.is_number_integer()) return "an integer";
    if (t.is_number()) return "a number";
    if (t.is_string()) return "a string";
    if (t.is_array()) return "an array";
    return "an object";
}

void validate(const json& in, const json& tmpl, const std::string& path) {
    auto fail = [&] { throw ConfigError(path, std::string("expected ") + type_name(tmpl)); };
    if (tmpl.is_object()) {
        if (!in.is_object()) fail();
        for (const auto& [key, value] : in.items()) {
            const auto it = tmpl.find(key);
            if (it == tmpl.end()) throw ConfigError(path + "/" + key, "unknown key");
            validate(value, *it, path + "/" + key);
        }
    } else if (tmpl.is_array()) {
        if (!in.is_array()) fail();
        const json& elem = element_template(path);
        for (std::size_t k = 0; k < in.size(); ++k) validate(in[k], elem, path + "/" + std::to_string(k));
    } else if (tmpl.is_boolean()) {
        if (!in.is_boolean()) fail();
    } else if (tmpl.is_number_integer()) {
        if (!in.is_number() || (!in.is_number_integer() && std::trunc(in.get<double>()) != in.get<double>())) fail();
    } else if (tmpl.is_number()) {
        if (!in.is_number()) fail();
    } else if (tmpl.is_string()) {
        if (!in.is_string()) fail();
    }
}

class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

    template <class T>
    void operator()(const char* key, T& out) const {
        try {
            if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>)
                out = static_cast<T>(j_.at(key).get<double>());
            else
                out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "/" + key, "cannot read value");
        }
    }
    Reader sub(const char* key) const { return Reader(j_.at(key), path_ + "/" + key); }
    std::string at(const char* key) const { return path_ + "/" + key; }
    const json& raw(const char* key) const { return j_.at(key); }

private:
    const json& j_;
    std::string path_;
};

void read_box(const Reader& r, SampleBox& b) {
    r("t_half", b.t_half);
    r("x_half", b.x_half);
    r("xi_half", b.xi_half);
}

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) throw ConfigError(path, what);
}

std::vector<Front> preset_fronts(const RunConfig::Arrangement& a) {
    if (a.preset == "symmetric_pair") return {{{1.0}, a.alpha0, 0.0}, {{-1.0}, a.alpha0, 0.0}};
    std::vector<Front> out;  // pyramid: one front per signed transverse axis
    for (int k = 0; k < a.N - 1; ++k)
        for (double s : {1.0, -1.0}) {
            std::vector<double> nu(a.N - 1, 0.0);
            nu[k] = s;
            out.push_back({nu, a.alpha0, 0.0});
        }
    return out;
}

// vfront needs the 2D pair, pyramid a 3D run, asym at least one ridge.
bool suite_applies(const std::string& s, const RunConfig::Arrangement& a) {
    const auto n = a.fronts.size();
    if (s == "vfront") return a.N == 2 && n == 2;
    if (s == "pyramid") return a.N == 3;
    if (s == "asym") return n >= 2;
    return true;
}

}  // namespace

json to_json(const RunConfig& c) {
    json fronts = json::array();
    for (const auto& f : c.arrangement.fronts) fronts.push_back(front_json(f));
    const auto& e = c.experiment;
    const auto& st = e.stability;
    return {
        {"reaction", {{"kind", c.reaction.kind}, {"theta", c.reaction.theta}, {"table", c.reaction.table}}},
        {"arrangement",
         {{"preset", c.arrangement.preset}, {"N", c.arrangement.N}, {"alpha0", c.arrangement.alpha0}, {"fronts", fronts}}},
        {"profile",
         {{"Xi", c.profile.Xi},
          {"dxi", c.profile.dxi},
          {"tol_c", c.profile.tol_c},
          {"delta0", c.profile.delta0},
          {"tail_cut", c.profile.tail_cut},
          {"horizon", c.profile.horizon}}},
        {"surface",
         {{"samples", c.surface.check.samples},
          {"fd_step", c.surface.check.fd_step},
          {"fd_tol", c.surface.check.fd_tol},
          {"residual_tol", c.surface.check.residual_tol},
          {"eig_floor", c.surface.check.eig_floor},
          {"box", box_json(c.surface.check.box)},
          {"calibration_samples", c.surface.calibration_samples},
          {"safety", c.surface.safety}}},
        {"bounds",
         {{"eps_fraction", c.bounds.eps_fraction}, {"delta", c.bounds.delta}, {"alpha_shrink", c.bounds.alpha_shrink}}},
        {"grid",
         {{"dims", c.grid.dims},
          {"dx", c.grid.dx},
          {"lo", c.grid.lo},
          {"y_below", c.grid.y_below},
          {"scheme", c.grid.scheme},
          {"dt", c.grid.dt},
          {"cfl_fraction", c.grid.cfl_fraction},
          {"imex_tol", c.grid.imex_tol}}},
        {"experiment",
         {{"suites", e.suites},
          {"construct",
           {{"start_times", e.construct.start_times},
            {"dt_probe", e.construct.dt_probe},
            {"order_tol", e.construct.order_tol},
            {"contraction", e.construct.contraction},
            {"planar_lag_probe", e.construct.planar_lag_probe}}},
          {"residual",
           {{"samples", e.residual.samples},
            {"h", e.residual.h},
            {"tol", e.residual.tol},
            {"box", box_json(e.residual.box)},
            {"canary_multiples", e.residual.canary_multiples},
            {"scan_multiples", e.residual.scan_multiples},
            {"shifted", e.residual.shifted},
            {"shift_horizon", e.residual.shift_horizon}}},
          {"asymptotics",
           {{"bucket_width", e.asymptotics.bucket_width},
            {"order_tol", e.asymptotics.order_tol},
            {"r2_min", e.asymptotics.r2_min}}},
          {"monotonicity", {{"rho", e.mono_rho}, {"shift", e.mono_shift}}},
          {"stability",
           {{"amplitude", st.amplitude},
            {"radius", st.radius},
            {"center", st.center},
            {"T", st.T},
            {"checkpoints", st.checkpoints},
            {"burn_in_fraction", st.burn_in_fraction},
            {"decay", st.decay},
            {"frame_speed", st.frame_speed},
            {"two_sided", st.two_sided}}},
          {"vfront",
           {{"x_inner", e.vfront.x_inner},
            {"x_outer", e.vfront.x_outer},
            {"slope_tol", e.vfront.slope_tol},
            {"planar_inner", e.vfront.planar_inner},
            {"planar_tol", e.vfront.planar_tol}}},
          {"tau",
           {{"dtaus", e.tau.dtaus},
            {"front", e.tau.front},
            {"start_time", e.tau.start_time},
            {"ratio_lo", e.tau.ratio_lo},
            {"ratio_hi", e.tau.ratio_hi},
            {"order_tol", e.tau.order_tol}}},
          {"pyramid", {{"far_distance", e.pyramid_far}}}}},
        {"seed", c.seed},
        {"output", c.output}};
}

RunConfig parse_config(const json& in) {
    const json tmpl = to_json(RunConfig{});
    validate(in, tmpl, "");
    json merged = tmpl;
    merged.merge_patch(in);
    const Reader root(merged, "");
    RunConfig c;

    const Reader re = root.sub("reaction");
    re("kind", c.reaction.kind);
    re("theta", c.reaction.theta);
    re("table", c.reaction.table);
    require(c.reaction.kind == "cubic" || c.reaction.kind == "tabulated", re.at("kind"), "must be cubic or tabulated");
    if (c.reaction.kind == "cubic")
        require(c.reaction.theta > 0.0 && c.reaction.theta < 0.5, re.at("theta"), "must lie in (0, 1/2)");
    else
        require(!c.reaction.table.empty(), re.at("table"), "a tabulated reaction needs a CSV path");

    const Reader ar = root.sub("arrangement");
    auto& a = c.arrangement;
    ar("preset", a.preset);
    ar("N", a.N);
    ar("alpha0", a.alpha0);
    require(a.N >= 2 && a.N <= kMaxSpaceDim, ar.at("N"), "must lie in [2, 4]");
    require(a.alpha0 > 0.0 && a.alpha0 <= M_PI / 2, ar.at("alpha0"), "must lie in (0, pi/2]");
    const json& jf = ar.raw("fronts");
    if (a.preset == "custom") {
        require(!jf.empty(), ar.at("fronts"), "a custom arrangement needs fronts");
        for (std::size_t k = 0; k < jf.size(); ++k) {
            const Reader fr(jf[k], ar.at("fronts") + "/" + std::to_string(k));
            Front f;
            fr("nu", f.nu);
            fr("theta", f.theta);
            fr("tau", f.tau);
            require(static_cast<int>(f.nu.size()) == a.N - 1, fr.at("nu"), "needs N - 1 components");
            a.fronts.push_back(f);
        }
    } else {
        require(a.preset == "symmetric_pair" || a.preset == "pyramid", ar.at("preset"),
                "must be symmetric_pair, pyramid or custom");
        if (a.preset == "symmetric_pair") require(a.N == 2, ar.at("N"), "symmetric_pair is two-dimensional");
        if (a.preset == "pyramid") require(a.N >= 3, ar.at("N"), "pyramid needs N >= 3");
        // A resolved config carries the expanded fronts; accept them only if they match the preset.
        a.fronts = preset_fronts(a);
        if (!jf.empty()) {
            std::vector<Front> given;
            for (const auto& f : jf) given.push_back({f["nu"].get<std::vector<double>>(), f["theta"], f["tau"]});
            const bool same = given.size() == a.fronts.size() &&
                              std::equal(given.begin(), given.end(), a.fronts.begin(), [](const Front& x, const Front& y) {
                                  return x.nu == y.nu && x.theta == y.theta && x.tau == y.tau;
                              });
            require(same, ar.at("fronts"), "explicit fronts need preset \"custom\"");
        }
    }

    const Reader pr = root.sub("profile");
    pr("Xi", c.profile.Xi);
    pr("dxi", c.profile.dxi);
    pr("tol_c", c.profile.tol_c);
    pr("delta0", c.profile.delta0);
    pr("tail_cut", c.profile.tail_cut);
    pr("horizon", c.profile.horizon);
    require(c.profile.dxi > 0.0 && c.profile.dxi < c.profile.Xi, pr.at("dxi"), "must lie in (0, Xi)");

    const Reader su = root.sub("surface");
    su("samples", c.surface.check.samples);
    su("fd_step", c.surface.check.fd_step);
    su("fd_tol", c.surface.check.fd_tol);
    su("residual_tol", c.surface.check.residual_tol);
    su("eig_floor", c.surface.check.eig_floor);
    read_box(su.sub("box"), c.surface.check.box);
    su("calibration_samples", c.surface.calibration_samples);
    su("safety", c.surface.safety);
    require(c.surface.check.samples > 0, su.at("samples"), "must be positive");
    require(c.surface.calibration_samples > 0, su.at("calibration_samples"), "must be positive");
    require(c.surface.safety >= 1.0, su.at("safety"), "must be >= 1");

    const Reader bo = root.sub("bounds");
    bo("eps_fraction", c.bounds.eps_fraction);
    bo("delta", c.bounds.delta);
    bo("alpha_shrink", c.bounds.alpha_shrink);
    require(c.bounds.eps_fraction > 0.0 && c.bounds.eps_fraction < 1.0, bo.at("eps_fraction"), "must lie in (0, 1)");
    require(c.bounds.alpha_shrink > 0.0 && c.bounds.alpha_shrink <= 1.0, bo.at("alpha_shrink"), "must lie in (0, 1]");
    require(c.bounds.delta >= 0.0, bo.at("delta"), "must be >= 0");

    const Reader gr = root.sub("grid");
    auto& g = c.grid;
    gr("dims", g.dims);
    gr("dx", g.dx);
    gr("lo", g.lo);
    gr("y_below", g.y_below);
    gr("scheme", g.scheme);
    gr("dt", g.dt);
    gr("cfl_fraction", g.cfl_fraction);
    gr("imex_tol", g.imex_tol);
    if (!in.contains("grid") || !in["grid"].contains("dims")) g.dims.assign(a.N, a.N == 2 ? 512 : 128);
    require(static_cast<int>(g.dims.size()) == a.N, gr.at("dims"), "needs N entries");
    for (int d : g.dims) require(d >= 8, gr.at("dims"), "each axis needs at least 8 nodes");
    require(g.dx > 0.0, gr.at("dx"), "must be positive");
    require(g.lo.empty() || static_cast<int>(g.lo.size()) == a.N, gr.at("lo"), "needs N entries or none");
    require(g.scheme == "explicit" || g.scheme == "imex", gr.at("scheme"), "must be explicit or imex");
    require(g.cfl_fraction > 0.0 && g.cfl_fraction <= 1.0, gr.at("cfl_fraction"), "must lie in (0, 1]");
    require(g.dt >= 0.0, gr.at("dt"), "must be >= 0");
    require(g.imex_tol > 0.0, gr.at("imex_tol"), "must be positive");
    if (g.lo.empty()) {
        for (int k = 0; k < a.N; ++k) {
            const double extent = g.dx * (g.dims[k] - 1);
            g.lo.push_back(k + 1 < a.N ? -0.5 * extent : -g.y_below * extent);
        }
    }

    const Reader ex = root.sub("experiment");
    auto& e = c.experiment;
    ex("suites", e.suites);
    const bool explicit_suites = in.contains("experiment") && in["experiment"].contains("suites");
    if (!explicit_suites) {
        e.suites.clear();
        for (const auto& s : kSuites)
            if (suite_applies(s, a)) e.suites.push_back(s);
    }
    for (std::size_t k = 0; k < e.suites.size(); ++k) {
        const std::string path = ex.at("suites") + "/" + std::to_string(k);
        require(std::find(kSuites.begin(), kSuites.end(), e.suites[k]) != kSuites.end(), path,
                "unknown suite " + e.suites[k]);
        require(suite_applies(e.suites[k], a), path, "suite " + e.suites[k] + " does not apply to this arrangement");
    }
    const Reader co = ex.sub("construct");
    co("start_times", e.construct.start_times);
    co("dt_probe", e.construct.dt_probe);
    co("order_tol", e.construct.order_tol);
    co("contraction", e.construct.contraction);
    co("planar_lag_probe", e.construct.planar_lag_probe);
    require(!e.construct.start_times.empty(), co.at("start_times"), "needs at least one start time");
    for (std::size_t k = 0; k < e.construct.start_times.size(); ++k) {
        require(e.construct.start_times[k] < 0.0, co.at("start_times"), "start times must be negative");
        require(k == 0 || e.construct.start_times[k] < e.construct.start_times[k - 1], co.at("start_times"),
                "start times must be strictly decreasing");
    }
    const Reader rs = ex.sub("residual");
    rs("samples", e.residual.samples);
    rs("h", e.residual.h);
    rs("tol", e.residual.tol);
    read_box(rs.sub("box"), e.residual.box);
    rs("canary_multiples", e.residual.canary_multiples);
    rs("scan_multiples", e.residual.scan_multiples);
    rs("shifted", e.residual.shifted);
    rs("shift_horizon", e.residual.shift_horizon);
    require(e.residual.samples > 0, rs.at("samples"), "must be positive");
    require(e.residual.h > 0.0, rs.at("h"), "must be positive");
    const Reader as = ex.sub("asymptotics");
    as("bucket_width", e.asymptotics.bucket_width);
    as("order_tol", e.asymptotics.order_tol);
    as("r2_min", e.asymptotics.r2_min);
    require(e.asymptotics.bucket_width > 0.0, as.at("bucket_width"), "must be positive");
    const Reader mo = ex.sub("monotonicity");
    mo("rho", e.mono_rho);
    mo("shift", e.mono_shift);
    const Reader sb = ex.sub("stability");
    auto& st = e.stability;
    sb("amplitude", st.amplitude);
    sb("radius", st.radius);
    sb("center", st.center);
    sb("T", st.T);
    sb("checkpoints", st.checkpoints);
    sb("burn_in_fraction", st.burn_in_fraction);
    sb("decay", st.decay);
    sb("frame_speed", st.frame_speed);
    sb("two_sided", st.two_sided);
    require(st.amplitude > 0.0 && st.amplitude <= 0.3, sb.at("amplitude"), "must lie in (0, 0.3]");
    require(st.radius > 0.0, sb.at("radius"), "must be positive");
    require(st.center.empty() || static_cast<int>(st.center.size()) == a.N, sb.at("center"), "needs N entries or none");
    require(st.checkpoints >= 2, sb.at("checkpoints"), "needs at least 2");
    const Reader vf = ex.sub("vfront");
    vf("x_inner", e.vfront.x_inner);
    vf("x_outer", e.vfront.x_outer);
    vf("slope_tol", e.vfront.slope_tol);
    vf("planar_inner", e.vfront.planar_inner);
    vf("planar_tol", e.vfront.planar_tol);
    require(e.vfront.x_inner < e.vfront.x_outer, vf.at("x_outer"), "must exceed x_inner");
    const Reader ta = ex.sub("tau");
    ta("dtaus", e.tau.dtaus);
    ta("front", e.tau.front);
    ta("start_time", e.tau.start_time);
    ta("ratio_lo", e.tau.ratio_lo);
    ta("ratio_hi", e.tau.ratio_hi);
    ta("order_tol", e.tau.order_tol);
    require(e.tau.dtaus.size() >= 2, ta.at("dtaus"), "needs two step sizes");
    require(e.tau.front >= 0 && e.tau.front < static_cast<int>(a.fronts.size()), ta.at("front"), "no such front");
    require(e.tau.start_time < 0.0, ta.at("start_time"), "must be negative");
    ex.sub("pyramid")("far_distance", e.pyramid_far);

    root("seed", c.seed);
    root("output", c.output);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "malformed JSON in " + path + ": " + e.what());
    }
    return parse_config(j);
}

GridSpec RunConfig::grid_spec() const {
    GridSpec g;
    g.dims = grid.dims;
    g.dx = grid.dx;
    g.lo = grid.lo;
    return g;
}

SolverConfig RunConfig::solver_config() const {
    SolverConfig s;
    s.dt = grid.dt;
    s.cfl_fraction = grid.cfl_fraction;
    s.scheme = grid.scheme == "imex" ? Scheme::ImexCN : Scheme::ExplicitEuler;
    s.imex_tol = grid.imex_tol;
    return s;
}

ReactionSpec RunConfig::reaction_spec() const {
    try {
        return reaction.kind == "cubic" ? make_cubic(reaction.theta) : load_tabulated_csv(reaction.table);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("/reaction", e.what());
    }
}

}  // namespace front_forge
