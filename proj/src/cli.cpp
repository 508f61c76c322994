#include "front_forge/cli.hpp"

#include "front_forge/config.hpp"
#include "front_forge/errors.hpp"
#include "front_forge/grid.hpp"
#include "front_forge/harness.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace front_forge {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
    std::string resolved_output;  // set once the config is resolved; used for failure snapshots
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config, "JSON config; omitted keys take their defaults");
    cmd->add_option("--seed", c.seed, "overrides the config seed");
    cmd->add_option("--threads", c.threads, "OpenMP threads (0: runtime default)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", c.out, "output directory (overrides the config)");
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "malformed JSON in " + path + ": " + e.what());
    }
}

RunConfig resolve(Common& c, const json& overrides = json::object()) {
    json j = c.config.empty() ? json::object() : read_json(c.config);
    if (!j.is_object()) throw ConfigError("", "config root must be an object");
    if (c.seed) j["seed"] = *c.seed;
    if (!c.out.empty()) j["output"] = c.out;
    j.merge_patch(overrides);
    if (c.threads > 0) omp_set_num_threads(c.threads);
    RunConfig cfg = parse_config(j);
    c.resolved_output = cfg.output;
    return cfg;
}

/// Files written into the output directory, in order, for the manifest.
class Outputs {
public:
    explicit Outputs(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
    std::string path(const std::string& name) {
        files_.push_back(name);
        return (fs::path(dir_) / name).string();
    }
    void json_file(const std::string& name, const json& j) {
        std::ofstream out(path(name));
        if (!out) throw std::runtime_error("cannot write " + name + " in " + dir_);
        out << j.dump(2) << '\n';
    }
    void finish(const std::string& command) { write_manifest(dir_, files_, command); }

private:
    std::string dir_;
    std::vector<std::string> files_;
};

void write_resolved(Outputs& o, const RunConfig& cfg) { o.json_file("resolved-config.json", to_json(cfg)); }

/// Provenance depends on the config contents but not on where results are written.
json provenance(const std::string& command, const RunConfig& cfg) {
    json j = to_json(cfg);
    j.erase("output");
    return {{"command", command}, {"config_sha256", sha256_hex(j.dump())}, {"seed", cfg.seed}, {"version", FF_VERSION}};
}

std::string instance_label(const RunConfig& cfg) {
    std::ostringstream s;
    s << cfg.arrangement.preset << " N=" << cfg.arrangement.N << " n=" << cfg.arrangement.fronts.size() << " "
      << cfg.reaction.kind;
    if (cfg.reaction.kind == "cubic") s << " theta=" << cfg.reaction.theta;
    return s.str();
}

SolverConfig solver_for(const RunConfig& cfg) {
    SolverConfig s = cfg.solver_config();
    s.diagnostic_dir = (fs::path(cfg.output) / "diagnostics").string();
    return s;
}

void add_profile_constants(VerificationReport& r, const Instance& inst) {
    r.constants["c_f"] = inst.prof.c_f;
    r.constants["R_sigma"] = inst.pc.R_sigma;
    r.constants["k_min"] = inst.pc.k_min;
    r.constants["M_bound"] = inst.pc.M_bound;
    r.constants["sigma"] = inst.spec.sigma;
    r.constants["L"] = inst.spec.L;
    r.constants["mu"] = inst.spec.mu;
}

void add_calibration(VerificationReport& r, const Calibration& cal) {
    r.constants["C_raw"] = cal.C_raw;
    r.constants["C_emp"] = cal.C_emp;
    r.constants["calibration_samples_used"] = static_cast<double>(cal.samples_used);
    r.constants["calibration_sign_violations"] = static_cast<double>(cal.sign_violations);
    for (const auto& [k, v] : cal.parts) r.constants["C_part." + k] = v;
}

void add_params(VerificationReport& r, const BoundParams& p) {
    r.constants["epsilon0"] = p.epsilon0;
    r.constants["epsilon"] = p.epsilon;
    r.constants["alpha"] = p.alpha;
    r.constants["alpha_sub"] = p.alpha_sub;
    r.constants["omega"] = p.omega;
    r.constants["delta"] = p.delta;
    r.constants["k_shift"] = p.k_shift;
}

struct Prepared {
    Instance inst;
    Calibration cal;
    BoundParams params;
};

Prepared prepare(const RunConfig& cfg, VerificationReport& r) {
    Prepared p{make_instance(cfg.reaction_spec(), cfg.arrangement.N, cfg.arrangement.fronts, cfg.profile), {}, {}};
    p.cal = calibrate_constant(p.inst.arr, cfg.surface.calibration_samples, cfg.seed, cfg.surface.safety,
                               cfg.surface.check.box);
    p.params = admissible_params(p.inst.spec, p.inst.prof, p.inst.pc, p.inst.arr, p.cal.C_emp, cfg.bounds.eps_fraction,
                                 cfg.bounds.delta, cfg.bounds.alpha_shrink);
    add_profile_constants(r, p.inst);
    add_calibration(r, p.cal);
    add_params(r, p.params);
    return p;
}

VerificationReport new_report(const std::string& command, const RunConfig& cfg) {
    VerificationReport r;
    r.instance = instance_label(cfg);
    r.provenance = provenance(command, cfg);
    return r;
}

int finish_report(const VerificationReport& r, Outputs& o, std::ostream& out, const std::string& extra_copy = {}) {
    write_report(r, o.path("report.json"));
    if (!extra_copy.empty()) write_report(r, extra_copy);
    out << r.instance << ": " << r.checks.size() << " checks, " << r.failures() << " failed\n";
    for (const auto& c : r.checks)
        if (!c.pass && !c.informational) out << "  FAIL " << c.name << " measured=" << c.measured.front() << "\n";
    return r.all_pass() ? kExitOk : kExitChecksFailed;
}

std::string grid_name(double start_time) {
    std::ostringstream s;
    s << "u_start_" << start_time << ".ffg";
    return s.str();
}

int cmd_profile(Common& c, std::optional<double> theta, std::ostream& out) {
    json overrides = json::object();
    if (theta) overrides["reaction"] = {{"kind", "cubic"}, {"theta", *theta}};
    const RunConfig cfg = resolve(c, overrides);
    const ReactionSpec spec = cfg.reaction_spec();
    const FrontProfile prof = solve_profile(spec, cfg.profile);
    const ProfileConstants pc = profile_constants(prof, spec);

    json header = {{"c_f", prof.c_f},
                   {"c_bracket", prof.c_bracket},
                   {"shots", prof.shots},
                   {"Xi", prof.Xi},
                   {"dxi", prof.dxi},
                   {"lambda_plus", prof.lambda_plus},
                   {"lambda_minus", prof.lambda_minus},
                   {"tail_amp_plus", prof.tail_amp_plus},
                   {"tail_amp_minus", prof.tail_amp_minus},
                   {"join_slope_mismatch", prof.join_slope_mismatch},
                   {"ode_residual", profile_ode_residual(prof, spec)},
                   {"ode_range", {prof.ode_left, prof.ode_right}},
                   {"R_sigma", pc.R_sigma},
                   {"k_min", pc.k_min},
                   {"M_bound", pc.M_bound},
                   {"sigma", spec.sigma},
                   {"L", spec.L},
                   {"mu", spec.mu}};
    if (spec.kind == ReactionKind::Cubic) {
        // Closed form for the cubic: c = (1 - 2 theta)/sqrt(2), g = 1/(1 + exp(xi/sqrt(2))).
        const double c_exact = (1.0 - 2.0 * spec.theta) / std::sqrt(2.0);
        double sup = 0.0;
        for (int k = -2000; k <= 2000; ++k) {
            const double xi = 0.01 * k;
            sup = std::max(sup, std::abs(eval_g(prof, xi) - 1.0 / (1.0 + std::exp(xi / std::sqrt(2.0)))));
        }
        header["oracle"] = {{"c_exact", c_exact}, {"c_error", prof.c_f - c_exact}, {"logistic_sup_error", sup}};
    }

    Outputs o(cfg.output);
    write_profile_table(prof, o.path("profile.bin"));
    o.json_file("profile.json", header);
    write_resolved(o, cfg);
    o.finish("profile");
    out << header.dump(2) << '\n';
    return kExitOk;
}

int cmd_surface_check(Common& c, std::ostream& out) {
    const RunConfig cfg = resolve(c);
    VerificationReport r = new_report("surface-check", cfg);
    const Instance inst = make_instance(cfg.reaction_spec(), cfg.arrangement.N, cfg.arrangement.fronts, cfg.profile);
    add_profile_constants(r, inst);
    add_calibration(r, calibrate_constant(inst.arr, cfg.surface.calibration_samples, cfg.seed, cfg.surface.safety,
                                          cfg.surface.check.box));
    r.add(surface_check(inst.arr, cfg.surface.check, cfg.seed));

    Outputs o(cfg.output);
    write_resolved(o, cfg);
    const int code = finish_report(r, o, out);
    o.finish("surface-check");
    return code;
}

int cmd_simulate(Common& c, std::ostream& out) {
    const RunConfig cfg = resolve(c);
    VerificationReport r = new_report("simulate", cfg);
    const Prepared p = prepare(cfg, r);
    const EntireRun run = construct_entire(p.inst, p.params, cfg.grid_spec(), solver_for(cfg), cfg.experiment.construct);
    r.add(run.checks);
    for (const auto& [k, v] : run.constants) r.constants["construct." + k] = v;

    Outputs o(cfg.output);
    for (std::size_t k = 0; k < run.finals.size(); ++k) write_grid(run.finals[k], o.path(grid_name(run.start_times[k])));
    write_grid(run.U, o.path("U.ffg"));
    write_grid(run.U_prev, o.path("U_prev.ffg"));
    write_resolved(o, cfg);
    const int code = finish_report(r, o, out);
    o.finish("simulate");
    return code;
}

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

int cmd_verify(Common& c, const std::vector<std::string>& suites, const std::string& report_copy,
               std::ostream& out) {
    json overrides = json::object();
    if (!suites.empty()) overrides["experiment"] = {{"suites", suites}};
    const RunConfig cfg = resolve(c, overrides);
    const auto& e = cfg.experiment;
    VerificationReport r = new_report("verify", cfg);
    const Prepared p = prepare(cfg, r);
    const SolverConfig solver = solver_for(cfg);
    Outputs o(cfg.output);

    if (has(e.suites, "super")) r.add(verify_supersolution(p.inst, p.params, e.residual, cfg.seed));

    const bool need_run = has(e.suites, "asym") || has(e.suites, "mono") || has(e.suites, "stability") ||
                          has(e.suites, "vfront") || has(e.suites, "pyramid");
    if (need_run) {
        const EntireRun run = construct_entire(p.inst, p.params, cfg.grid_spec(), solver, e.construct);
        r.add(run.checks);
        for (const auto& [k, v] : run.constants) r.constants["construct." + k] = v;
        if (has(e.suites, "asym")) r.add(verify_asymptotics(run, p.inst, p.params, e.asymptotics));
        if (has(e.suites, "mono"))
            r.add(verify_monotonicity(run, p.inst, e.mono_rho, e.mono_shift, e.construct.order_tol));
        if (has(e.suites, "stability")) {
            StabilityTrace trace;
            r.add(stability_experiment(run, p.inst, solver, e.stability, &trace));
            o.json_file("stability_trace.json", {{"t", trace.times}, {"D", trace.D}, {"D_flipped", trace.D_flipped}});
        }
        if (has(e.suites, "vfront")) r.add(regression_vfront(run, p.inst, cfg.arrangement.alpha0, e.vfront));
        if (has(e.suites, "pyramid")) r.add(regression_pyramid(run, p.inst, e.pyramid_far));
    }
    if (has(e.suites, "tau")) r.add(tau_continuity_probe(p.inst, cfg.grid_spec(), solver, e.tau));

    write_resolved(o, cfg);
    const int code = finish_report(r, o, out, report_copy);
    o.finish("verify");
    return code;
}

int cmd_report_diff(const std::string& a, const std::string& b, const std::string& dir, std::ostream& out) {
    const ReportDiff d = diff_reports(read_report(a), read_report(b));
    for (const auto& n : d.flipped) out << "flipped " << n << "\n";
    for (const auto& n : d.only_a) out << "only in " << a << ": " << n << "\n";
    for (const auto& n : d.only_b) out << "only in " << b << ": " << n << "\n";
    out << d.flipped.size() << " flipped\n";
    if (!dir.empty()) {
        Outputs o(dir);
        o.json_file("diff.json", {{"a", a}, {"b", b}, {"flipped", d.flipped}, {"only_a", d.only_a}, {"only_b", d.only_b}});
        o.finish("report-diff");
    }
    return d.any_flip() ? kExitChecksFailed : kExitOk;
}

/// Failures without a field snapshot (profile shooting, linear solves) leave a JSON note instead.
std::string write_failure(const std::string& output, const std::string& what) {
    try {
        const fs::path dir = fs::path(output) / "diagnostics";
        fs::create_directories(dir);
        const fs::path p = dir / "numerical_failure.json";
        std::ofstream(p) << json{{"error", what}, {"version", FF_VERSION}}.dump(2) << '\n';
        return p.string();
    } catch (const std::exception&) {
        return {};
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Entire-solution construction and verification for bistable front arrangements", "front-forge"};
    app.set_version_flag("--version", FF_VERSION);
    app.require_subcommand(1);

    Common common;
    std::optional<double> theta;
    auto* profile = app.add_subcommand("profile", "solve the planar front profile and write its table");
    add_common(profile, common);
    profile->add_option("--theta", theta, "cubic reaction with this theta");

    auto* surface = app.add_subcommand("surface-check", "implicit-surface identities and calibration");
    add_common(surface, common);

    auto* simulate = app.add_subcommand("simulate", "run the existence construction and write the fields");
    add_common(simulate, common);

    std::vector<std::string> suites;
    std::string report_copy;
    auto* verify = app.add_subcommand("verify", "run verification suites and write a report");
    add_common(verify, common);
    verify->add_option("--suite", suites, "suite to run (repeatable)")->check(CLI::IsMember(kSuites));
    verify->add_option("--report", report_copy, "also write the report here");

    std::string diff_a, diff_b, diff_out;
    auto* diff = app.add_subcommand("report-diff", "compare two reports; nonzero exit on any flipped check");
    diff->add_option("a", diff_a)->required();
    diff->add_option("b", diff_b)->required();
    diff->add_option("--out", diff_out, "write diff.json and a manifest here");

    std::vector<char*> argv;
    std::vector<std::string> owned(args);
    for (auto& a : owned) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*profile) return cmd_profile(common, theta, out);
        if (*surface) return cmd_surface_check(common, out);
        if (*simulate) return cmd_simulate(common, out);
        if (*verify) return cmd_verify(common, suites, report_copy, out);
        return cmd_report_diff(diff_a, diff_b, diff_out, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        std::string snapshot = e.snapshot();
        if (snapshot.empty() && !common.resolved_output.empty()) snapshot = write_failure(common.resolved_output, e.what());
        if (!snapshot.empty()) err << "snapshot: " << snapshot << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace front_forge
