// Command-line front end: pulses, simulate, sweep, reproduce, verify.

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dressedw/dressedw.hpp>

namespace {

using namespace dressedw;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConvergence = 2;
constexpr int kExitCheckFailed = 3;

struct Overrides {
    std::string config_file;
    std::string flavor, channel_map, duration_mode, amplitude_mode, output;
    double g = 0, amplitude = 0, omega0 = 0, kappa = 0, gamma = 0, gammaphi = 0, dT = 0, dOmega = 0, dg = 0;
    int steps = 0;
    int jobs = default_jobs();
    int grid_points = 11;
    bool no_csv = false, no_json = false;
};

void add_common(CLI::App &app, Overrides &o)
{
    app.add_option("--config", o.config_file, "key = value configuration file (flags override it)");
    app.add_option("--flavor", o.flavor, "pulse flavor: dressed, gaussian, stirap");
    app.add_option("--channel-map", o.channel_map, "waveform assignment: matched, printed");
    app.add_option("--g", o.g, "coupling g in units of 1/T");
    app.add_option("--amplitude", o.amplitude, "dressing amplitude A of mu(t)");
    app.add_option("--omega0", o.omega0, "STIRAP peak amplitude in units of 1/T");
    app.add_option("--kappa", o.kappa, "cavity decay rate in units of 1/T");
    app.add_option("--gamma", o.gamma, "spontaneous emission rate (each channel) in units of 1/T");
    app.add_option("--gammaphi", o.gammaphi, "dephasing rate (each channel) in units of 1/T");
    app.add_option("--dT", o.dT, "relative duration error dT/T");
    app.add_option("--dOmega", o.dOmega, "relative amplitude error dOmega0/Omega0");
    app.add_option("--dg", o.dg, "relative coupling error dg/g");
    app.add_option("--duration-mode", o.duration_mode, "dT handling: cutoff, rescale");
    app.add_option("--amplitude-mode", o.amplitude_mode, "dOmega handling: power, linear");
    app.add_option("--steps", o.steps, "RK4 steps over [0, T]");
    app.add_option("--output", o.output, "output directory (default $DRESSEDW_OUTPUT_DIR or ./results)");
    app.add_option("--jobs", o.jobs, "worker threads for sweeps");
    app.add_flag("--no-csv", o.no_csv, "skip CSV output");
    app.add_flag("--no-json", o.no_json, "skip JSON metadata");
}

// config file first, then environment, then any flag given on the command line
RunConfig resolve(const CLI::App &app, const Overrides &o, const std::string &command)
{
    RunConfig c = o.config_file.empty() ? RunConfig{} : load_config(o.config_file);
    c.command = command;
    if (o.config_file.empty()) {
        if (const char *env = std::getenv("DRESSEDW_OUTPUT_DIR"); env && *env) {
            c.output_dir = env;
        }
    }
    auto given = [&](const char *name) { return app.count(name) > 0; };
    if (given("--flavor")) c.flavor = parse_flavor(o.flavor);
    if (given("--channel-map")) c.channel_map = parse_channel_map(o.channel_map);
    if (given("--g")) c.g = o.g;
    if (given("--amplitude")) c.schedule_amplitude = o.amplitude;
    if (given("--omega0")) c.omega0 = o.omega0;
    if (given("--kappa")) c.kappa = o.kappa;
    if (given("--gamma")) c.gamma = o.gamma;
    if (given("--gammaphi")) c.gamma_phi = o.gammaphi;
    if (given("--dT")) c.variation.dT = o.dT;
    if (given("--dOmega")) c.variation.dOmega = o.dOmega;
    if (given("--dg")) c.variation.dg = o.dg;
    if (given("--duration-mode")) c.duration_mode = parse_duration_mode(o.duration_mode);
    if (given("--amplitude-mode")) c.amplitude_mode = parse_amplitude_mode(o.amplitude_mode);
    if (given("--steps")) c.n_steps = o.steps;
    if (given("--output")) c.output_dir = o.output;
    if (o.no_csv) c.write_csv = false;
    if (o.no_json) c.write_json = false;
    c.scenario().validate();
    require(o.jobs >= 1, "--jobs must be at least 1");
    return c;
}

ExperimentOptions experiment_options(const RunConfig &c, const Overrides &o)
{
    ExperimentOptions e;
    e.n_steps = c.n_steps;
    e.jobs = o.jobs;
    e.channel_map = c.channel_map;
    e.duration_mode = c.duration_mode;
    e.amplitude_mode = c.amplitude_mode;
    e.schedule_amplitude = c.schedule_amplitude;
    e.grid_points = o.grid_points;
    return e;
}

void write_outputs(const RunConfig &c, const std::string &name, const CsvTable &table, const json &meta)
{
    if (!c.write_csv && !c.write_json) {
        return;
    }
    ensure_writable_directory(c.output_dir);
    if (c.write_csv) {
        write_text_file(fs::path(c.output_dir) / (name + ".csv"), table.str());
    }
    if (c.write_json) {
        write_text_file(fs::path(c.output_dir) / (name + ".meta.json"), meta.dump(2) + "\n");
    }
}

json config_json(const RunConfig &c)
{
    return {{"schema_version", kSchemaVersion}, {"version", kVersion}, {"config", serialize_config(c)}};
}

int cmd_pulses(const RunConfig &c)
{
    const PulseSchedule p = c.scenario().schedule();
    CsvTable t({"t_over_T", "Omega1", "Omega2", "Omega3", "Omega4"});
    std::array<double, 4> peak{}, peak_t{};
    for (const auto &s : p.sample(c.n_steps)) {
        t.add_row({s.t, s.omega[0], s.omega[1], s.omega[2], s.omega[3]});
        for (std::size_t k = 0; k < 4; ++k) {
            if (s.omega[k] > peak[k]) {
                peak[k] = s.omega[k];
                peak_t[k] = s.t;
            }
        }
    }
    for (std::size_t k = 0; k < 4; ++k) {
        std::cout << "Omega" << k + 1 << ": peak " << format_double(peak[k]) << " at t/T = "
                  << format_double(peak_t[k]) << "\n";
    }
    write_outputs(c, "pulses", t, config_json(c));
    return kExitOk;
}

int cmd_simulate(const RunConfig &c)
{
    const Scenario s = c.scenario();
    CsvTable t({"t_over_T", "P1", "P2", "P3", "P4", "P5", "P6", "P7", "P8", "P9", "PG", "fidelity"});
    Diagnostics d;
    double f = 0.0;
    auto emit = [&](const auto &traj) {
        for (const auto &ob : traj.observables) {
            std::vector<std::string> row = {format_double(ob.t)};
            for (double x : ob.populations) {
                row.push_back(format_double(x));
            }
            row.push_back(format_double(ob.fidelity));
            t.add_row(std::move(row));
        }
        d = traj.diagnostics;
        f = traj.final_fidelity();
    };
    if (s.noise.is_closed()) {
        emit(simulate_pure(s));
    } else {
        emit(simulate_mixed(s));
    }
    json meta = config_json(c);
    meta["fidelity"] = f;
    meta["diagnostics"] = {{"norm_drift", d.norm_drift}, {"trace_drift", d.trace_drift},
                           {"min_eigenvalue", d.min_eigenvalue}, {"converged", d.converged}};
    write_outputs(c, "simulate", t, meta);
    std::cout << "F(T') = " << format_double(f) << "\n";
    if (!d.converged) {
        throw ConvergenceError(d.message);
    }
    return kExitOk;
}

SweepAxis parse_axis(const std::string &text)
{
    const auto eq = text.find('=');
    require(eq != std::string::npos, "axis must look like name=v1,v2,... or name=start:stop:count");
    SweepAxis a{text.substr(0, eq), {}};
    const std::string rest = text.substr(eq + 1);
    if (std::count(rest.begin(), rest.end(), ':') == 2) {
        std::stringstream ss(rest);
        std::string lo, hi, n;
        std::getline(ss, lo, ':');
        std::getline(ss, hi, ':');
        std::getline(ss, n);
        a.values = linspace(detail::parse_number(a.name, lo), detail::parse_number(a.name, hi),
                            detail::parse_int(a.name, n));
    } else {
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            a.values.push_back(detail::parse_number(a.name, detail::trim(item)));
        }
    }
    return a;
}

int cmd_sweep(const RunConfig &c, const std::vector<std::string> &axes, int jobs)
{
    SweepSpec spec;
    spec.base = c.scenario();
    spec.noise_over_g = {c.kappa / c.g, c.gamma / c.g, c.gamma_phi / c.g};
    for (const auto &a : axes) {
        spec.axes.push_back(parse_axis(a));
    }
    const auto rs = run_sweep(spec, jobs);
    json meta = config_json(c);
    json ax = json::array();
    for (const auto &a : spec.axes) {
        ax.push_back({{"name", a.name}, {"values", a.values}});
    }
    meta["axes"] = ax;
    meta["converged"] = all_converged(rs);
    write_outputs(c, "sweep", records_table(rs), meta);
    for (const auto &r : rs) {
        std::cout << "F = " << format_double(r.fidelity) << "\n";
    }
    if (!all_converged(rs)) {
        throw ConvergenceError("at least one sweep point did not converge");
    }
    return kExitOk;
}

int run_reproduce(const RunConfig &c, const Overrides &o, const std::string &target)
{
    std::vector<std::string> names;
    if (target == "all") {
        names = experiment_names();
    } else {
        const auto &known = experiment_names();
        require(std::find(known.begin(), known.end(), target) != known.end(),
                "unknown reproduce target '" + target + "'");
        names = {target};
    }
    if (c.write_csv || c.write_json) {
        ensure_writable_directory(c.output_dir);
    }
    const ExperimentOptions opts = experiment_options(c, o);
    bool all_pass = true;
    bool converged = true;
    for (const auto &n : names) {
        const ExperimentOutput out = reproduce(n, opts);
        for (const auto &cmp : out.comparisons) {
            std::cout << "[" << n << "] " << describe(cmp) << "\n";
        }
        all_pass = all_pass && out.passed();
        converged = converged && out.converged;
        if (c.write_csv || c.write_json) {
            write_experiment(out, c.output_dir);
        }
    }
    if (!converged) {
        throw ConvergenceError("at least one run did not converge");
    }
    return all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const RunConfig &c)
{
    const ScheduleParams p{1.0, c.schedule_amplitude};
    const CancellationReport r = verify_cancellation(p);
    std::cout << to_json(r).dump() << "\n";
    std::vector<Comparison> checks;
    checks.push_back(compare("dressed-frame (0,+-) residual / Omega~", Relation::below, 1e-6, r.worst_residual));

    const SpinOneMatrices m = spin_one();
    const Mat3 cxy = m.x * m.y - m.y * m.x - kI * m.z;
    const Mat3 cyz = m.y * m.z - m.z * m.y - kI * m.x;
    const Mat3 czx = m.z * m.x - m.x * m.z - kI * m.y;
    checks.push_back(compare("spin-1 commutators [Mi, Mj] - i Mk", Relation::below, 1e-14,
                             std::max({cxy.norm(), cyz.norm(), czx.norm()})));
    const double v_end = std::max((dressing_transform(0.0, p) - Mat3::Identity()).norm(),
                                  (dressing_transform(p.duration, p) - Mat3::Identity()).norm());
    checks.push_back(compare("V(0), V(T) equal identity", Relation::below, 1e-10, v_end));

    Scenario s = c.scenario();
    s.noise = {};
    const PureTrajectory pure = simulate_pure(s);
    const MixedTrajectory mixed = simulate_mixed(s);
    checks.push_back(compare("zero-noise Lindblad vs Schroedinger |dF|", Relation::below, 1e-7,
                             std::abs(pure.final_fidelity() - mixed.final_fidelity())));
    s.noise = {0.01 * s.g, 0.01 * s.g, 0.001 * s.g};
    const MixedTrajectory noisy = simulate_mixed(s);
    checks.push_back(compare("trace drift with decoherence", Relation::below, 1e-8, noisy.diagnostics.trace_drift));

    bool ok = true;
    for (const auto &cmp : checks) {
        std::cout << describe(cmp) << "\n";
        ok = ok && cmp.pass;
    }
    return ok ? kExitOk : kExitCheckFailed;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Dressed-state W-state preparation simulator"};
    app.set_version_flag("--version", std::string(dressedw::kVersion));
    app.require_subcommand(1);

    Overrides o;
    auto *pulses = app.add_subcommand("pulses", "write the four drive waveforms");
    auto *simulate = app.add_subcommand("simulate", "run one trajectory");
    auto *sweep = app.add_subcommand("sweep", "run a 1-D or 2-D parameter sweep");
    auto *repro = app.add_subcommand("reproduce", "regenerate a figure or table and compare with the reference values");
    auto *verify = app.add_subcommand("verify", "check the dressed-frame cancellation and numerical oracles");
    for (auto *sc : {pulses, simulate, sweep, repro, verify}) {
        add_common(*sc, o);
    }
    std::vector<std::string> axes;
    sweep->add_option("--axis", axes, "name=v1,v2,... or name=start:stop:count (at most two)")->required();
    std::string target;
    repro->add_option("target", target, "fig3|fig4|fig5|fig6|fig7|fig8|table1|table2|realistic|all")->required();
    repro->add_option("--grid-points", o.grid_points, "points per axis for the 2-D figure grids");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        CLI::App *sc = app.get_subcommands().front();
        const dressedw::RunConfig c = resolve(*sc, o, sc->get_name());
        if (sc == pulses) return cmd_pulses(c);
        if (sc == simulate) return cmd_simulate(c);
        if (sc == sweep) return cmd_sweep(c, axes, o.jobs);
        if (sc == repro) return run_reproduce(c, o, target);
        return cmd_verify(c);
    } catch (const dressedw::ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const dressedw::ConvergenceError &e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const dressedw::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
