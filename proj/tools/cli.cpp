#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "halfline/errors.hpp"
#include "halfline/evolvers.hpp"
#include "halfline/harness.hpp"
#include "halfline/limit_dynamics.hpp"
#include "halfline/presets.hpp"
#include "halfline/report.hpp"

namespace halfline::cli {

namespace {

struct GridArgs {
    std::string preset = "xexp";
    double length = 40.0;
    std::size_t points = std::size_t{1} << 16;
};

struct EvolveArgs {
    GridArgs grid;
    double epsilon = 0.1;
    double b = 1.0;
    double t = 1.0;
    std::string engine = "spectral";
    std::string output;
};

struct LimitArgs {
    GridArgs grid;
    double b = 1.0;
    double t = 1.0;
    std::string json;
};

struct SweepArgs {
    std::string claim;
    GridArgs grid;
    double b = 1.0;
    std::vector<double> times;
    std::vector<double> epsilons;
    std::vector<std::string> observables;
    std::vector<std::string> test_vectors;
    std::string output;
    bool cross_check = false;
};

void add_grid_options(CLI::App& app, GridArgs& g) {
    app.add_option("--preset", g.preset, "Initial datum: xexp, bump12, bump23 or sine-mode-<k>")
        ->capture_default_str();
    app.add_option("--L", g.length, "Domain length")->capture_default_str();
    app.add_option("--N", g.points, "Grid points (power of two)")->capture_default_str();
}

void add_config(CLI::App& app, std::string& path) {
    app.add_option("--config", path, "Read options from a flat key = value (TOML) file; flags override it")
        ->check(CLI::ExistingFile);
}

// CLI11 only reads config files for the root app, so subcommand files are
// merged here: every key must name an option of the subcommand, and options
// already given on the command line win.
void merge_config(CLI::App& sub, const std::string& path) {
    if (path.empty()) {
        return;
    }
    const auto items = CLI::ConfigTOML().from_file(path);
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") {
            continue;  // section markers
        }
        if (!item.parents.empty()) {
            throw InvalidArgument("config: sections are not supported (key '" + item.fullname() + "')");
        }
        CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option("--" + item.name);
        } catch (const CLI::OptionNotFound&) {
        }
        if (opt == nullptr || item.name == "config" || item.name == "help") {
            throw InvalidArgument("config: unknown key '" + item.name + "' for " + sub.get_name());
        }
        if (opt->count() > 0) {
            continue;
        }
        opt->add_result(item.inputs);
        opt->run_callback();
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

void dump_wavefunction(const WaveFunction& u, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidArgument("cannot open '" + path + "' for writing");
    }
    out << "x,re,im\n";
    const Grid& g = u.grid();
    for (std::size_t j = 0; j < g.size(); ++j) {
        out << format_number(g.node(j)) << ',' << format_number(u[j].real()) << ','
            << format_number(u[j].imag()) << '\n';
    }
    if (!out) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

int cmd_evolve(const EvolveArgs& a, std::ostream& out) {
    const Grid grid = Grid::make(a.grid.length, a.grid.points);
    const WaveFunction phi = make_preset(a.grid.preset, grid);
    const EvolutionParams p{a.epsilon, a.b, a.t};
    p.validate();

    WaveFunction u(grid);
    std::optional<double> cross_gap;
    if (a.engine == "spectral") {
        u = spectral_evolve(phi, p);
    } else if (a.engine == "kernel") {
        u = kernel_evolve(phi, p);
    } else if (a.engine == "asymptotic") {
        const ResolutionReport r = resolution_report(grid, a.epsilon, a.b);
        if (!r.admissible) {
            throw ResolutionRefused("asymptotic: gauge wavelength resolved by " + fmt(r.points_per_wavelength) +
                                    " points (need " + fmt(kPointsPerWavelengthMin) + ")");
        }
        u = asymptotic_evolve(phi, p);
    } else {
        u = spectral_evolve(phi, p);
        cross_gap = distance(kernel_evolve(phi, p), u);
    }

    out << "engine: " << a.engine << '\n';
    out << "norm: " << fmt(norm(u)) << '\n';
    out << "max_abs: " << fmt(u.max_abs()) << '\n';
    out << "abs_u_x0: " << fmt(std::abs(u[0])) << '\n';
    out << "abs_u_boundary: " << fmt(std::abs(boundary_value(u))) << '\n';
    if (cross_gap) {
        out << "cross_gap: " << fmt(*cross_gap) << '\n';
    }
    if (!a.output.empty()) {
        dump_wavefunction(u, a.output);
        out << "wrote " << a.output << '\n';
    }
    return kExitPass;
}

int cmd_limit(const LimitArgs& a, std::ostream& out) {
    const Grid grid = Grid::make(a.grid.length, a.grid.points);
    const WaveFunction phi = make_preset(a.grid.preset, grid);

    const KrausBranchState kraus = kraus_apply(phi, a.b, a.t);
    const auto probs = kraus.probabilities();
    const CompAlgebraState comp = comp_state_evolve(phi, a.b, a.t);
    const double t_star = destruction_time(phi, a.b);
    const WoldProjectors wold = wold_projectors(a.b, a.t, grid);
    const double shift_mass = norm_squared(wold.shift(phi));
    const double unitary_mass = norm_squared(wold.unitary(phi));

    out << "kraus_probabilities: " << fmt(probs[0]) << ' ' << fmt(probs[1]) << '\n';
    out << "kraus_total: " << fmt(kraus.total_probability()) << '\n';
    out << "alpha: " << fmt(comp.alpha) << '\n';
    out << "singular_weight: " << fmt(comp.singular_weight) << '\n';
    out << "destruction_time: " << fmt(t_star) << " (grid spacing / b = " << fmt(grid.spacing() / a.b) << ")\n";
    out << "wold_shift_mass: " << fmt(shift_mass) << '\n';
    out << "wold_unitary_mass: " << fmt(unitary_mass) << '\n';
    if (!comp.normal_part) {
        out << "state destroyed at T_*=" << fmt(t_star) << '\n';
    } else if (comp.alpha < 1.0 - kAlphaFloor) {
        out << "mixed: alpha rho_Phi + (1 - alpha) J\n";
    } else {
        out << "pure\n";
    }

    if (!a.json.empty()) {
        nlohmann::ordered_json j;
        j["preset"] = a.grid.preset;
        j["L"] = a.grid.length;
        j["N"] = a.grid.points;
        j["b"] = a.b;
        j["t"] = a.t;
        j["kraus_probabilities"] = probs;
        j["alpha"] = comp.alpha;
        j["singular_weight"] = comp.singular_weight;
        j["destroyed"] = !comp.normal_part.has_value();
        j["destruction_time"] = t_star;
        j["wold_shift_mass"] = shift_mass;
        j["wold_unitary_mass"] = unitary_mass;
        std::ofstream f(a.json, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw InvalidArgument("cannot open '" + a.json + "' for writing");
        }
        f << j.dump(2) << '\n';
        out << "wrote " << a.json << '\n';
    }
    return kExitPass;
}

int cmd_sweep(const SweepArgs& a, const CLI::App& sub, std::ostream& out) {
    const Claim claim = parse_claim(a.claim);
    SweepConfig cfg = default_config(claim);
    const auto given = [&](const char* name) { return sub.get_option(name)->count() > 0; };
    if (given("--preset")) cfg.preset = a.grid.preset;
    if (given("--L")) cfg.length = a.grid.length;
    if (given("--N")) cfg.points = a.grid.points;
    if (given("--b")) cfg.b = a.b;
    if (given("--t")) cfg.times = a.times;
    if (given("--eps")) cfg.epsilons = a.epsilons;
    if (given("--observables")) cfg.observables = a.observables;
    if (given("--test-vectors")) cfg.test_vectors = a.test_vectors;
    if (given("--cross-check")) cfg.cross_check = a.cross_check;
    cfg.output = a.output.empty() ? std::string(claim_name(claim)) + ".csv" : a.output;

    const ClaimRun run = run_claim(claim, cfg);
    const ReportFiles files = emit_report(run.records, cfg.output, run.outcomes);
    for (const auto& o : run.outcomes) {
        out << (o.pass ? "PASS " : "FAIL ") << o.check.metric << ' ' << check_kind_name(o.check.kind) << ' '
            << o.check.threshold << ": " << o.detail << '\n';
    }
    out << "wrote " << files.csv.string() << " and " << files.json.string() << '\n';
    out << "claim " << claim_name(claim) << (run.pass() ? " passed" : " FAILED") << '\n';
    return run.pass() ? kExitPass : kExitVerdictFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Regularized drift dynamics on the half-line and its eps -> 0 limit", "halfline"};
    app.require_subcommand(1);

    EvolveArgs ev;
    std::string evolve_config, limit_config, sweep_config;
    auto* evolve = app.add_subcommand("evolve", "Evolve a preset with the kernel, spectral or asymptotic engine");
    add_config(*evolve, evolve_config);
    add_grid_options(*evolve, ev.grid);
    evolve->add_option("--eps", ev.epsilon, "Regularization epsilon")->capture_default_str();
    evolve->add_option("--b", ev.b, "Drift b")->capture_default_str();
    evolve->add_option("--t", ev.t, "Time")->capture_default_str();
    evolve->add_option("--engine", ev.engine, "kernel, spectral, asymptotic or both")
        ->check(CLI::IsMember({"kernel", "spectral", "asymptotic", "both"}))
        ->capture_default_str();
    evolve->add_option("--output", ev.output, "CSV dump (x,re,im) of the evolved state");

    LimitArgs lim;
    auto* limit = app.add_subcommand("limit", "Report the eps -> 0 limit state: Kraus branches, alpha, T_*, Wold masses");
    add_config(*limit, limit_config);
    add_grid_options(*limit, lim.grid);
    limit->add_option("--b", lim.b, "Drift b > 0")->capture_default_str();
    limit->add_option("--t", lim.t, "Time")->capture_default_str();
    limit->add_option("--json", lim.json, "Also write the report as JSON");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Run a convergence sweep and write CSV + JSON");
    add_config(*sweep, sweep_config);
    std::vector<std::string> claims;
    for (auto n : claim_names()) {
        claims.emplace_back(n);
    }
    sweep->add_option("--claim", sw.claim, "Which claim to sweep (required)")->check(CLI::IsMember(claims));
    add_grid_options(*sweep, sw.grid);
    sweep->add_option("--b", sw.b, "Drift b");
    sweep->add_option("--t", sw.times, "Time list");
    sweep->add_option("--eps", sw.epsilons, "Strictly decreasing epsilon list");
    sweep->add_option("--observables", sw.observables, "indicator, sigmoid, unit, projector:<preset>");
    sweep->add_option("--test-vectors", sw.test_vectors, "Preset names used as weak test vectors");
    sweep->add_option("--output", sw.output, "CSV path (default <claim>.csv); JSON summary goes beside it");
    sweep->add_flag("--cross-check,!--no-cross-check", sw.cross_check, "Compare against the kernel engine");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitRefused;
    }

    try {
        try {
            merge_config(*evolve, evolve_config);
            merge_config(*limit, limit_config);
            merge_config(*sweep, sweep_config);
        } catch (const CLI::ParseError& e) {
            throw InvalidArgument(std::string("config: ") + e.what());
        }
        if (evolve->parsed()) {
            return cmd_evolve(ev, out);
        }
        if (limit->parsed()) {
            return cmd_limit(lim, out);
        }
        if (sw.claim.empty()) {
            throw InvalidArgument("sweep: --claim is required");
        }
        return cmd_sweep(sw, *sweep, out);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitRefused;
    } catch (const ResolutionRefused& e) {
        err << "refused: " << e.what() << '\n';
        return kExitRefused;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace halfline::cli
