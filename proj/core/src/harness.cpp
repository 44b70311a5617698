#include "halfline/harness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <utility>

#include "halfline/errors.hpp"
#include "halfline/evolvers.hpp"
#include "halfline/limit_dynamics.hpp"
#include "halfline/presets.hpp"

namespace halfline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::string_view kProjectorPrefix = "projector:";

using Records = std::vector<ConvergenceRecord>;

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads and
// concatenates the per-index outputs in index order.
Records run_indexed(std::size_t count, const std::function<Records(std::size_t)>& body) {
    std::vector<Records> parts(count);
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            parts[i] = body(i);
        }
    } else {
        std::vector<std::exception_ptr> errors(count);
        {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    for (std::size_t i = w; i < count; i += workers) {
                        try {
                            parts[i] = body(i);
                        } catch (...) {
                            errors[i] = std::current_exception();
                        }
                    }
                });
            }
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    Records out;
    for (auto& p : parts) {
        std::move(p.begin(), p.end(), std::back_inserter(out));
    }
    return out;
}

void require_positive_drift(const SweepConfig& cfg, const char* what) {
    if (!(cfg.b > 0.0)) {
        throw InvalidArgument(std::string(what) + " requires b > 0");
    }
}

struct Emitter {
    const SweepConfig& cfg;
    Records out;

    void add(double t, double eps, std::string metric, double value) {
        out.push_back({cfg.preset, cfg.b, t, eps, std::move(metric), value, std::nullopt});
    }
};

WaveFunction unit_datum(const SweepConfig& cfg) {
    WaveFunction phi = cfg.datum();
    phi *= 1.0 / norm(phi);
    return phi;
}

std::vector<std::pair<std::string, WaveFunction>> test_vectors(const SweepConfig& cfg, const Grid& grid) {
    std::vector<std::pair<std::string, WaveFunction>> out;
    for (const auto& name : cfg.test_vectors) {
        out.emplace_back(name, make_preset(name, grid));
    }
    return out;
}

double alpha_of(const WaveFunction& phi, double b, double t) {
    return b > 0.0 ? norm_squared(shift_V(phi, b, t)) : 1.0;
}

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

Grid SweepConfig::grid() const { return Grid::make(length, points); }

WaveFunction SweepConfig::datum() const { return make_preset(preset, grid()); }

void SweepConfig::validate() const {
    const Grid g = grid();
    if (!(b != 0.0) || !std::isfinite(b)) {
        throw InvalidArgument("sweep: b must be finite and nonzero");
    }
    if (times.empty()) {
        throw InvalidArgument("sweep: time list is empty");
    }
    for (double t : times) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw InvalidArgument("sweep: times must be finite and nonnegative");
        }
    }
    if (epsilons.empty()) {
        throw InvalidArgument("sweep: epsilon list is empty");
    }
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        const double eps = epsilons[i];
        if (!(eps > 0.0) || !std::isfinite(eps)) {
            throw InvalidArgument("sweep: epsilons must be finite and positive");
        }
        if (i > 0 && !(eps < epsilons[i - 1])) {
            throw InvalidArgument("sweep: epsilon list must be strictly decreasing");
        }
        const ResolutionReport r = resolution_report(g, eps, b);
        if (!r.admissible) {
            throw ResolutionRefused("sweep: epsilon " + format_value(eps) + " gives " +
                                    format_value(r.points_per_wavelength) +
                                    " points per gauge wavelength, below the minimum of " +
                                    format_value(kPointsPerWavelengthMin));
        }
    }
    for (const auto& name : test_vectors) {
        find_preset(name, length);
    }
    for (const auto& spec : observables) {
        make_observable(spec, g, b, 0.0);
    }

    const WaveFunction phi = datum();
    const double t_max = *std::max_element(times.begin(), times.end());
    const double cut = length - std::abs(b) * t_max;
    double tail = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (g.node(j) >= cut) {
            tail += std::norm(phi[j]);
        }
    }
    tail *= g.spacing();
    if (tail > kTailMassMax) {
        throw InvalidArgument("sweep: datum has mass " + format_value(tail) + " beyond L - |b| t_max = " +
                              format_value(cut) + "; enlarge L or shorten the time list");
    }
}

std::vector<double> halving_ladder(double eps0, std::size_t rungs) {
    if (!(eps0 > 0.0) || !std::isfinite(eps0)) {
        throw InvalidArgument("halving_ladder: eps0 must be finite and positive");
    }
    std::vector<double> out;
    double eps = eps0;
    for (std::size_t i = 0; i < rungs; ++i) {
        out.push_back(eps);
        eps *= 0.5;
    }
    return out;
}

void assign_ratios(std::vector<ConvergenceRecord>& records) {
    // Aggregated rows carry t = NaN; key them as -1 so they group together.
    std::map<std::pair<std::string, double>, double> previous;
    for (auto& r : records) {
        const double tkey = std::isnan(r.t) ? -1.0 : r.t;
        const auto key = std::make_pair(r.metric, tkey);
        r.ratio.reset();
        if (const auto it = previous.find(key); it != previous.end()) {
            if (it->second > kRatioFloor && r.value >= 0.0) {
                r.ratio = r.value / it->second;
            }
        }
        previous[key] = r.value;
    }
}

Observable make_observable(std::string_view spec, const Grid& grid, double b, double t) {
    if (spec == "indicator") {
        const double edge = b * t;
        return MultiplicationObservable{BoundedFunction::sample(
            grid, [edge](double x) { return cplx{x <= edge ? 1.0 : 0.0, 0.0}; })};
    }
    if (spec == "sigmoid") {
        return MultiplicationObservable{BoundedFunction::sample(
            grid, [](double x) { return cplx{1.0 / (1.0 + std::exp(-4.0 * (x - 1.0))), 0.0}; })};
    }
    if (spec == "unit") {
        return FiniteRankObservable::identity();
    }
    if (spec.starts_with(kProjectorPrefix)) {
        return FiniteRankObservable::projector(make_preset(spec.substr(kProjectorPrefix.size()), grid));
    }
    throw InvalidArgument("unknown observable spec '" + std::string(spec) + "'");
}

std::vector<ConvergenceRecord> sweep_theorem1(const SweepConfig& cfg) {
    cfg.validate();
    require_positive_drift(cfg, "sweep_theorem1");
    const WaveFunction phi = cfg.datum();
    return run_indexed(cfg.epsilons.size(), [&](std::size_t i) {
        const double eps = cfg.epsilons[i];
        Emitter e{cfg, {}};
        double worst = 0.0;
        for (double t : cfg.times) {
            const EvolutionParams p{eps, cfg.b, t};
            const WaveFunction u = spectral_evolve(phi, p);
            const double r = distance(u, asymptotic_evolve(phi, p));
            worst = std::max(worst, r);
            e.add(t, eps, "remainder", r);
            if (cfg.cross_check && t > 0.0 && kernel_resolution(phi, p).admissible) {
                e.add(t, eps, "engine_gap", distance(kernel_evolve(phi, p), u));
            }
        }
        e.add(kNaN, eps, "remainder_max", worst);
        return std::move(e.out);
    });
}

std::vector<ConvergenceRecord> sweep_weak_decay(const SweepConfig& cfg, const WaveFunction& g) {
    cfg.validate();
    require_positive_drift(cfg, "sweep_weak_decay");
    if (!(g.grid() == cfg.grid())) {
        throw InvalidArgument("sweep_weak_decay: g lives on a different grid");
    }
    const WaveFunction phi = cfg.datum();
    return run_indexed(cfg.epsilons.size(), [&](std::size_t i) {
        const double eps = cfg.epsilons[i];
        Emitter e{cfg, {}};
        double worst = 0.0;
        for (double t : cfg.times) {
            const AsymptoticParts parts = asymptotic_parts(phi, {eps, cfg.b, t});
            const double v = std::abs(inner(g, parts.reflected));
            worst = std::max(worst, v);
            e.add(t, eps, "weak_overlap", v);
        }
        e.add(kNaN, eps, "weak_overlap_max", worst);
        return std::move(e.out);
    });
}

std::vector<ConvergenceRecord> sweep_expectations(const SweepConfig& cfg) {
    cfg.validate();
    require_positive_drift(cfg, "sweep_expectations");
    if (cfg.observables.empty()) {
        throw InvalidArgument("sweep_expectations: no observables configured");
    }
    const WaveFunction phi = unit_datum(cfg);
    const Grid grid = cfg.grid();

    // Limits do not depend on epsilon.
    std::vector<std::vector<Observable>> obs(cfg.times.size());
    std::vector<std::vector<cplx>> limits(cfg.times.size());
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        for (const auto& spec : cfg.observables) {
            obs[k].push_back(make_observable(spec, grid, cfg.b, cfg.times[k]));
            limits[k].push_back(limit_expectation(phi, obs[k].back(), cfg.b, cfg.times[k]));
        }
    }

    return run_indexed(cfg.epsilons.size(), [&](std::size_t i) {
        const double eps = cfg.epsilons[i];
        Emitter e{cfg, {}};
        std::vector<double> worst(cfg.observables.size(), 0.0);
        for (std::size_t k = 0; k < cfg.times.size(); ++k) {
            const double t = cfg.times[k];
            const WaveFunction u = spectral_evolve(phi, {eps, cfg.b, t});
            for (std::size_t m = 0; m < cfg.observables.size(); ++m) {
                const double gap = std::abs(expectation(u, obs[k][m]) - limits[k][m]);
                worst[m] = std::max(worst[m], gap);
                e.add(t, eps, "gap:" + cfg.observables[m], gap);
            }
        }
        for (std::size_t m = 0; m < cfg.observables.size(); ++m) {
            e.add(kNaN, eps, "gap_max:" + cfg.observables[m], worst[m]);
        }
        return std::move(e.out);
    });
}

std::vector<ConvergenceRecord> sweep_prop2(const SweepConfig& cfg) {
    cfg.validate();
    const WaveFunction phi = unit_datum(cfg);
    const auto gs = test_vectors(cfg, cfg.grid());
    if (cfg.b > 0.0 && gs.empty()) {
        throw InvalidArgument("sweep_prop2: b > 0 needs at least one test vector");
    }
    std::vector<WaveFunction> limits;
    std::vector<double> singular;
    for (double t : cfg.times) {
        limits.push_back(limit_group_V(phi, cfg.b, t));
        singular.push_back(1.0 - alpha_of(phi, cfg.b, t));
    }

    return run_indexed(cfg.epsilons.size(), [&](std::size_t i) {
        const double eps = cfg.epsilons[i];
        Emitter e{cfg, {}};
        double worst = 0.0;
        double worst_excess = 0.0;
        for (std::size_t k = 0; k < cfg.times.size(); ++k) {
            const double t = cfg.times[k];
            const WaveFunction d = spectral_evolve(phi, {eps, cfg.b, t}) - limits[k];
            if (cfg.b < 0.0) {
                const double s = norm(d);
                worst = std::max(worst, s);
                e.add(t, eps, "strong_gap", s);
                continue;
            }
            for (const auto& [name, g] : gs) {
                const double w = std::abs(inner(g, d));
                worst = std::max(worst, w);
                e.add(t, eps, "weak_gap:" + name, w);
            }
            const double s2 = norm_squared(d);
            const double excess = std::abs(s2 - singular[k]);
            worst_excess = std::max(worst_excess, excess);
            e.add(t, eps, "strong_gap_sq", s2);
            e.add(t, eps, "strong_excess", excess);
        }
        if (cfg.b < 0.0) {
            e.add(kNaN, eps, "strong_gap_max", worst);
        } else {
            e.add(kNaN, eps, "weak_gap_max", worst);
            e.add(kNaN, eps, "strong_excess_max", worst_excess);
        }
        return std::move(e.out);
    });
}

std::vector<ConvergenceRecord> divergence_probe(const SweepConfig& cfg) {
    cfg.validate();
    require_positive_drift(cfg, "divergence_probe");
    const WaveFunction phi = unit_datum(cfg);
    const auto gs = test_vectors(cfg, cfg.grid());

    Emitter e{cfg, {}};
    for (double t : cfg.times) {
        const WaveFunction v = shift_V(phi, cfg.b, t);
        const double singular = 1.0 - norm_squared(v);
        if (singular < kProbeMinSingularWeight) {
            throw InvalidArgument("divergence_probe: 1 - alpha(" + format_value(t) + ") = " +
                                  format_value(singular) + " is below " +
                                  format_value(kProbeMinSingularWeight) + "; choose a larger t");
        }
        e.add(t, kNaN, "singular_weight", singular);

        std::vector<WaveFunction> states;
        std::vector<WaveFunction> basis;
        std::vector<double> signs;
        for (std::size_t j = 0; j < cfg.epsilons.size(); ++j) {
            const EvolutionParams p{cfg.epsilons[j], cfg.b, t};
            states.push_back(spectral_evolve(phi, p));
            WaveFunction q = asymptotic_parts(phi, p).reflected;
            const double n0 = norm(q);
            for (const auto& prev : basis) {
                q -= inner(prev, q) * prev;
            }
            const double n1 = norm(q);
            if (n0 > 0.0 && n1 > kGramSchmidtDrop * n0) {
                q *= 1.0 / n1;
                basis.push_back(std::move(q));
                signs.push_back(j % 2 == 0 ? 1.0 : -1.0);
            }
        }

        std::vector<double> column;
        for (std::size_t j = 0; j < cfg.epsilons.size(); ++j) {
            const double eps = cfg.epsilons[j];
            const WaveFunction d = states[j] - v;
            e.add(t, eps, "hypothesis_excess", std::abs(norm_squared(d) - singular));
            double weak = 0.0;
            for (const auto& g : gs) {
                weak = std::max(weak, std::abs(inner(g.second, d)));
            }
            if (!gs.empty()) {
                e.add(t, eps, "weak_gap", weak);
            }
            double a = 0.0;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                a += signs[k] * std::norm(inner(basis[k], states[j]));
            }
            column.push_back(a);
            e.add(t, eps, "probe_expectation", a);
        }
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        double step = 0.0;
        for (std::size_t j = 1; j < column.size(); ++j) {
            step = std::max(step, std::abs(column[j] - column[j - 1]));
        }
        e.add(t, kNaN, "probe_rank", static_cast<double>(basis.size()));
        e.add(t, kNaN, "probe_peak_to_peak", *hi - *lo);
        e.add(t, kNaN, "probe_amplitude_ratio", (*hi - *lo) / singular);
        e.add(t, kNaN, "probe_step_ratio", step / singular);
    }
    return std::move(e.out);
}

std::vector<ConvergenceRecord> divergence_probe(const SweepConfig& cfg, double eps0) {
    SweepConfig c = cfg;
    c.epsilons = halving_ladder(eps0, 4);
    return divergence_probe(c);
}

namespace {

constexpr std::array<std::pair<Claim, std::string_view>, 6> kClaims{{
    {Claim::Thm1, "thm1"},
    {Claim::Weak, "weak"},
    {Claim::Thm3, "thm3"},
    {Claim::Thm5, "thm5"},
    {Claim::Prop2, "prop2"},
    {Claim::Thm2, "thm2"},
}};

}  // namespace

Claim parse_claim(std::string_view name) {
    for (const auto& [c, n] : kClaims) {
        if (n == name) {
            return c;
        }
    }
    throw InvalidArgument("unknown claim '" + std::string(name) + "'");
}

std::string_view claim_name(Claim claim) {
    for (const auto& [c, n] : kClaims) {
        if (c == claim) {
            return n;
        }
    }
    return "?";
}

std::vector<std::string_view> claim_names() {
    std::vector<std::string_view> out;
    for (const auto& entry : kClaims) {
        out.push_back(entry.second);
    }
    return out;
}

SweepConfig default_config(Claim claim) {
    SweepConfig cfg;
    switch (claim) {
        case Claim::Thm1:
            cfg.times = {0.5, 1.0, 2.0};
            cfg.epsilons = halving_ladder(0.2, 4);
            cfg.cross_check = true;
            break;
        case Claim::Weak:
            cfg.times = {0.5, 1.0, 1.5, 2.0, 2.5};
            cfg.epsilons = halving_ladder(0.2, 4);
            cfg.test_vectors = {"bump12"};
            break;
        case Claim::Thm3:
            cfg.times = {1.0, 1.5, 2.0};
            cfg.epsilons = halving_ladder(0.2, 5);
            cfg.observables = {"projector:bump12", "unit"};
            break;
        case Claim::Thm5:
            cfg.times = {1.0, 1.5, 2.0};
            cfg.epsilons = halving_ladder(0.2, 5);
            cfg.observables = {"indicator", "sigmoid"};
            break;
        case Claim::Prop2:
            cfg.preset = "bump12";
            cfg.times = {0.0, 0.5, 1.0, 1.5, 2.0};
            cfg.epsilons = halving_ladder(0.008, 4);
            cfg.test_vectors = {"bump23", "xexp"};
            break;
        case Claim::Thm2:
            cfg.times = {1.5};
            cfg.epsilons = halving_ladder(0.1, 4);
            cfg.test_vectors = {"bump12", "bump23"};
            break;
    }
    return cfg;
}

std::string_view check_kind_name(CheckKind kind) {
    switch (kind) {
        case CheckKind::Monotone: return "monotone";
        case CheckKind::FinalBelow: return "final_below";
        case CheckKind::AllBelow: return "all_below";
        case CheckKind::AllAbove: return "all_above";
        case CheckKind::FinalToFirstBelow: return "final_to_first_below";
    }
    return "?";
}

CheckOutcome evaluate_check(const AcceptanceCheck& check, const std::vector<ConvergenceRecord>& records) {
    // Columns keyed by t in order of first appearance.
    std::vector<std::pair<double, std::vector<const ConvergenceRecord*>>> columns;
    for (const auto& r : records) {
        if (r.metric != check.metric) {
            continue;
        }
        auto it = std::find_if(columns.begin(), columns.end(), [&](const auto& c) {
            return (std::isnan(c.first) && std::isnan(r.t)) || c.first == r.t;
        });
        if (it == columns.end()) {
            columns.push_back({r.t, {}});
            it = std::prev(columns.end());
        }
        it->second.push_back(&r);
    }
    CheckOutcome out{check, true, {}};
    if (columns.empty()) {
        out.pass = false;
        out.detail = "no records";
        return out;
    }
    std::ostringstream detail;
    detail.precision(4);
    for (const auto& [t, rows] : columns) {
        const double first = rows.front()->value;
        const double last = rows.back()->value;
        bool ok = true;
        switch (check.kind) {
            case CheckKind::Monotone:
                for (const auto* r : rows) {
                    ok = ok && (!r->ratio || *r->ratio < 1.0);
                }
                break;
            case CheckKind::FinalBelow:
                ok = last < check.threshold;
                break;
            case CheckKind::AllBelow:
                for (const auto* r : rows) {
                    ok = ok && r->value <= check.threshold;
                }
                break;
            case CheckKind::AllAbove:
                for (const auto* r : rows) {
                    ok = ok && r->value >= check.threshold;
                }
                break;
            case CheckKind::FinalToFirstBelow:
                ok = first > 0.0 && last / first < check.threshold;
                break;
        }
        if (!ok) {
            out.pass = false;
            detail << "fails at t=" << (std::isnan(t) ? std::string("all") : format_value(t)) << " (first "
                   << first << ", last " << last << "); ";
        }
    }
    out.detail = out.pass ? "ok" : detail.str();
    return out;
}

std::vector<AcceptanceCheck> claim_checks(Claim claim, const SweepConfig& cfg) {
    using K = CheckKind;
    std::vector<AcceptanceCheck> checks;
    switch (claim) {
        case Claim::Thm1:
            checks = {{"remainder_max", K::Monotone, 0.0}, {"remainder_max", K::FinalToFirstBelow, 0.5}};
            if (cfg.cross_check) {
                checks.push_back({"engine_gap", K::AllBelow, 1e-3});
            }
            break;
        case Claim::Weak:
            checks = {{"weak_overlap_max", K::Monotone, 0.0}};
            break;
        case Claim::Thm3:
        case Claim::Thm5:
            for (const auto& spec : cfg.observables) {
                if (spec == "unit") {
                    checks.push_back({"gap:unit", K::AllBelow, 1e-9});
                } else {
                    checks.push_back({"gap_max:" + spec, K::Monotone, 0.0});
                    checks.push_back({"gap_max:" + spec, K::FinalBelow, 0.02});
                }
            }
            break;
        case Claim::Prop2:
            if (cfg.b < 0.0) {
                checks = {{"strong_gap_max", K::Monotone, 0.0}, {"strong_gap_max", K::FinalBelow, 0.05}};
            } else {
                checks = {{"weak_gap_max", K::Monotone, 0.0},
                          {"weak_gap_max", K::FinalBelow, 0.02},
                          {"strong_excess_max", K::AllBelow, 0.05}};
            }
            break;
        case Claim::Thm2:
            checks = {{"hypothesis_excess", K::AllBelow, 0.05},
                      {"probe_amplitude_ratio", K::AllAbove, 0.5},
                      {"probe_step_ratio", K::AllAbove, 0.1}};
            if (!cfg.test_vectors.empty()) {
                checks.push_back({"weak_gap", K::Monotone, 0.0});
            }
            break;
    }
    return checks;
}

bool ClaimRun::pass() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const CheckOutcome& o) { return o.pass; });
}

ClaimRun run_claim(Claim claim, const SweepConfig& cfg) {
    ClaimRun run{claim, {}, {}};
    switch (claim) {
        case Claim::Thm1:
            run.records = sweep_theorem1(cfg);
            break;
        case Claim::Weak:
            if (cfg.test_vectors.empty()) {
                throw InvalidArgument("claim weak needs a test vector");
            }
            run.records = sweep_weak_decay(cfg, make_preset(cfg.test_vectors.front(), cfg.grid()));
            break;
        case Claim::Thm3:
        case Claim::Thm5:
            run.records = sweep_expectations(cfg);
            break;
        case Claim::Prop2:
            run.records = sweep_prop2(cfg);
            break;
        case Claim::Thm2:
            run.records = divergence_probe(cfg);
            break;
    }
    assign_ratios(run.records);
    for (const auto& check : claim_checks(claim, cfg)) {
        run.outcomes.push_back(evaluate_check(check, run.records));
    }
    return run;
}

}  // namespace halfline
