#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "halfline/grid.hpp"
#include "halfline/observables.hpp"

namespace halfline {

/// Tail mass of the datum beyond L - |b| t_max that a sweep tolerates.
inline constexpr double kTailMassMax = 1e-10;
/// A ratio to the previous epsilon is only formed above this value.
inline constexpr double kRatioFloor = 1e-12;
/// Gram-Schmidt drops a probe vector whose residual falls below this fraction.
inline constexpr double kGramSchmidtDrop = 1e-6;
/// The divergence probe refuses when 1 - alpha(t) is below this.
inline constexpr double kProbeMinSingularWeight = 0.05;

struct ConvergenceRecord {
    std::string preset;
    double b = 0.0;
    double t = 0.0;        ///< NaN for rows aggregated over t
    double epsilon = 0.0;  ///< NaN for rows aggregated over epsilon
    std::string metric;
    double value = 0.0;
    std::optional<double> ratio;  ///< value / previous value in the same (metric, t) column
};

struct SweepConfig {
    std::string preset = "xexp";
    double length = 40.0;
    std::size_t points = std::size_t{1} << 16;
    double b = 1.0;
    std::vector<double> times;
    std::vector<double> epsilons;  ///< strictly decreasing
    /// Expectation sweeps: "indicator" (chi_[0,bt]), "sigmoid", "unit" (the
    /// identity of the compact-plus-identity algebra) or "projector:<preset>".
    std::vector<std::string> observables;
    /// Preset names used as g in weak-gap and weak-overlap metrics.
    std::vector<std::string> test_vectors;
    std::string output;  ///< CSV path; the JSON summary goes next to it
    bool cross_check = false;

    Grid grid() const;
    WaveFunction datum() const;
    /// Throws InvalidArgument for malformed lists, unknown names or a datum
    /// with too much tail mass, ResolutionRefused for an inadmissible epsilon.
    void validate() const;
};

/// eps0, eps0/2, ..., `rungs` terms.
std::vector<double> halving_ladder(double eps0, std::size_t rungs);

/// Fills ratio for every record from the previous record of the same
/// (metric, t) column, in list order.
void assign_ratios(std::vector<ConvergenceRecord>& records);

/// Builds an observable from its spec string at time t.
Observable make_observable(std::string_view spec, const Grid& grid, double b, double t);

/// "remainder" per t, "remainder_max" per epsilon and, with cross_check,
/// "engine_gap" = ||kernel - spectral|| at every (eps, t > 0) the kernel
/// grid resolves; other points get no engine_gap row. Requires b > 0.
std::vector<ConvergenceRecord> sweep_theorem1(const SweepConfig& cfg);

/// "weak_overlap" = |(g, psi_eps(t))| for the reflected wave psi_eps and
/// "weak_overlap_max". Requires b > 0.
std::vector<ConvergenceRecord> sweep_weak_decay(const SweepConfig& cfg, const WaveFunction& g);

/// "gap:<spec>" = |regularized - limit| per observable and t, and
/// "gap_max:<spec>". Requires b > 0.
std::vector<ConvergenceRecord> sweep_expectations(const SweepConfig& cfg);

/// b < 0: "strong_gap" = ||(U_eps(t) - V_b(t)) phi|| and "strong_gap_max".
/// b > 0: "weak_gap:<g>" = |(g, (U_eps(t) - V_b(t)) phi)|, "weak_gap_max",
/// "strong_gap_sq" and "strong_excess" = |strong_gap_sq - (1 - alpha(t))| with
/// its max "strong_excess_max".
std::vector<ConvergenceRecord> sweep_prop2(const SweepConfig& cfg);

/// Per t: "singular_weight" (1 - alpha), per epsilon "hypothesis_excess",
/// "weak_gap" and "probe_expectation" = (u, A u) for the diagonal operator
/// A = sum_j (-1)^j P_{g_j}, then "probe_rank", "probe_peak_to_peak",
/// "probe_amplitude_ratio" (peak-to-peak / (1 - alpha)) and
/// "probe_step_ratio" (largest consecutive jump / (1 - alpha)).
/// Throws InvalidArgument when 1 - alpha(t) < kProbeMinSingularWeight.
std::vector<ConvergenceRecord> divergence_probe(const SweepConfig& cfg);
/// Same on the four-rung halving ladder from eps0.
std::vector<ConvergenceRecord> divergence_probe(const SweepConfig& cfg, double eps0);

enum class Claim { Thm1, Weak, Thm3, Thm5, Prop2, Thm2 };

/// Throws InvalidArgument for an unknown name.
Claim parse_claim(std::string_view name);
std::string_view claim_name(Claim claim);
std::vector<std::string_view> claim_names();

/// The configuration the acceptance suite runs for a claim.
SweepConfig default_config(Claim claim);

enum class CheckKind {
    Monotone,       ///< every defined ratio < 1
    FinalBelow,     ///< last value of each column < threshold
    AllBelow,       ///< every value <= threshold
    AllAbove,       ///< every value >= threshold
    FinalToFirstBelow,  ///< last / first of each column < threshold
};

std::string_view check_kind_name(CheckKind kind);

struct AcceptanceCheck {
    std::string metric;
    CheckKind kind = CheckKind::Monotone;
    double threshold = 0.0;
};

struct CheckOutcome {
    AcceptanceCheck check;
    bool pass = false;
    std::string detail;
};

/// A check on a metric with no records fails.
CheckOutcome evaluate_check(const AcceptanceCheck& check, const std::vector<ConvergenceRecord>& records);

std::vector<AcceptanceCheck> claim_checks(Claim claim, const SweepConfig& cfg);

struct ClaimRun {
    Claim claim;
    std::vector<ConvergenceRecord> records;
    std::vector<CheckOutcome> outcomes;

    bool pass() const;
};

/// Validates cfg, runs the sweep behind the claim, assigns ratios and
/// evaluates the claim's checks.
ClaimRun run_claim(Claim claim, const SweepConfig& cfg);

}  // namespace halfline
