#pragma once

#include <optional>
#include <vector>

#include "halfline/grid.hpp"

namespace halfline {

/// Below this weight the normal part of a state is treated as absent.
inline constexpr double kAlphaFloor = 1e-12;
/// Cumulative |phi|^2 mass that marks the start of the numerical support.
inline constexpr double kMassFloor = 1e-12;
/// Inputs to the state maps are unit vectors up to this tolerance.
inline constexpr double kUnitNormTol = 1e-6;

/// Mixed state produced by the two-term Kraus channel. Branch vectors are
/// unnormalized; ||branch||^2 is the branch probability.
struct KrausBranchState {
    std::vector<WaveFunction> branches;

    std::vector<double> probabilities() const;
    double total_probability() const;
};

/// State on compact-plus-identity observables: alpha * rho_Phi + (1 - alpha) J.
/// J annihilates every compact operator and has no density operator, so only
/// its weight is kept.
struct CompAlgebraState {
    double alpha = 0.0;
    std::optional<WaveFunction> normal_part;  ///< unit vector Phi, present iff alpha > 0
    double singular_weight = 1.0;             ///< 1 - alpha
};

/// Node partition at x = b t. The shift (one-sided) part owns x_j <= b t, the
/// unitary part owns x_j > b t.
class WoldProjectors {
public:
    WoldProjectors(const Grid& grid, double b, double t);

    double t() const noexcept { return t_; }
    double edge() const noexcept { return edge_; }
    WaveFunction unitary(const WaveFunction& u) const;
    WaveFunction shift(const WaveFunction& u) const;

private:
    Grid grid_;
    double t_;
    double edge_;
};

/// V_t u(x) = u(x + b t).
WaveFunction shift_V(const WaveFunction& phi, double b, double t);
/// W_t u(x) = u(b t - x) on [0, b t], zero beyond.
WaveFunction reflect_W(const WaveFunction& phi, double b, double t);

/// [V_t phi, W_t phi] for a unit vector phi.
KrausBranchState kraus_apply(const WaveFunction& phi, double b, double t);

/// (V_t phi, f V_t phi) + (W_t phi, f W_t phi): the eps -> 0 limit of the
/// expectation of the multiplication operator by f.
cplx mult_expectation_limit(const WaveFunction& phi, const BoundedFunction& f, double b, double t);

/// Limit state of rho_phi on the compact-plus-identity algebra at time t.
/// phi is normalized before use; alpha = ||V_t phi||^2.
CompAlgebraState comp_state_evolve(const WaveFunction& phi, double b, double t);

/// Destruction time of the pure state: (start of numerical support) / b, the
/// start being the first node where the cumulative mass exceeds kMassFloor.
double destruction_time(const WaveFunction& phi, double b);

WoldProjectors wold_projectors(double b, double t, const Grid& grid);

/// |alpha(t+tau) - alpha(tau) alpha(t; Phi(tau))| + ||Phi(t+tau) - Phi(t; Phi(tau))||.
/// Zero exactly at tau = 0. When exactly one side has lost its normal part the
/// vector term counts as 1.
double comp_semigroup_check(const WaveFunction& phi, double b, double t, double tau);

/// ||V_t V_tau phi - V_{t+tau} phi||.
double shift_semigroup_defect(const WaveFunction& phi, double b, double t, double tau);
/// ||W_t W_tau phi - W_{t+tau} phi||; generically far from zero.
double reflect_semigroup_defect(const WaveFunction& phi, double b, double t, double tau);

}  // namespace halfline
