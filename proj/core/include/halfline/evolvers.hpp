#pragma once

#include "halfline/grid.hpp"

namespace halfline {

/// Parameters of the regularized Hamiltonian H_eps = -eps d^2/dx^2 + i b d/dx
/// and the evolution time.
struct EvolutionParams {
    double epsilon = 0.1;
    double b = 1.0;
    double t = 0.0;

    /// Throws InvalidArgument unless epsilon > 0, b != 0 and t >= 0, all finite.
    void validate() const;
};

/// Minimum samples per oscillation wavelength for any oscillatory factor the
/// engines have to represent on the grid.
inline constexpr double kPointsPerWavelengthMin = 8.0;

/// How well the grid resolves the exp(i b x / eps) oscillation.
struct ResolutionReport {
    double spacing = 0.0;
    double gauge_wavelength = 0.0;  ///< 2 pi eps / |b|
    double points_per_wavelength = 0.0;
    bool admissible = false;
};

ResolutionReport resolution_report(const Grid& grid, double epsilon, double b);

/// Resolution of the oscillatory propagator phase (x -+ y +- b t)^2 / (4 eps t)
/// over the output grid and the numerical support of phi.
struct KernelResolution {
    double min_wavelength = 0.0;  ///< 4 pi eps t / max|x -+ y +- b t|
    double points_per_wavelength = 0.0;
    bool admissible = false;
};

KernelResolution kernel_resolution(const WaveFunction& phi, const EvolutionParams& p);

/// Direct midpoint-rule summation of the two-term half-line propagator
///   u(t,x) = e^{-i pi/4} / sqrt(4 pi eps t) * int_0^inf [ e^{i (x-y+bt)^2/(4 eps t)}
///            - e^{i (x+y-bt)^2/(4 eps t)} e^{i b x/eps} ] phi(y) dy.
///
/// O(N * support) work; the propagator phases are advanced by a second-order
/// multiplicative recurrence and re-anchored every few dozen nodes. Source
/// nodes where |phi| is below 1e-16 max|phi| are skipped.
///
/// Requires t > 0, b > 0, boundary-compatible phi and an admissible grid for
/// both the propagator phase and the gauge wavelength; throws InvalidArgument
/// or ResolutionRefused otherwise.
WaveFunction kernel_evolve(const WaveFunction& phi, const EvolutionParams& p);

struct SpectralOptions {
    /// Test hook: when false the gauge multiplications are skipped and the
    /// engine reduces to the free Dirichlet propagator exp(i eps t d^2/dx^2).
    bool apply_gauge = true;
};

/// Gauge transform to the free particle, odd extension to [-L, L], exact
/// Fourier multiplier exp(-i eps xi^2 t), restriction and inverse gauge.
/// Handles any sign of b and t = 0. Throws ResolutionRefused when the gauge
/// wavelength is under-resolved.
WaveFunction spectral_evolve(const WaveFunction& phi, const EvolutionParams& p,
                             const SpectralOptions& options = {});

/// The two branches of the closed-form eps -> 0 approximation.
struct AsymptoticParts {
    WaveFunction transmitted;  ///< phi(x + b t)
    WaveFunction reflected;    ///< theta(b t - x) phi(b t - x) e^{i b x / eps}
};

AsymptoticParts asymptotic_parts(const WaveFunction& phi, const EvolutionParams& p);

/// transmitted - reflected. Exact pointwise (no PDE solve); callers that care
/// about the e^{i b x/eps} resolution should consult resolution_report.
WaveFunction asymptotic_evolve(const WaveFunction& phi, const EvolutionParams& p);

/// || spectral_evolve - asymptotic_evolve ||. Requires b > 0.
double remainder_norm(const WaveFunction& phi, const EvolutionParams& p);

/// Limit evolution V_b(t) phi = phi(x + b t) with zero fill. For b < 0 this is
/// the isometric right shift, for b > 0 the contraction exp(-i t H*).
WaveFunction limit_group_V(const WaveFunction& phi, double b, double t);

}  // namespace halfline
