#include "halfline/evolvers.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

using std::numbers::pi;

// FFTW's planner is not thread safe.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
struct PlanDestroy {
    void operator()(fftw_plan_s* p) const noexcept {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(p);
    }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;
using FftwPlan = std::unique_ptr<fftw_plan_s, PlanDestroy>;

FftwPlan make_plan(std::size_t n, fftw_complex* data, int sign) {
    std::lock_guard lock(planner_mutex());
    // FFTW_ESTIMATE keeps the chosen algorithm, and so the rounding, identical
    // from run to run.
    return FftwPlan(fftw_plan_dft_1d(static_cast<int>(n), data, data, sign, FFTW_ESTIMATE));
}

std::string describe(const ResolutionReport& r) {
    return "gauge wavelength " + std::to_string(r.gauge_wavelength) + " resolved by " +
           std::to_string(r.points_per_wavelength) + " points (need " +
           std::to_string(kPointsPerWavelengthMin) + ")";
}

void require_positive_drift(double b, const char* what) {
    if (!(b > 0.0)) {
        throw InvalidArgument(std::string(what) + " requires b > 0");
    }
}

// Index range [lo, hi] of nodes where |phi| is above the round-off floor.
std::pair<std::size_t, std::size_t> numerical_support(const WaveFunction& phi) {
    const double floor = 1e-16 * phi.max_abs();
    std::size_t lo = 0;
    std::size_t hi = 0;
    bool found = false;
    for (std::size_t j = 0; j < phi.size(); ++j) {
        if (std::abs(phi[j]) > floor) {
            if (!found) {
                lo = j;
                found = true;
            }
            hi = j;
        }
    }
    if (!found) {
        throw InvalidArgument("kernel_evolve: zero initial datum");
    }
    return {lo, hi};
}

struct Phasor {
    double re;
    double im;
};

inline Phasor cis(double theta) { return {std::cos(theta), std::sin(theta)}; }

constexpr std::size_t kReanchorStride = 64;
constexpr std::size_t kLanes = 4;
constexpr std::size_t kSweep = kReanchorStride * kLanes;

// Sums sum_j exp(i a d_j^2) phi_j over j in [lo, lo + count) with
// d_j = d0 + step * (j - lo). Within each block of kReanchorStride nodes the
// phase advances by z_{j+1} = z_j r_j, r_{j+1} = r_j q with
// q = exp(2 i a step^2), anchored exactly at the block start. kLanes blocks run
// side by side; phi must be zero-padded by kSweep past the range.
Phasor chirp_sum(const std::vector<Phasor>& phi, std::size_t lo, std::size_t count, double a,
                 double d0, double step) {
    const Phasor q = cis(2.0 * a * step * step);
    double acc_re[kLanes] = {};
    double acc_im[kLanes] = {};
    for (std::size_t base = 0; base < count; base += kSweep) {
        double z_re[kLanes], z_im[kLanes], r_re[kLanes], r_im[kLanes];
        for (std::size_t l = 0; l < kLanes; ++l) {
            const double d = d0 + step * static_cast<double>(base + l * kReanchorStride);
            const Phasor z = cis(a * d * d);
            const Phasor r = cis(a * (2.0 * d * step + step * step));
            z_re[l] = z.re;
            z_im[l] = z.im;
            r_re[l] = r.re;
            r_im[l] = r.im;
        }
        const Phasor* f = phi.data() + lo + base;
        for (std::size_t k = 0; k < kReanchorStride; ++k) {
            for (std::size_t l = 0; l < kLanes; ++l) {
                const Phasor v = f[l * kReanchorStride + k];
                acc_re[l] += z_re[l] * v.re - z_im[l] * v.im;
                acc_im[l] += z_re[l] * v.im + z_im[l] * v.re;
                const double zr = z_re[l] * r_re[l] - z_im[l] * r_im[l];
                z_im[l] = z_re[l] * r_im[l] + z_im[l] * r_re[l];
                z_re[l] = zr;
                const double rr = r_re[l] * q.re - r_im[l] * q.im;
                r_im[l] = r_re[l] * q.im + r_im[l] * q.re;
                r_re[l] = rr;
            }
        }
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t l = 0; l < kLanes; ++l) {
        re += acc_re[l];
        im += acc_im[l];
    }
    return {re, im};
}

}  // namespace

void EvolutionParams::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument("epsilon must be positive and finite");
    }
    if (b == 0.0 || !std::isfinite(b)) {
        throw InvalidArgument("b must be nonzero and finite");
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("t must be nonnegative and finite");
    }
}

ResolutionReport resolution_report(const Grid& grid, double epsilon, double b) {
    ResolutionReport r;
    r.spacing = grid.spacing();
    r.gauge_wavelength = 2.0 * pi * epsilon / std::abs(b);
    r.points_per_wavelength = r.gauge_wavelength / r.spacing;
    r.admissible = r.points_per_wavelength >= kPointsPerWavelengthMin;
    return r;
}

KernelResolution kernel_resolution(const WaveFunction& phi, const EvolutionParams& p) {
    const Grid& g = phi.grid();
    const auto [lo, hi] = numerical_support(phi);
    const double bt = p.b * p.t;
    const double x_min = g.node(0);
    const double x_max = g.node(g.size() - 1);
    const double y_min = g.node(lo);
    const double y_max = g.node(hi);
    // Both phase offsets are affine in (x, y); the extremes sit at the corners.
    const double d = std::max({std::abs(x_max - y_min + bt), std::abs(x_min - y_max + bt),
                               std::abs(x_max + y_max - bt), std::abs(x_min + y_min - bt)});
    KernelResolution r;
    r.min_wavelength = 4.0 * pi * p.epsilon * p.t / d;
    r.points_per_wavelength = r.min_wavelength / g.spacing();
    r.admissible = r.points_per_wavelength >= kPointsPerWavelengthMin;
    return r;
}

WaveFunction kernel_evolve(const WaveFunction& phi, const EvolutionParams& p) {
    p.validate();
    if (p.t == 0.0) {
        throw InvalidArgument("kernel_evolve: the propagator is singular at t = 0; use the identity");
    }
    require_positive_drift(p.b, "kernel_evolve");
    if (!is_boundary_compatible(phi)) {
        throw InvalidArgument("kernel_evolve: initial datum does not vanish at x = 0");
    }
    const Grid& g = phi.grid();
    if (const auto rr = resolution_report(g, p.epsilon, p.b); !rr.admissible) {
        throw ResolutionRefused("kernel_evolve: " + describe(rr));
    }
    if (const auto kr = kernel_resolution(phi, p); !kr.admissible) {
        throw ResolutionRefused("kernel_evolve: propagator wavelength " +
                                std::to_string(kr.min_wavelength) + " resolved by " +
                                std::to_string(kr.points_per_wavelength) + " points (need " +
                                std::to_string(kPointsPerWavelengthMin) + ")");
    }

    const auto [lo, hi] = numerical_support(phi);
    const std::size_t count = hi - lo + 1;
    std::vector<Phasor> src(phi.size() + kSweep, Phasor{0.0, 0.0});
    for (std::size_t j = lo; j <= hi; ++j) {
        src[j] = {phi[j].real(), phi[j].imag()};
    }

    const double h = g.spacing();
    const double a = 1.0 / (4.0 * p.epsilon * p.t);
    const double bt = p.b * p.t;
    const double y_lo = g.node(lo);
    const cplx prefactor = std::polar(1.0, -pi / 4.0) / std::sqrt(4.0 * pi * p.epsilon * p.t) * h;

    WaveFunction out(g);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const double x = g.node(i);
            const Phasor direct = chirp_sum(src, lo, count, a, x - y_lo + bt, -h);
            const Phasor image = chirp_sum(src, lo, count, a, x + y_lo - bt, h);
            const cplx gauge = std::polar(1.0, p.b * x / p.epsilon);
            out[i] = prefactor * (cplx{direct.re, direct.im} - gauge * cplx{image.re, image.im});
        }
    };

    // Each output node is an independent, fixed-order sum, so the split does
    // not affect the result.
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 64);
    if (workers == 1) {
        work(0, g.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (g.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(g.size(), begin + chunk);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
    }
    return out;
}

WaveFunction spectral_evolve(const WaveFunction& phi, const EvolutionParams& p,
                             const SpectralOptions& options) {
    p.validate();
    const Grid& g = phi.grid();
    if (options.apply_gauge) {
        if (const auto rr = resolution_report(g, p.epsilon, p.b); !rr.admissible) {
            throw ResolutionRefused("spectral_evolve: " + describe(rr));
        }
    }
    if (p.t == 0.0) {
        return phi;
    }

    const std::size_t n = g.size();
    const std::size_t m = 2 * n;
    const double k_gauge = options.apply_gauge ? p.b / (2.0 * p.epsilon) : 0.0;

    // ext[n + j] holds x_j, ext[n - 1 - j] holds -x_j.
    FftwBuffer buf(fftw_alloc_complex(m));
    auto* ext = reinterpret_cast<cplx*>(buf.get());
    for (std::size_t j = 0; j < n; ++j) {
        const cplx v = std::polar(1.0, -k_gauge * g.node(j)) * phi[j];
        ext[n + j] = v;
        ext[n - 1 - j] = -v;
    }

    const FftwPlan forward = make_plan(m, buf.get(), FFTW_FORWARD);
    const FftwPlan backward = make_plan(m, buf.get(), FFTW_BACKWARD);
    fftw_execute(forward.get());

    const double dxi = pi / g.length();
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double mode = k < n ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(m);
        const double xi = mode * dxi;
        ext[k] *= std::polar(inv_m, -p.epsilon * xi * xi * p.t);
    }
    fftw_execute(backward.get());

    WaveFunction out(g);
    const double phase0 = options.apply_gauge ? p.b * p.b * p.t / (4.0 * p.epsilon) : 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out[j] = std::polar(1.0, phase0 + k_gauge * g.node(j)) * ext[n + j];
    }
    return out;
}

AsymptoticParts asymptotic_parts(const WaveFunction& phi, const EvolutionParams& p) {
    p.validate();
    require_positive_drift(p.b, "asymptotic_evolve");
    const double bt = p.b * p.t;
    return {shift_sample(phi, bt), modulate(reflect_sample(phi, bt), p.b / p.epsilon)};
}

WaveFunction asymptotic_evolve(const WaveFunction& phi, const EvolutionParams& p) {
    auto parts = asymptotic_parts(phi, p);
    return parts.transmitted -= parts.reflected;
}

double remainder_norm(const WaveFunction& phi, const EvolutionParams& p) {
    require_positive_drift(p.b, "remainder_norm");
    return distance(spectral_evolve(phi, p), asymptotic_evolve(phi, p));
}

WaveFunction limit_group_V(const WaveFunction& phi, double b, double t) {
    if (!std::isfinite(b) || !std::isfinite(t)) {
        throw InvalidArgument("limit_group_V: non-finite arguments");
    }
    return shift_sample(phi, b * t);
}

}  // namespace halfline
