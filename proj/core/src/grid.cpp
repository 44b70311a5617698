#include "halfline/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) {
        throw InvalidArgument(std::string(what) + ": grid mismatch");
    }
}

// Reads the sampled function at fractional index p (node j <-> p = j). The
// samples own the cells [j h, (j+1) h], so the half cells next to 0 and L take
// the nearest node value and everything outside [0, L] is zero.
cplx sample_at(std::span<const cplx> u, double p) {
    const auto n = static_cast<double>(u.size());
    if (!(p >= -0.5 && p <= n - 0.5)) {
        return {0.0, 0.0};
    }
    if (p <= 0.0) {
        return u.front();
    }
    if (p >= n - 1.0) {
        return u.back();
    }
    const double base = std::floor(p);
    const auto i = static_cast<std::size_t>(base);
    const double frac = p - base;
    if (frac == 0.0) {
        return u[i];
    }
    return u[i] * (1.0 - frac) + u[i + 1] * frac;
}

double max_abs_of(std::span<const cplx> values) {
    double m = 0.0;
    for (const auto& v : values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

}  // namespace

Grid Grid::make(double length, std::size_t points) {
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw InvalidArgument("grid length must be positive and finite");
    }
    if (points < 8) {
        throw InvalidArgument("grid needs at least 8 points");
    }
    if (!std::has_single_bit(points)) {
        throw InvalidArgument("grid point count " + std::to_string(points) + " is not a power of two");
    }
    return Grid(length, points);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> x(points_);
    for (std::size_t j = 0; j < points_; ++j) {
        x[j] = node(j);
    }
    return x;
}

WaveFunction::WaveFunction(const Grid& grid) : grid_(grid), amps_(grid.size()) {}

WaveFunction::WaveFunction(const Grid& grid, std::vector<cplx> amplitudes)
    : grid_(grid), amps_(std::move(amplitudes)) {
    if (amps_.size() != grid_.size()) {
        throw InvalidArgument("amplitude count does not match grid size");
    }
}

WaveFunction WaveFunction::sample(const Grid& grid, const std::function<cplx(double)>& f) {
    WaveFunction u(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        u.amps_[j] = f(grid.node(j));
    }
    return u;
}

double WaveFunction::max_abs() const noexcept { return max_abs_of(amps_); }

WaveFunction& WaveFunction::operator+=(const WaveFunction& rhs) {
    require_same_grid(grid_, rhs.grid_, "operator+=");
    for (std::size_t j = 0; j < amps_.size(); ++j) {
        amps_[j] += rhs.amps_[j];
    }
    return *this;
}

WaveFunction& WaveFunction::operator-=(const WaveFunction& rhs) {
    require_same_grid(grid_, rhs.grid_, "operator-=");
    for (std::size_t j = 0; j < amps_.size(); ++j) {
        amps_[j] -= rhs.amps_[j];
    }
    return *this;
}

WaveFunction& WaveFunction::operator*=(cplx scale) noexcept {
    for (auto& a : amps_) {
        a *= scale;
    }
    return *this;
}

BoundedFunction::BoundedFunction(const Grid& grid, std::vector<cplx> values)
    : grid_(grid), values_(std::move(values)), bound_(0.0) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("value count does not match grid size");
    }
    bound_ = max_abs_of(values_);
    if (!std::isfinite(bound_)) {
        throw InvalidArgument("bounded function has non-finite samples");
    }
}

BoundedFunction BoundedFunction::sample(const Grid& grid, const std::function<cplx(double)>& f) {
    std::vector<cplx> v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        v[j] = f(grid.node(j));
    }
    return BoundedFunction(grid, std::move(v));
}

BoundedFunction BoundedFunction::constant(const Grid& grid, cplx value) {
    return BoundedFunction(grid, std::vector<cplx>(grid.size(), value));
}

bool BoundedFunction::is_nonnegative() const noexcept {
    return std::all_of(values_.begin(), values_.end(),
                       [](const cplx& v) { return v.imag() == 0.0 && v.real() >= 0.0; });
}

cplx inner(const WaveFunction& u, const WaveFunction& v) {
    require_same_grid(u.grid(), v.grid(), "inner");
    cplx acc{0.0, 0.0};
    const auto a = u.amplitudes();
    const auto b = v.amplitudes();
    for (std::size_t j = 0; j < a.size(); ++j) {
        acc += std::conj(a[j]) * b[j];
    }
    return acc * u.grid().spacing();
}

double norm_squared(const WaveFunction& u) {
    double acc = 0.0;
    for (const auto& a : u.amplitudes()) {
        acc += std::norm(a);
    }
    return acc * u.grid().spacing();
}

double norm(const WaveFunction& u) { return std::sqrt(norm_squared(u)); }

double distance(const WaveFunction& u, const WaveFunction& v) {
    require_same_grid(u.grid(), v.grid(), "distance");
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        acc += std::norm(u[j] - v[j]);
    }
    return std::sqrt(acc * u.grid().spacing());
}

WaveFunction shift_sample(const WaveFunction& u, double s) {
    const Grid& g = u.grid();
    WaveFunction out(g);
    if (!std::isfinite(s)) {
        throw InvalidArgument("shift must be finite");
    }
    const double offset = s / g.spacing();
    const auto src = u.amplitudes();
    for (std::size_t j = 0; j < g.size(); ++j) {
        out[j] = sample_at(src, static_cast<double>(j) + offset);
    }
    return out;
}

WaveFunction reflect_sample(const WaveFunction& u, double c) {
    const Grid& g = u.grid();
    WaveFunction out(g);
    if (!std::isfinite(c)) {
        throw InvalidArgument("reflection point must be finite");
    }
    // c - x_j in index units: c/h - 1/2 - (j + 1/2).
    const double pivot = c / g.spacing() - 1.0;
    const auto src = u.amplitudes();
    for (std::size_t j = 0; j < g.size(); ++j) {
        out[j] = sample_at(src, pivot - static_cast<double>(j));
    }
    return out;
}

WaveFunction indicator_project(const WaveFunction& u, double a, double b) {
    if (a > b) {
        throw InvalidArgument("indicator_project: lower edge exceeds upper edge");
    }
    const Grid& g = u.grid();
    WaveFunction out(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.node(j);
        if (a <= x && x <= b) {
            out[j] = u[j];
        }
    }
    return out;
}

WaveFunction multiply(const BoundedFunction& f, const WaveFunction& u) {
    require_same_grid(f.grid(), u.grid(), "multiply");
    WaveFunction out(u.grid());
    const auto fv = f.values();
    for (std::size_t j = 0; j < u.size(); ++j) {
        out[j] = fv[j] * u[j];
    }
    return out;
}

WaveFunction modulate(const WaveFunction& u, double wavenumber) {
    const Grid& g = u.grid();
    WaveFunction out(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        out[j] = std::polar(1.0, wavenumber * g.node(j)) * u[j];
    }
    return out;
}

cplx boundary_value(const WaveFunction& u) {
    // Lagrange weights for nodes h/2, 3h/2, 5h/2 evaluated at 0.
    return (15.0 * u[0] - 10.0 * u[1] + 3.0 * u[2]) / 8.0;
}

bool is_boundary_compatible(const WaveFunction& u, double tol) {
    const double scale = u.max_abs();
    if (scale == 0.0) {
        return true;
    }
    return std::abs(boundary_value(u)) <= tol * scale;
}

}  // namespace halfline
