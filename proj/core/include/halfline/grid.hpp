#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace halfline {

using cplx = std::complex<double>;

/// Uniform midpoint discretization of the truncated half-line [0, L].
///
/// Node j sits at x_j = (j + 1/2) h with h = L / N, so no node lies on the
/// Dirichlet boundary x = 0 and the odd extension about 0 maps nodes onto
/// nodes. N is a power of two so the doubled (odd-extended) grid feeds a
/// radix-2 transform.
class Grid {
public:
    /// Throws InvalidArgument unless L > 0 and N >= 8 is a power of two.
    static Grid make(double length, std::size_t points);

    double length() const noexcept { return length_; }
    std::size_t size() const noexcept { return points_; }
    double spacing() const noexcept { return spacing_; }
    double node(std::size_t j) const noexcept {
        return (static_cast<double>(j) + 0.5) * spacing_;
    }
    std::vector<double> nodes() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Grid(double length, std::size_t points)
        : length_(length), points_(points), spacing_(length / static_cast<double>(points)) {}

    double length_;
    std::size_t points_;
    double spacing_;
};

/// Sampled complex amplitude u(x_j) on a Grid.
class WaveFunction {
public:
    explicit WaveFunction(const Grid& grid);
    WaveFunction(const Grid& grid, std::vector<cplx> amplitudes);

    /// Samples f at every node.
    static WaveFunction sample(const Grid& grid, const std::function<cplx(double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return amps_.size(); }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    std::span<cplx> amplitudes() noexcept { return amps_; }
    const cplx& operator[](std::size_t j) const noexcept { return amps_[j]; }
    cplx& operator[](std::size_t j) noexcept { return amps_[j]; }

    double max_abs() const noexcept;

    WaveFunction& operator+=(const WaveFunction& rhs);
    WaveFunction& operator-=(const WaveFunction& rhs);
    WaveFunction& operator*=(cplx scale) noexcept;

    friend WaveFunction operator+(WaveFunction lhs, const WaveFunction& rhs) { return lhs += rhs; }
    friend WaveFunction operator-(WaveFunction lhs, const WaveFunction& rhs) { return lhs -= rhs; }
    friend WaveFunction operator*(cplx s, WaveFunction u) { return u *= s; }

private:
    Grid grid_;
    std::vector<cplx> amps_;
};

/// Sampled essentially bounded function f(x_j) with its bound M >= max |f|.
class BoundedFunction {
public:
    BoundedFunction(const Grid& grid, std::vector<cplx> values);
    static BoundedFunction sample(const Grid& grid, const std::function<cplx(double)>& f);
    static BoundedFunction constant(const Grid& grid, cplx value);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const cplx> values() const noexcept { return values_; }
    double bound() const noexcept { return bound_; }
    /// True when every sample is real and nonnegative.
    bool is_nonnegative() const noexcept;

private:
    Grid grid_;
    std::vector<cplx> values_;
    double bound_;
};

/// Midpoint-rule inner product h * sum conj(u_j) v_j, antilinear in u.
cplx inner(const WaveFunction& u, const WaveFunction& v);
double norm_squared(const WaveFunction& u);
double norm(const WaveFunction& u);
double distance(const WaveFunction& u, const WaveFunction& v);

/// out(x_j) = u(x_j + s), linearly interpolated, zero outside [0, L].
WaveFunction shift_sample(const WaveFunction& u, double s);
/// out(x_j) = u(c - x_j), linearly interpolated, zero outside [0, L].
WaveFunction reflect_sample(const WaveFunction& u, double c);
/// Keeps nodes with a <= x_j <= b and zeroes the rest. Throws if a > b.
WaveFunction indicator_project(const WaveFunction& u, double a, double b);

/// Pointwise product f * u.
WaveFunction multiply(const BoundedFunction& f, const WaveFunction& u);
/// Pointwise product exp(i k x_j) * u.
WaveFunction modulate(const WaveFunction& u, double wavenumber);

/// Value at x = 0 extrapolated from the first three nodes (exact for
/// quadratics). The midpoint grid has no node on the boundary, so this is the
/// discrete reading of u(+0).
cplx boundary_value(const WaveFunction& u);

inline constexpr double kDefaultBoundaryTol = 1e-8;

/// |boundary_value(u)| <= tol * max|u|; the zero function is compatible.
bool is_boundary_compatible(const WaveFunction& u, double tol = kDefaultBoundaryTol);

}  // namespace halfline
