#pragma once

#include <functional>
#include <string_view>

// Adaptive Gauss-Kronrod quadrature of the analytic presets. Shared by the unit
// and acceptance tests; deliberately independent of the grid quadrature and of
// the preset code (the shapes are restated here and normalized numerically).
namespace oracle {

double integrate(const std::function<double(double)>& f, double a, double b);

// Unnormalized shape of a built-in preset ("xexp", "bump12", "bump23").
double shape(std::string_view preset, double x);

// Normalizing constant c with int_0^inf (c shape)^2 = 1.
double normalization(std::string_view preset);

// int_a^b |phi|^2 for the normalized preset; b may exceed the support.
double mass(std::string_view preset, double a, double b);

// alpha(t) = int_{bt}^inf |phi|^2.
double alpha(std::string_view preset, double b, double t);

}  // namespace oracle
