#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "halfline/grid.hpp"

namespace halfline {

/// Closed-form initial datum on the half-line. Every built-in vanishes at
/// x = 0 and has unit L2 norm on (0, inf).
struct Preset {
    std::string name;
    std::function<double(double)> profile;
    /// Essential infimum of the support (0 when the support reaches the origin).
    double support_start;
};

/// Built-ins:
///   "xexp"        c x exp(-x^2), c = (8 sqrt(2) / sqrt(pi))^(1/2)
///   "bump12"      sqrt(2) sin(pi (x - 1)) on [1, 2], zero elsewhere
///   "bump23"      sqrt(2) sin(pi (x - 2)) on [2, 3], zero elsewhere
///   "sine-mode-k" sqrt(2/L) sin(k pi x / L), needs the domain length L
/// Throws InvalidArgument for unknown names.
Preset find_preset(std::string_view name, double domain_length);

/// Samples the preset on the grid.
WaveFunction make_preset(std::string_view name, const Grid& grid);

std::vector<std::string> preset_names();

}  // namespace halfline
