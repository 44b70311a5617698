#include "halfline/presets.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "halfline/errors.hpp"

namespace halfline {

namespace {

Preset half_sine_arch(std::string name, double start) {
    return Preset{std::move(name),
                  [start](double x) {
                      const double s = x - start;
                      if (s <= 0.0 || s >= 1.0) {
                          return 0.0;
                      }
                      return std::numbers::sqrt2 * std::sin(std::numbers::pi * s);
                  },
                  start};
}

}  // namespace

Preset find_preset(std::string_view name, double domain_length) {
    using std::numbers::pi;
    if (name == "xexp") {
        const double c = std::sqrt(8.0 * std::numbers::sqrt2 / std::sqrt(pi));
        return Preset{"xexp", [c](double x) { return c * x * std::exp(-x * x); }, 0.0};
    }
    if (name == "bump12") {
        return half_sine_arch("bump12", 1.0);
    }
    if (name == "bump23") {
        return half_sine_arch("bump23", 2.0);
    }
    constexpr std::string_view mode_prefix = "sine-mode-";
    if (name.starts_with(mode_prefix)) {
        const auto digits = name.substr(mode_prefix.size());
        int k = 0;
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec != std::errc{} || end != digits.data() + digits.size() || k < 1) {
            throw InvalidArgument("bad sine-mode index in preset '" + std::string(name) + "'");
        }
        if (!(domain_length > 0.0)) {
            throw InvalidArgument("sine-mode preset needs a positive domain length");
        }
        const double amp = std::sqrt(2.0 / domain_length);
        const double wavenumber = k * pi / domain_length;
        return Preset{std::string(name),
                      [amp, wavenumber](double x) { return amp * std::sin(wavenumber * x); }, 0.0};
    }
    throw InvalidArgument("unknown preset '" + std::string(name) + "'");
}

WaveFunction make_preset(std::string_view name, const Grid& grid) {
    const Preset p = find_preset(name, grid.length());
    return WaveFunction::sample(grid, [&](double x) { return cplx{p.profile(x), 0.0}; });
}

std::vector<std::string> preset_names() { return {"xexp", "bump12", "bump23", "sine-mode-<k>"}; }

}  // namespace halfline
