#pragma once

// Built-in initial data on (0,l), addressed by name:
//   zero, sin (= sin_1), sin_<k>, bump, poly, poly3, poly5.
// poly is x (l-x); poly3 and poly5 are its third and fifth powers, whose second
// derivatives also vanish at both ends. bump is exp(1 - 1/(1 - r^2)) with
// r = (2x - l) / (0.8 l), zero near the ends.

#include <string>
#include <string_view>
#include <vector>

#include "strip/spectrum.hpp"

namespace strip {

/// Throws InputError for an unknown name.
RealFunction data_function(std::string_view name, double l, double scale = 1.0);

/// Exact sine coefficients when the function is a single mode, analyze() otherwise.
SineSpectrum data_spectrum(std::string_view name, double l, std::size_t n_modes, double scale = 1.0);

std::vector<std::string> data_function_names();

}  // namespace strip
