#pragma once

#include <span>

namespace sidechan {

// Neumaier-compensated summation. Grid integrals and correlation energies
// feed tolerances as tight as 1e-12, where naive accumulation over a few
// thousand bins already loses too much.
double compensated_sum(std::span<const double> values);
double compensated_dot(std::span<const double> a, std::span<const double> b);

}  // namespace sidechan
