#pragma once

#include <numbers>

namespace cvswap::optomech {

inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;   // J / K
inline constexpr double kSpeedOfLight = 2.99792458e8;  // m / s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace cvswap::optomech
