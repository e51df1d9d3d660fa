#pragma once

#include <numbers>

// Unit policy: all internal computation uses angular frequencies in rad/ns.
// External I/O (configs, file formats, CLI) uses cyclic GHz and ns/ps.
// The conversion omega = 2*pi*f is applied exactly once at each boundary.

namespace rftpi {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double angular_from_cyclic(double f_ghz) { return two_pi * f_ghz; }
inline constexpr double cyclic_from_angular(double w_rad_ns) { return w_rad_ns / two_pi; }

inline constexpr double ns_from_ps(double ps) { return ps * 1e-3; }
inline constexpr double ps_from_ns(double ns) { return ns * 1e3; }

}  // namespace rftpi
