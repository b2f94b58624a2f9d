#pragma once

#include <numbers>

// Gaussian (CGS) units throughout: cm, s, erg.
namespace nfd::constants {

inline constexpr double pi = std::numbers::pi;

/// Speed of light, cm/s.
inline constexpr double c = 2.99792458e10;
/// Reduced Planck constant, erg s.
inline constexpr double hbar = 1.054571817e-27;
/// Boltzmann constant, erg/K.
inline constexpr double k_B = 1.380649e-16;
/// Fine structure constant e^2/(hbar c).
inline constexpr double alpha = 1.0 / 137.035999084;
/// Electron charge squared, erg cm.
inline constexpr double e2 = alpha * hbar * c;

/// 1 (Ohm cm)^-1 expressed in s^-1.
inline constexpr double siemens_per_cm = 9.0e11;

} // namespace nfd::constants
