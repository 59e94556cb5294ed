#pragma once

namespace casimir::constants {

// CODATA 2018 exact / recommended values.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double c = 299792458.0;               // m / s
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double eV_to_rad_per_s = elementary_charge / hbar;
inline constexpr double pi = 3.14159265358979323846;

inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;

}  // namespace casimir::constants
