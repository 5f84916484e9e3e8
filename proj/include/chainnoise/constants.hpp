#pragma once

namespace chainnoise::constants {

// SI defining constants (exact since the 2019 redefinition).
inline constexpr double planck_h = 6.62607015e-34;          // J s
inline constexpr double boltzmann_k = 1.380649e-23;         // J/K
inline constexpr double electron_charge = 1.602176634e-19;  // C

// h / (2 pi), CODATA.
inline constexpr double hbar = 1.054571817e-34;  // J s

// Vacuum noise of a single mode, in photon-number units.
inline constexpr double vacuum_quanta = 0.5;

}  // namespace chainnoise::constants
