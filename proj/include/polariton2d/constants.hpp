#pragma once

namespace p2d {

/// Reduced Planck constant in eV*fs. All internal energies are eV, all
/// times fs; generators are stored in energy units so that the propagator
/// over a time t is exp(L * t / hbar).
inline constexpr double hbar_ev_fs = 0.6582119569;

/// Boltzmann constant in eV/K.
inline constexpr double k_boltzmann_ev_per_k = 8.617333262e-5;

inline constexpr double pi = 3.14159265358979323846;

inline constexpr const char* version_string = "0.1.0";

} // namespace p2d
