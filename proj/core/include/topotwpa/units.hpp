#pragma once

#include <cmath>
#include <numbers>

namespace topotwpa {

// CODATA 2018 (exact SI values for h and e).
namespace constants {
inline constexpr double h = 6.62607015e-34;
inline constexpr double hbar = h / (2.0 * std::numbers::pi);
inline constexpr double e = 1.602176634e-19;
/// Reduced flux quantum hbar / 2e.
inline constexpr double flux_quantum = hbar / (2.0 * e);
}  // namespace constants

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Angular frequency (rad/s) of an ordinary frequency given in Hz.
constexpr double angular(double hertz) { return two_pi * hertz; }
/// Ordinary frequency (Hz) of an angular frequency (rad/s).
constexpr double ordinary(double rad_per_s) { return rad_per_s / two_pi; }

inline double to_db(double power_ratio) { return 10.0 * std::log10(power_ratio); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

/// Power in watts of a level given in dBm.
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

}  // namespace topotwpa
