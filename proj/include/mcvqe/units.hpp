#pragma once

namespace mcvqe::units {

// CODATA 2018
inline constexpr double kHartreeToEv = 27.211386245988;

inline constexpr double hartree_to_ev(double e) { return e * kHartreeToEv; }
inline constexpr double ev_to_hartree(double e) { return e / kHartreeToEv; }

}  // namespace mcvqe::units
