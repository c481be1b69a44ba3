#pragma once

namespace mpems {

inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kFreeSpaceImpedance = 376.730; // ohm
inline constexpr double kPi = 3.14159265358979323846264338327950288;

inline constexpr double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad2deg(double rad) { return rad * (180.0 / kPi); }

} // namespace mpems
