// Quintic smoothstep shared by the anisotropy cutoff and the truncation psi:
// s(0)=0, s(1)=1, with vanishing first and second derivatives at both ends.
#pragma once

#include <algorithm>

namespace spinwell::detail {

// Capped at 1: the polynomial can round a few ulps past it near t = 1, and
// the callers build complementary profiles 1 - s that must not go negative.
inline double smooth_s(double t) {
    return std::min(1.0, t * t * t * (10.0 + t * (-15.0 + 6.0 * t)));
}

inline double smooth_ds(double t) {
    const double u = t * (1.0 - t);
    return 30.0 * u * u;
}

inline double smooth_d2s(double t) { return 60.0 * t * (2.0 * t - 1.0) * (t - 1.0); }

} // namespace spinwell::detail
