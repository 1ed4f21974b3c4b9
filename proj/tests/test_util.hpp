#pragma once

#include <cmath>
#include <vector>

#include "tracklet/rng.hpp"
#include "tracklet/types.hpp"

namespace tracklet::testutil {

// Smooth random polyline: a random low-frequency trig curve sampled at n
// points, so consecutive points never coincide.
inline Streamline random_polyline(Rng& rng, int n, double scale = 30.0) {
    const double fx = 0.5 + rng.unit(), fy = 0.5 + rng.unit(), fz = 0.5 + rng.unit();
    const double px = rng.unit() * 6.28, py = rng.unit() * 6.28, pz = rng.unit() * 6.28;
    const Vec3 dir{1.0 + rng.unit(), rng.unit() - 0.5, rng.unit() - 0.5};
    Streamline s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n - 1);
        s[static_cast<std::size_t>(i)] = {
            dir.x * scale * u + 0.2 * scale * std::sin(fx * 6.28 * u + px),
            dir.y * scale * u + 0.2 * scale * std::sin(fy * 6.28 * u + py),
            dir.z * scale * u + 0.2 * scale * std::sin(fz * 6.28 * u + pz)};
    }
    return s;
}

inline std::vector<Vec3> random_points(Rng& rng, int n, double scale = 10.0) {
    std::vector<Vec3> p(static_cast<std::size_t>(n));
    for (auto& q : p) q = {scale * (rng.unit() - 0.5), scale * (rng.unit() - 0.5), scale * (rng.unit() - 0.5)};
    return p;
}

inline Streamline reversed(const Streamline& s) { return Streamline(s.rbegin(), s.rend()); }

}  // namespace tracklet::testutil
