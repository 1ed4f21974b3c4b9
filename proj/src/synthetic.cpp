#include <cmath>
#include <cstdio>

#include "tracklet/rng.hpp"
#include "tracklet/streamline_io.hpp"

namespace tracklet {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Base bundle families, parameterized over u in [0,1], roughly 80 mm long,
// centered near the origin. `a` and `b` are per-streamline shape jitters.
Vec3 family_point(int family, double u, double a, double b) {
    switch (family) {
        case 0:  // straight fan: direction tilted by (a, b)
            return {80.0 * u - 40.0, 80.0 * u * std::tan(a), 80.0 * u * std::tan(b)};
        case 1: {  // planar C-arc, radius jittered by a, tilt by b
            const double r = 40.0 + 8.0 * a;
            const double ang = (u - 0.5) * 2.8;
            return {r * (std::cos(ang) - 1.0), r * std::sin(ang), 10.0 * b * u};
        }
        case 2:  // S-curve
            return {80.0 * u - 40.0, (15.0 + 5.0 * a) * std::sin(2.0 * kPi * u),
                    5.0 * b * std::cos(2.0 * kPi * u)};
        default: {  // helix
            const double phase = 0.8 * a;
            return {20.0 * std::cos(4.0 * kPi * u + phase), 20.0 * std::sin(4.0 * kPi * u + phase),
                    60.0 * u - 30.0 + 5.0 * b};
        }
    }
}

// Classes sit on a coarse lattice so inter-class MDF stays far above the
// widest clustering threshold.
Vec3 class_anchor(int c) {
    return {200.0 * (c % 3) - 200.0, 200.0 * ((c / 3) % 3) - 200.0, 150.0 * (c / 9)};
}

}  // namespace

Tractogram generate_synthetic_subject(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(mix_seed(spec.seed, 0x747261636bULL));

    Tractogram t;
    t.voxel_size = {1.0, 1.0, 1.0};
    t.streamlines.reserve(static_cast<std::size_t>(spec.n_classes) *
                          static_cast<std::size_t>(spec.streamlines_per_class));

    for (int c = 0; c < spec.n_classes; ++c) {
        const Vec3 anchor = class_anchor(c);
        const int family = c % 4;
        // Classes beyond the four base shapes are affine-jittered copies.
        const double yaw = 0.45 * static_cast<double>(c / 4);
        const double cs = std::cos(yaw), sn = std::sin(yaw);
        const double scale = 1.0 + 0.06 * static_cast<double>((c / 4) % 3);

        for (int k = 0; k < spec.streamlines_per_class; ++k) {
            const int npts = rng.range_int(20, 120);
            const double a = 2.0 * rng.unit() - 1.0;
            const double b = 2.0 * rng.unit() - 1.0;
            const Vec3 jitter{10.0 * rng.unit() - 5.0, 10.0 * rng.unit() - 5.0,
                              10.0 * rng.unit() - 5.0};

            Streamline s(static_cast<std::size_t>(npts));
            for (int i = 0; i < npts; ++i) {
                const double u = static_cast<double>(i) / static_cast<double>(npts - 1);
                Vec3 p = family_point(family, u, family == 0 ? 0.25 * a : a, family == 0 ? 0.1 * b : b);
                p = {scale * (cs * p.x - sn * p.y), scale * (sn * p.x + cs * p.y), scale * p.z};
                p += anchor + jitter;
                if (spec.noise_sigma > 0.0) {
                    p.x += rng.normal(0.0, spec.noise_sigma);
                    p.y += rng.normal(0.0, spec.noise_sigma);
                    p.z += rng.normal(0.0, spec.noise_sigma);
                }
                s[static_cast<std::size_t>(i)] = p;
            }
            t.streamlines.push_back(std::move(s));
            t.labels.push_back(c);
        }
    }

    t.class_names.resize(static_cast<std::size_t>(spec.n_classes));
    for (int c = 0; c < spec.n_classes; ++c) {
        char name[16];
        std::snprintf(name, sizeof(name), "bundle_%02d", c);
        t.class_names[static_cast<std::size_t>(c)] = name;
    }

    t.recompute_bounds();
    return t;
}

}  // namespace tracklet
