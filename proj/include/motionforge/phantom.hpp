#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "motionforge/errors.hpp"
#include "motionforge/rng.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

namespace detail {

struct Ellipsoid {
    std::array<double, 3> center{};
    std::array<double, 3> semi{};
    float intensity = 0.0f;

    bool contains(double x, double y, double z) const {
        const double dx = (x - center[0]) / semi[0];
        const double dy = (y - center[1]) / semi[1];
        const double dz = (z - center[2]) / semi[2];
        return dx * dx + dy * dy + dz * dz <= 1.0;
    }
};

// separable [1 2 1]/4 smoothing along one axis, replicate edges
inline void smooth_axis(Volume3D& vol, int axis) {
    const Volume3D src = vol;
    int coord[3];
    for (int z = 0; z < vol.nz; ++z) {
        for (int y = 0; y < vol.ny; ++y) {
            for (int x = 0; x < vol.nx; ++x) {
                coord[0] = x;
                coord[1] = y;
                coord[2] = z;
                const int n = src.dim(axis);
                const int c = coord[axis];
                int lo[3] = {coord[0], coord[1], coord[2]};
                int hi[3] = {coord[0], coord[1], coord[2]};
                lo[axis] = std::max(c - 1, 0);
                hi[axis] = std::min(c + 1, n - 1);
                const float v = 0.25f * src.at(lo[0], lo[1], lo[2]) + 0.5f * src.at(x, y, z) +
                                0.25f * src.at(hi[0], hi[1], hi[2]);
                vol.at(x, y, z) = v;
            }
        }
    }
}

} // namespace detail

/// Synthetic head phantom: faint uniform background noise, one large
/// mid-intensity head ellipsoid filled with smaller ellipsoids of varying
/// intensity, smoothed with a 3-voxel triangular kernel. Foreground keeps
/// at least 8 voxels of margin from every face. Deterministic by seed.
inline Volume3D generate_phantom(std::array<int, 3> dims, int n_ellipsoids, std::uint64_t seed) {
    if (dims[0] < 32 || dims[1] < 32 || dims[2] < 32) {
        throw ArgumentError("phantom: dims must be >= 32 per axis");
    }
    if (n_ellipsoids < 1) {
        throw ArgumentError("phantom: n_ellipsoids must be >= 1");
    }

    Volume3D vol(dims[0], dims[1], dims[2]);
    Rng rng(seed);

    for (float& v : vol.data) {
        v = static_cast<float>(uniform_range(rng, 0.0, 0.03));
    }

    detail::Ellipsoid head;
    for (int a = 0; a < 3; ++a) {
        head.center[a] = (dims[a] - 1) / 2.0;
        const double max_semi = dims[a] / 2.0 - 10.0;
        head.semi[a] = max_semi * uniform_range(rng, 0.8, 1.0);
    }
    head.intensity = static_cast<float>(uniform_range(rng, 0.55, 0.65));

    std::vector<detail::Ellipsoid> interiors;
    for (int k = 1; k < n_ellipsoids; ++k) {
        detail::Ellipsoid e;
        for (int a = 0; a < 3; ++a) {
            e.center[a] = head.center[a] + uniform_range(rng, -0.55, 0.55) * head.semi[a];
            e.semi[a] = std::max(2.0, uniform_range(rng, 0.08, 0.3) * head.semi[a]);
        }
        e.intensity = static_cast<float>(uniform_range(rng, 0.2, 1.0));
        interiors.push_back(e);
    }

    for (int z = 0; z < vol.nz; ++z) {
        for (int y = 0; y < vol.ny; ++y) {
            for (int x = 0; x < vol.nx; ++x) {
                if (!head.contains(x, y, z)) {
                    continue;
                }
                float v = head.intensity;
                for (const detail::Ellipsoid& e : interiors) {
                    if (e.contains(x, y, z)) {
                        v = e.intensity;
                    }
                }
                vol.at(x, y, z) = v;
            }
        }
    }

    detail::smooth_axis(vol, 0);
    detail::smooth_axis(vol, 1);
    detail::smooth_axis(vol, 2);
    for (float& v : vol.data) {
        v = std::clamp(v, 0.0f, 1.0f);
    }
    return vol;
}

} // namespace motionforge
