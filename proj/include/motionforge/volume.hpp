#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "motionforge/errors.hpp"
#include "motionforge/otsu.hpp"

namespace motionforge {

/// Real-valued 3D image. Voxels are stored x-fastest:
/// index = x + nx*(y + ny*z). Spacing is millimeters per voxel.
struct Volume3D {
    int nx = 0, ny = 0, nz = 0;
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::vector<float> data;

    Volume3D() = default;
    Volume3D(int nx_, int ny_, int nz_, std::array<double, 3> spacing_ = {1.0, 1.0, 1.0})
        : nx(nx_), ny(ny_), nz(nz_), spacing(spacing_),
          data(static_cast<std::size_t>(check_dims(nx_, ny_, nz_, spacing_)), 0.0f) {}

    std::size_t size() const { return data.size(); }
    int dim(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * static_cast<std::size_t>(z));
    }
    float at(int x, int y, int z) const { return data[index(x, y, z)]; }
    float& at(int x, int y, int z) { return data[index(x, y, z)]; }

private:
    static std::size_t check_dims(int nx_, int ny_, int nz_, const std::array<double, 3>& sp) {
        if (nx_ <= 0 || ny_ <= 0 || nz_ <= 0) {
            throw ArgumentError("volume: dims must be positive");
        }
        for (double s : sp) {
            if (!(s > 0.0)) {
                throw ArgumentError("volume: spacing must be positive");
            }
        }
        return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_) * static_cast<std::size_t>(nz_);
    }
};

/// Real-valued 2D image, row-major: index = c + w*r.
struct Slice2D {
    int h = 0, w = 0;
    std::vector<float> data;

    Slice2D() = default;
    Slice2D(int h_, int w_) : h(h_), w(w_) {
        if (h_ <= 0 || w_ <= 0) {
            throw ArgumentError("slice: dims must be positive");
        }
        data.assign(static_cast<std::size_t>(h_) * static_cast<std::size_t>(w_), 0.0f);
    }

    std::size_t index(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(w) + static_cast<std::size_t>(c);
    }
    float at(int r, int c) const { return data[index(r, c)]; }
    float& at(int r, int c) { return data[index(r, c)]; }
};

/// Map intensities affinely to [0,1]: (v - min) / (max - min).
/// A constant volume maps to all zeros.
inline Volume3D normalize_intensity(const Volume3D& vol) {
    Volume3D out = vol;
    if (vol.data.empty()) {
        return out;
    }
    float lo = vol.data[0], hi = vol.data[0];
    for (float v : vol.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo) {
        std::fill(out.data.begin(), out.data.end(), 0.0f);
        return out;
    }
    const float scale = 1.0f / (hi - lo);
    for (float& v : out.data) {
        v = (v - lo) * scale;
    }
    return out;
}

/// Extract `count` contiguous slices perpendicular to `axis`, centered on
/// the axis midpoint (start = floor((n - count) / 2)). Slice rows/columns
/// are the two remaining axes in ascending order.
inline std::vector<Slice2D> extract_slices(const Volume3D& vol, int axis, int count) {
    if (axis < 0 || axis > 2) {
        throw ArgumentError("extract_slices: axis must be 0, 1 or 2");
    }
    const int n = vol.dim(axis);
    if (count < 1 || count > n) {
        throw ArgumentError("extract_slices: count out of range");
    }
    const int a = (axis == 0) ? 1 : 0; // first remaining axis -> rows
    const int b = (axis == 2) ? 1 : 2; // second remaining axis -> columns
    const int start = (n - count) / 2;

    std::vector<Slice2D> slices;
    slices.reserve(static_cast<std::size_t>(count));
    for (int k = start; k < start + count; ++k) {
        Slice2D s(vol.dim(a), vol.dim(b));
        int coord[3];
        coord[axis] = k;
        for (int i = 0; i < s.h; ++i) {
            coord[a] = i;
            for (int j = 0; j < s.w; ++j) {
                coord[b] = j;
                s.at(i, j) = vol.at(coord[0], coord[1], coord[2]);
            }
        }
        slices.push_back(std::move(s));
    }
    return slices;
}

/// Corner-aligned bilinear resampling: input coordinate of output index i
/// is i * (in-1)/(out-1); a single output sample reads the input center.
/// Output values are clamped to the input range.
inline Slice2D resample_bilinear(const Slice2D& in, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) {
        throw ArgumentError("resample_bilinear: output dims must be >= 1");
    }
    if (out_h == in.h && out_w == in.w) {
        return in;
    }
    float lo = in.data[0], hi = in.data[0];
    for (float v : in.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }

    const double step_r = (out_h > 1) ? double(in.h - 1) / double(out_h - 1) : 0.0;
    const double step_c = (out_w > 1) ? double(in.w - 1) / double(out_w - 1) : 0.0;
    const double base_r = (out_h > 1) ? 0.0 : double(in.h - 1) / 2.0;
    const double base_c = (out_w > 1) ? 0.0 : double(in.w - 1) / 2.0;

    Slice2D out(out_h, out_w);
    for (int i = 0; i < out_h; ++i) {
        const double rf = base_r + step_r * i;
        const int r0 = std::min(static_cast<int>(rf), in.h - 1);
        const int r1 = std::min(r0 + 1, in.h - 1);
        const double fr = rf - r0;
        for (int j = 0; j < out_w; ++j) {
            const double cf = base_c + step_c * j;
            const int c0 = std::min(static_cast<int>(cf), in.w - 1);
            const int c1 = std::min(c0 + 1, in.w - 1);
            const double fc = cf - c0;
            const double v = (1.0 - fr) * ((1.0 - fc) * in.at(r0, c0) + fc * in.at(r0, c1)) +
                             fr * ((1.0 - fc) * in.at(r1, c0) + fc * in.at(r1, c1));
            out.at(i, j) = std::clamp(static_cast<float>(v), lo, hi);
        }
    }
    return out;
}

struct CropResult {
    Slice2D slice;
    bool foreground = false; // false when the Otsu mask came up empty
};

/// Crop the Otsu-foreground bounding box, expanded to a square (centered,
/// clamped to image bounds), and resample to out_size x out_size. Slices
/// with no detectable foreground are resampled whole and flagged.
inline CropResult crop_to_foreground_square(const Slice2D& slice, int out_size) {
    if (out_size < 2) {
        throw ArgumentError("crop: out_size must be >= 2");
    }

    int r0 = slice.h, r1 = -1, c0 = slice.w, c1 = -1;
    try {
        const double t = otsu_thresholds(slice.data, 1)[0];
        for (int r = 0; r < slice.h; ++r) {
            for (int c = 0; c < slice.w; ++c) {
                if (slice.at(r, c) > t) {
                    r0 = std::min(r0, r);
                    r1 = std::max(r1, r);
                    c0 = std::min(c0, c);
                    c1 = std::max(c1, c);
                }
            }
        }
    } catch (const DegenerateError&) {
        // constant slice: no mask
    }
    if (r1 < 0) {
        return {resample_bilinear(slice, out_size, out_size), false};
    }

    int side = std::max(r1 - r0 + 1, c1 - c0 + 1);
    side = std::min(side, std::min(slice.h, slice.w));
    int rs = (r0 + r1 + 1 - side) / 2;
    int cs = (c0 + c1 + 1 - side) / 2;
    rs = std::clamp(rs, 0, slice.h - side);
    cs = std::clamp(cs, 0, slice.w - side);

    Slice2D cropped(side, side);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            cropped.at(r, c) = slice.at(rs + r, cs + c);
        }
    }
    return {resample_bilinear(cropped, out_size, out_size), true};
}

} // namespace motionforge
