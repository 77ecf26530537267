#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "motionforge/errors.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

namespace detail {

inline unsigned char to_byte(double v) {
    return static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

} // namespace detail

/// Binary PGM (P5, maxval 255): pixel = round(255 * v) for v in [0,1].
inline void write_pgm(const Slice2D& slice, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("pgm: cannot open for writing: " + path);
    }
    f << "P5\n" << slice.w << " " << slice.h << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(slice.w));
    for (int r = 0; r < slice.h; ++r) {
        for (int c = 0; c < slice.w; ++c) {
            row[static_cast<std::size_t>(c)] = detail::to_byte(slice.at(r, c));
        }
        f.write(reinterpret_cast<const char*>(row.data()), slice.w);
    }
    if (!f) {
        throw IoError("pgm: write failed: " + path);
    }
}

/// Binary PPM (P6) heat overlay with a deterministic red tint:
///   R = round(255 * clamp(gray + heat, 0, 1))
///   G = B = round(255 * gray * (1 - 0.5 * heat))
/// `heat` values are the normalized [0,1] heatmap, same dims as the slice.
inline void write_ppm_overlay(const Slice2D& slice, const Slice2D& heat, const std::string& path) {
    if (slice.h != heat.h || slice.w != heat.w) {
        throw ArgumentError("ppm overlay: heatmap dims must match slice dims");
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("ppm: cannot open for writing: " + path);
    }
    f << "P6\n" << slice.w << " " << slice.h << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(slice.w) * 3);
    for (int r = 0; r < slice.h; ++r) {
        for (int c = 0; c < slice.w; ++c) {
            const double gray = slice.at(r, c);
            const double h = heat.at(r, c);
            row[3 * static_cast<std::size_t>(c) + 0] = detail::to_byte(gray + h);
            const unsigned char gb = detail::to_byte(gray * (1.0 - 0.5 * h));
            row[3 * static_cast<std::size_t>(c) + 1] = gb;
            row[3 * static_cast<std::size_t>(c) + 2] = gb;
        }
        f.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!f) {
        throw IoError("ppm: write failed: " + path);
    }
}

} // namespace motionforge
