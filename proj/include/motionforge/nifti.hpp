#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "motionforge/errors.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

// Uncompressed single-file NIfTI-1 reader. Supported datatypes: 4 (int16)
// and 16 (float32); dim[0] must be 3. Compressed .nii.gz, 4D series and
// orientation/affine handling are out of scope.

inline constexpr int kNiftiInt16 = 4;
inline constexpr int kNiftiFloat32 = 16;

/// Decoded subset of the 348-byte NIfTI-1 header.
struct VolumeHeader {
    std::array<int, 3> dims{};
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    int datatype = 0;
    float scl_slope = 0.0f;
    float scl_inter = 0.0f;
    long data_offset = 0;
    bool byteswapped = false;
};

namespace detail {

struct HeaderReader {
    const unsigned char* p;
    bool swap;

    std::int32_t i32(std::size_t off) const {
        std::uint32_t v;
        std::memcpy(&v, p + off, 4);
        if (swap) {
            v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
        }
        std::int32_t out;
        std::memcpy(&out, &v, 4);
        return out;
    }
    std::int16_t i16(std::size_t off) const {
        std::uint16_t v;
        std::memcpy(&v, p + off, 2);
        if (swap) {
            v = static_cast<std::uint16_t>((v << 8) | (v >> 8));
        }
        std::int16_t out;
        std::memcpy(&out, &v, 2);
        return out;
    }
    float f32(std::size_t off) const {
        const std::int32_t bits = i32(off);
        float out;
        std::memcpy(&out, &bits, 4);
        return out;
    }
};

} // namespace detail

/// Parse the header of an uncompressed NIfTI-1 file, detecting byte order.
inline VolumeHeader read_nifti_header(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("nifti: cannot open: " + path);
    }
    unsigned char hdr[348];
    f.read(reinterpret_cast<char*>(hdr), 348);
    if (f.gcount() != 348) {
        throw FormatError("nifti: file shorter than a NIfTI-1 header: " + path);
    }

    detail::HeaderReader native{hdr, false};
    detail::HeaderReader swapped{hdr, true};
    detail::HeaderReader rd = native;
    if (native.i32(0) == 348) {
        rd = native;
    } else if (swapped.i32(0) == 348) {
        rd = swapped;
    } else {
        throw FormatError("nifti: sizeof_hdr is not 348 in either byte order: " + path);
    }

    if (std::memcmp(hdr + 344, "n+1", 3) != 0) {
        throw FormatError("nifti: bad magic (expected n+1): " + path);
    }
    if (rd.i16(40) != 3) {
        throw UnsupportedError("nifti: only 3D volumes supported (dim[0] != 3): " + path);
    }

    VolumeHeader h;
    h.byteswapped = rd.swap;
    h.datatype = rd.i16(70);
    if (h.datatype != kNiftiInt16 && h.datatype != kNiftiFloat32) {
        throw UnsupportedError("nifti: unsupported datatype " + std::to_string(h.datatype) + ": " + path);
    }
    for (int a = 0; a < 3; ++a) {
        const int d = rd.i16(42 + 2 * a);
        if (d <= 0) {
            throw FormatError("nifti: non-positive dimension: " + path);
        }
        h.dims[a] = d;
        const double s = std::fabs(static_cast<double>(rd.f32(76 + 4 * (a + 1))));
        h.spacing[a] = (s > 0.0) ? s : 1.0;
    }
    h.scl_slope = rd.f32(112);
    h.scl_inter = rd.f32(116);
    h.data_offset = static_cast<long>(rd.f32(108));
    if (h.data_offset < 348) {
        throw FormatError("nifti: vox_offset below header size: " + path);
    }
    return h;
}

/// Read an uncompressed NIfTI-1 volume. Values are mapped
/// v -> scl_slope*v + scl_inter when scl_slope != 0.
inline Volume3D read_nifti(const std::string& path) {
    const VolumeHeader h = read_nifti_header(path);

    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("nifti: cannot open: " + path);
    }
    f.seekg(h.data_offset);

    Volume3D vol(h.dims[0], h.dims[1], h.dims[2], h.spacing);
    const std::size_t n = vol.size();
    const std::size_t value_bytes = (h.datatype == kNiftiInt16) ? 2 : 4;
    std::vector<unsigned char> raw(n * value_bytes);
    f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(f.gcount()) != raw.size()) {
        throw IoError("nifti: truncated payload: " + path);
    }

    const bool swap = h.byteswapped;
    for (std::size_t i = 0; i < n; ++i) {
        float v;
        if (h.datatype == kNiftiInt16) {
            std::uint16_t bits;
            std::memcpy(&bits, raw.data() + 2 * i, 2);
            if (swap) {
                bits = static_cast<std::uint16_t>((bits << 8) | (bits >> 8));
            }
            std::int16_t sv;
            std::memcpy(&sv, &bits, 2);
            v = static_cast<float>(sv);
        } else {
            std::uint32_t bits;
            std::memcpy(&bits, raw.data() + 4 * i, 4);
            if (swap) {
                bits = ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
            }
            std::memcpy(&v, &bits, 4);
        }
        vol.data[i] = (h.scl_slope != 0.0f) ? h.scl_slope * v + h.scl_inter : v;
    }
    return vol;
}

} // namespace motionforge
