#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "motionforge/errors.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

// MRVOL container: "MRVOL1\n", then ASCII lines
//   dims <nx> <ny> <nz>
//   spacing <sx> <sy> <sz>
//   data float32 le
// followed by nx*ny*nz little-endian 32-bit floats, x-fastest.

namespace detail {

inline void byteswap32_buffer(char* p, std::size_t n_words) {
    for (std::size_t i = 0; i < n_words; ++i) {
        std::swap(p[4 * i + 0], p[4 * i + 3]);
        std::swap(p[4 * i + 1], p[4 * i + 2]);
    }
}

inline constexpr bool host_is_little_endian() {
    return std::endian::native == std::endian::little;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

inline void write_mrvol(const Volume3D& vol, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("mrvol: cannot open for writing: " + path);
    }
    f << "MRVOL1\n";
    f << "dims " << vol.nx << " " << vol.ny << " " << vol.nz << "\n";
    f << "spacing " << detail::format_double(vol.spacing[0]) << " " << detail::format_double(vol.spacing[1])
      << " " << detail::format_double(vol.spacing[2]) << "\n";
    f << "data float32 le\n";
    if (detail::host_is_little_endian()) {
        f.write(reinterpret_cast<const char*>(vol.data.data()),
                static_cast<std::streamsize>(vol.data.size() * 4));
    } else {
        std::vector<char> buf(vol.data.size() * 4);
        std::memcpy(buf.data(), vol.data.data(), buf.size());
        detail::byteswap32_buffer(buf.data(), vol.data.size());
        f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    if (!f) {
        throw IoError("mrvol: write failed: " + path);
    }
}

inline Volume3D read_mrvol(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("mrvol: cannot open: " + path);
    }
    std::string line;
    if (!std::getline(f, line) || line != "MRVOL1") {
        throw FormatError("mrvol: bad magic in " + path);
    }

    int nx = 0, ny = 0, nz = 0;
    std::array<double, 3> spacing{};
    if (!std::getline(f, line)) {
        throw FormatError("mrvol: missing dims line in " + path);
    }
    {
        std::istringstream iss(line);
        std::string tag;
        if (!(iss >> tag >> nx >> ny >> nz) || tag != "dims" || nx <= 0 || ny <= 0 || nz <= 0) {
            throw FormatError("mrvol: bad dims line in " + path);
        }
    }
    if (!std::getline(f, line)) {
        throw FormatError("mrvol: missing spacing line in " + path);
    }
    {
        std::istringstream iss(line);
        std::string tag;
        if (!(iss >> tag >> spacing[0] >> spacing[1] >> spacing[2]) || tag != "spacing") {
            throw FormatError("mrvol: bad spacing line in " + path);
        }
    }
    if (!std::getline(f, line) || line != "data float32 le") {
        throw FormatError("mrvol: bad data line in " + path);
    }

    Volume3D vol(nx, ny, nz, spacing);
    f.read(reinterpret_cast<char*>(vol.data.data()), static_cast<std::streamsize>(vol.data.size() * 4));
    if (static_cast<std::size_t>(f.gcount()) != vol.data.size() * 4) {
        throw FormatError("mrvol: payload does not match dims in " + path);
    }
    if (f.peek() != std::char_traits<char>::eof()) {
        throw FormatError("mrvol: trailing bytes after payload in " + path);
    }
    if (!detail::host_is_little_endian()) {
        detail::byteswap32_buffer(reinterpret_cast<char*>(vol.data.data()), vol.data.size());
    }
    return vol;
}

} // namespace motionforge
