#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "motionforge/errors.hpp"
#include "motionforge/model.hpp"
#include "motionforge/mrvol.hpp"

namespace motionforge {

// Checkpoint layout: "MRNET1", u32 format version, one ASCII config line,
// u64 parameter count, all weights/biases as little-endian float32 in
// declaration order, then a flag byte and the optional Adam section
// (u64 step count, f64 lr/beta1/beta2/eps, first moments, second moments).

inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

inline void write_u32(std::ostream& f, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    f.write(reinterpret_cast<const char*>(b), 4);
}

inline void write_u64(std::ostream& f, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) {
        b[i] = static_cast<unsigned char>(v >> (8 * i));
    }
    f.write(reinterpret_cast<const char*>(b), 8);
}

inline void write_f64(std::ostream& f, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(f, bits);
}

inline void write_floats(std::ostream& f, const std::vector<float>& v) {
    if (host_is_little_endian()) {
        f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 4));
    } else {
        std::vector<char> buf(v.size() * 4);
        std::memcpy(buf.data(), v.data(), buf.size());
        byteswap32_buffer(buf.data(), v.size());
        f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

inline std::uint32_t read_u32(std::istream& f, const std::string& path) {
    unsigned char b[4];
    f.read(reinterpret_cast<char*>(b), 4);
    if (f.gcount() != 4) {
        throw FormatError("checkpoint: truncated file: " + path);
    }
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint64_t read_u64(std::istream& f, const std::string& path) {
    unsigned char b[8];
    f.read(reinterpret_cast<char*>(b), 8);
    if (f.gcount() != 8) {
        throw FormatError("checkpoint: truncated file: " + path);
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    }
    return v;
}

inline double read_f64(std::istream& f, const std::string& path) {
    const std::uint64_t bits = read_u64(f, path);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

inline void read_floats(std::istream& f, std::vector<float>& v, const std::string& path) {
    f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * 4));
    if (static_cast<std::size_t>(f.gcount()) != v.size() * 4) {
        throw FormatError("checkpoint: truncated file: " + path);
    }
    if (!host_is_little_endian()) {
        byteswap32_buffer(reinterpret_cast<char*>(v.data()), v.size());
    }
}

inline std::string config_line(const ModelConfig& cfg) {
    std::ostringstream os;
    os << "input " << cfg.input_size << " conv " << cfg.conv_channels[0] << " " << cfg.conv_channels[1] << " "
       << cfg.conv_channels[2] << " dense " << cfg.dense_units[0] << " " << cfg.dense_units[1] << " "
       << cfg.dense_units[2] << " " << cfg.dense_units[3] << " " << cfg.dense_units[4] << " seed " << cfg.seed;
    return os.str();
}

inline ModelConfig parse_config_line(const std::string& line, const std::string& path) {
    std::istringstream is(line);
    std::string t_input, t_conv, t_dense, t_seed;
    ModelConfig cfg;
    is >> t_input >> cfg.input_size >> t_conv >> cfg.conv_channels[0] >> cfg.conv_channels[1] >>
        cfg.conv_channels[2] >> t_dense >> cfg.dense_units[0] >> cfg.dense_units[1] >> cfg.dense_units[2] >>
        cfg.dense_units[3] >> cfg.dense_units[4] >> t_seed >> cfg.seed;
    if (!is || t_input != "input" || t_conv != "conv" || t_dense != "dense" || t_seed != "seed") {
        throw FormatError("checkpoint: bad config line: " + path);
    }
    return cfg;
}

} // namespace detail

inline void save_checkpoint(const std::string& path, const ModelParams& params,
                            const std::optional<AdamState>& adam = std::nullopt) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("checkpoint: cannot open for writing: " + path);
    }
    f.write("MRNET1", 6);
    detail::write_u32(f, kCheckpointVersion);
    f << detail::config_line(params.config) << "\n";
    detail::write_u64(f, params.param_count());
    for (const auto* t : params.tensors()) {
        detail::write_floats(f, *t);
    }
    if (adam.has_value()) {
        const char flag = 1;
        f.write(&flag, 1);
        detail::write_u64(f, static_cast<std::uint64_t>(adam->t));
        detail::write_f64(f, adam->lr);
        detail::write_f64(f, adam->beta1);
        detail::write_f64(f, adam->beta2);
        detail::write_f64(f, adam->eps);
        for (const auto& m : adam->m) {
            detail::write_floats(f, m);
        }
        for (const auto& v : adam->v) {
            detail::write_floats(f, v);
        }
    } else {
        const char flag = 0;
        f.write(&flag, 1);
    }
    if (!f) {
        throw IoError("checkpoint: write failed: " + path);
    }
}

struct Checkpoint {
    ModelParams params;
    std::optional<AdamState> adam;
};

inline Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("checkpoint: cannot open: " + path);
    }
    char magic[6];
    f.read(magic, 6);
    if (f.gcount() != 6 || std::memcmp(magic, "MRNET1", 6) != 0) {
        throw FormatError("checkpoint: bad magic: " + path);
    }
    const std::uint32_t version = detail::read_u32(f, path);
    if (version != kCheckpointVersion) {
        throw FormatError("checkpoint: unsupported version " + std::to_string(version) + ": " + path);
    }
    std::string line;
    if (!std::getline(f, line)) {
        throw FormatError("checkpoint: missing config line: " + path);
    }
    const ModelConfig cfg = detail::parse_config_line(line, path);

    Checkpoint ck;
    ck.params = init_params(cfg); // sizes the tensors; contents overwritten below
    const std::uint64_t expected = detail::read_u64(f, path);
    if (expected != ck.params.param_count()) {
        throw FormatError("checkpoint: parameter count does not match config: " + path);
    }
    for (auto* t : ck.params.tensors()) {
        detail::read_floats(f, *t, path);
    }

    char flag = 0;
    f.read(&flag, 1);
    if (f.gcount() != 1) {
        throw FormatError("checkpoint: truncated file: " + path);
    }
    if (flag == 1) {
        AdamState st = AdamState::for_params(ck.params);
        st.t = static_cast<long>(detail::read_u64(f, path));
        st.lr = detail::read_f64(f, path);
        st.beta1 = detail::read_f64(f, path);
        st.beta2 = detail::read_f64(f, path);
        st.eps = detail::read_f64(f, path);
        for (auto& m : st.m) {
            detail::read_floats(f, m, path);
        }
        for (auto& v : st.v) {
            detail::read_floats(f, v, path);
        }
        ck.adam = std::move(st);
    } else if (flag != 0) {
        throw FormatError("checkpoint: bad optimizer flag: " + path);
    }
    if (f.peek() != std::char_traits<char>::eof()) {
        throw FormatError("checkpoint: trailing bytes: " + path);
    }
    return ck;
}

} // namespace motionforge
