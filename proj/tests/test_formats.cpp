#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "motionforge/image_io.hpp"
#include "motionforge/mrvol.hpp"
#include "motionforge/nifti.hpp"

#include "test_util.hpp"

using namespace motionforge;

namespace {

void put_i16(std::vector<char>& buf, std::size_t off, std::int16_t v, bool big_endian) {
    unsigned char b0 = static_cast<unsigned char>(v & 0xff);
    unsigned char b1 = static_cast<unsigned char>((v >> 8) & 0xff);
    if (big_endian) {
        std::swap(b0, b1);
    }
    buf[off] = static_cast<char>(b0);
    buf[off + 1] = static_cast<char>(b1);
}

void put_i32(std::vector<char>& buf, std::size_t off, std::int32_t v, bool big_endian) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) {
        b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    }
    if (big_endian) {
        std::swap(b[0], b[3]);
        std::swap(b[1], b[2]);
    }
    std::memcpy(buf.data() + off, b, 4);
}

void put_f32(std::vector<char>& buf, std::size_t off, float v, bool big_endian) {
    std::int32_t bits;
    std::memcpy(&bits, &v, 4);
    put_i32(buf, off, bits, big_endian);
}

// hand-built single-file NIfTI-1 with either int16 or float32 payload
std::vector<char> make_nifti(std::array<int, 3> dims, int datatype, std::array<float, 3> pixdim,
                             float slope, float inter, const std::vector<float>& values,
                             bool big_endian = false) {
    std::vector<char> buf(352, 0);
    put_i32(buf, 0, 348, big_endian);
    put_i16(buf, 40, 3, big_endian);
    for (int a = 0; a < 3; ++a) {
        put_i16(buf, 42 + 2 * a, static_cast<std::int16_t>(dims[static_cast<std::size_t>(a)]), big_endian);
        put_f32(buf, 80 + 4 * a, pixdim[static_cast<std::size_t>(a)], big_endian);
    }
    put_i16(buf, 70, static_cast<std::int16_t>(datatype), big_endian);
    put_i16(buf, 72, static_cast<std::int16_t>(datatype == kNiftiInt16 ? 16 : 32), big_endian);
    put_f32(buf, 108, 352.0f, big_endian);
    put_f32(buf, 112, slope, big_endian);
    put_f32(buf, 116, inter, big_endian);
    std::memcpy(buf.data() + 344, "n+1", 4);

    for (float v : values) {
        if (datatype == kNiftiInt16) {
            std::vector<char> w(2);
            put_i16(w, 0, static_cast<std::int16_t>(v), big_endian);
            buf.insert(buf.end(), w.begin(), w.end());
        } else {
            std::vector<char> w(4);
            put_f32(w, 0, v, big_endian);
            buf.insert(buf.end(), w.begin(), w.end());
        }
    }
    return buf;
}

} // namespace

TEST_CASE("read_nifti parses a float32 volume") {
    mftest::TempDir tmp("nifti");
    std::vector<float> values(64);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = static_cast<float>(i);
    }
    mftest::write_bytes(tmp.file("a.nii"), make_nifti({4, 4, 4}, kNiftiFloat32, {1, 1, 1}, 0, 0, values));
    const Volume3D v = read_nifti(tmp.file("a.nii"));
    CHECK(v.nx == 4);
    CHECK(v.ny == 4);
    CHECK(v.nz == 4);
    CHECK(v.at(1, 0, 0) == 1.0f);
    CHECK(v.at(0, 1, 0) == 4.0f);
    CHECK(v.at(3, 3, 3) == 63.0f);
}

TEST_CASE("read_nifti applies scl_slope and scl_inter to int16 data") {
    mftest::TempDir tmp("nifti");
    mftest::write_bytes(tmp.file("s.nii"),
                        make_nifti({2, 1, 1}, kNiftiInt16, {2, 2, 2}, 2.0f, 1.0f, {5.0f, -3.0f}));
    const Volume3D v = read_nifti(tmp.file("s.nii"));
    CHECK(v.at(0, 0, 0) == 11.0f); // 2*5 + 1
    CHECK(v.at(1, 0, 0) == -5.0f); // 2*(-3) + 1
    CHECK(v.spacing[0] == 2.0);
}

TEST_CASE("read_nifti detects byte-swapped headers") {
    mftest::TempDir tmp("nifti");
    mftest::write_bytes(tmp.file("be.nii"),
                        make_nifti({3, 2, 1}, kNiftiInt16, {1, 1, 1}, 0, 0, {1, 2, 3, 4, 5, 6}, true));
    const Volume3D v = read_nifti(tmp.file("be.nii"));
    CHECK(v.nx == 3);
    CHECK(v.at(2, 1, 0) == 6.0f);
}

TEST_CASE("read_nifti rejects malformed files") {
    mftest::TempDir tmp("nifti");

    auto good = make_nifti({2, 2, 2}, kNiftiFloat32, {1, 1, 1}, 0, 0, std::vector<float>(8, 0.0f));

    auto bad_hdr = good;
    put_i32(bad_hdr, 0, 999, false);
    mftest::write_bytes(tmp.file("bad_hdr.nii"), bad_hdr);
    CHECK_THROWS_AS(read_nifti(tmp.file("bad_hdr.nii")), FormatError);

    auto bad_magic = good;
    std::memcpy(bad_magic.data() + 344, "xxx", 3);
    mftest::write_bytes(tmp.file("bad_magic.nii"), bad_magic);
    CHECK_THROWS_AS(read_nifti(tmp.file("bad_magic.nii")), FormatError);

    auto bad_dtype = good;
    put_i16(bad_dtype, 70, 2, false); // uint8: unsupported
    mftest::write_bytes(tmp.file("bad_dtype.nii"), bad_dtype);
    CHECK_THROWS_AS(read_nifti(tmp.file("bad_dtype.nii")), UnsupportedError);

    auto truncated = good;
    truncated.resize(truncated.size() - 6);
    mftest::write_bytes(tmp.file("trunc.nii"), truncated);
    CHECK_THROWS_AS(read_nifti(tmp.file("trunc.nii")), IoError);
}

TEST_CASE("mrvol round trip is bit-identical") {
    mftest::TempDir tmp("mrvol");
    Volume3D v = mftest::random_volume(5, 6, 7, 31);
    v.spacing = {0.859375, 1.25, 6.0 / 7.0};
    write_mrvol(v, tmp.file("v.mrvol"));
    const Volume3D r = read_mrvol(tmp.file("v.mrvol"));
    CHECK(r.nx == v.nx);
    CHECK(r.ny == v.ny);
    CHECK(r.nz == v.nz);
    CHECK(r.spacing == v.spacing);
    CHECK(r.data == v.data);
}

TEST_CASE("mrvol file size is header plus 4 bytes per voxel") {
    mftest::TempDir tmp("mrvol");
    const Volume3D v(2, 2, 2);
    write_mrvol(v, tmp.file("z.mrvol"));
    const auto bytes = mftest::read_bytes(tmp.file("z.mrvol"));
    const std::string header = "MRVOL1\ndims 2 2 2\nspacing 1 1 1\ndata float32 le\n";
    REQUIRE(bytes.size() == header.size() + 32);
    CHECK(std::memcmp(bytes.data(), header.data(), header.size()) == 0);
}

TEST_CASE("mrvol rejects corrupted headers and payload mismatches") {
    mftest::TempDir tmp("mrvol");
    const Volume3D v = mftest::random_volume(3, 3, 3, 5);
    write_mrvol(v, tmp.file("v.mrvol"));

    auto bytes = mftest::read_bytes(tmp.file("v.mrvol"));
    auto corrupted = bytes;
    corrupted[2] ^= 0x01; // flip one magic byte
    mftest::write_bytes(tmp.file("bad.mrvol"), corrupted);
    CHECK_THROWS_AS(read_mrvol(tmp.file("bad.mrvol")), FormatError);

    auto short_payload = bytes;
    short_payload.resize(short_payload.size() - 4);
    mftest::write_bytes(tmp.file("short.mrvol"), short_payload);
    CHECK_THROWS_AS(read_mrvol(tmp.file("short.mrvol")), FormatError);

    auto long_payload = bytes;
    long_payload.push_back(0);
    mftest::write_bytes(tmp.file("long.mrvol"), long_payload);
    CHECK_THROWS_AS(read_mrvol(tmp.file("long.mrvol")), FormatError);
}

TEST_CASE("write_pgm emits exact bytes") {
    mftest::TempDir tmp("pgm");
    Slice2D s(2, 2);
    s.at(0, 0) = 0.0f;
    s.at(0, 1) = 1.0f;
    s.at(1, 0) = 0.5f;
    s.at(1, 1) = 0.25f;
    write_pgm(s, tmp.file("s.pgm"));
    const auto bytes = mftest::read_bytes(tmp.file("s.pgm"));
    const std::string header = "P5\n2 2\n255\n";
    REQUIRE(bytes.size() == header.size() + 4);
    CHECK(std::memcmp(bytes.data(), header.data(), header.size()) == 0);
    const unsigned char* px = reinterpret_cast<const unsigned char*>(bytes.data() + header.size());
    CHECK(px[0] == 0);
    CHECK(px[1] == 255);
    CHECK(px[2] == 128);
    CHECK(px[3] == 64);
}

TEST_CASE("ppm overlay tints red only where the heatmap is hot") {
    mftest::TempDir tmp("ppm");
    const Slice2D gray = mftest::random_slice(3, 4, 77);
    Slice2D heat(3, 4);

    SECTION("zero heatmap gives grayscale R=G=B") {
        write_ppm_overlay(gray, heat, tmp.file("o.ppm"));
        const auto bytes = mftest::read_bytes(tmp.file("o.ppm"));
        const std::string header = "P6\n4 3\n255\n";
        REQUIRE(bytes.size() == header.size() + 36);
        for (std::size_t i = header.size(); i + 2 < bytes.size(); i += 3) {
            CHECK(bytes[i] == bytes[i + 1]);
            CHECK(bytes[i + 1] == bytes[i + 2]);
        }
    }

    SECTION("heatmap of ones saturates the red channel") {
        std::fill(heat.data.begin(), heat.data.end(), 1.0f);
        write_ppm_overlay(gray, heat, tmp.file("hot.ppm"));
        const auto bytes = mftest::read_bytes(tmp.file("hot.ppm"));
        const std::string header = "P6\n4 3\n255\n";
        for (std::size_t i = header.size(); i + 2 < bytes.size(); i += 3) {
            CHECK(static_cast<unsigned char>(bytes[i]) == 255);
        }
    }

    SECTION("dim mismatch is rejected") {
        Slice2D small(2, 2);
        CHECK_THROWS_AS(write_ppm_overlay(gray, small, tmp.file("x.ppm")), ArgumentError);
    }
}
