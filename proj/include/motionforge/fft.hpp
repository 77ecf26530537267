#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "motionforge/errors.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

/// Complex scalar per voxel, same x-fastest layout as Volume3D.
struct ComplexVolume {
    int nx = 0, ny = 0, nz = 0;
    std::vector<std::complex<double>> data;

    ComplexVolume() = default;
    ComplexVolume(int nx_, int ny_, int nz_)
        : nx(nx_), ny(ny_), nz(nz_),
          data(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_) * static_cast<std::size_t>(nz_)) {
        if (nx_ <= 0 || ny_ <= 0 || nz_ <= 0) {
            throw ArgumentError("complex volume: dims must be positive");
        }
    }

    int dim(int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(nx) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(ny) * static_cast<std::size_t>(z));
    }
    std::complex<double>& at(int x, int y, int z) { return data[index(x, y, z)]; }
    const std::complex<double>& at(int x, int y, int z) const { return data[index(x, y, z)]; }
};

namespace detail {

using cd = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// manual complex multiply: keeps the butterflies free of __muldc3 calls
inline cd cmul(const cd& a, const cd& b) {
    return cd(a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real());
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) {
        m <<= 1;
    }
    return m;
}

// In-place iterative radix-2 Cooley-Tukey; `dir` is the sign of the
// exponent (-1 forward, +1 inverse). Unnormalized.
inline void fft_pow2_raw(cd* a, std::size_t n, int dir) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(a[i], a[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = dir * 2.0 * M_PI / static_cast<double>(len);
        const cd wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cd u = a[i + k];
                const cd v = cmul(a[i + k + len / 2], w);
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w = cmul(w, wlen);
            }
        }
    }
}

inline void fft_pow2(std::vector<cd>& a, int dir) { fft_pow2_raw(a.data(), a.size(), dir); }

// One transform length, reusable across every line of an axis. Powers of
// two run radix-2 directly; other lengths go through Bluestein's chirp
// z-transform on a padded power-of-two convolution.
struct FftPlan {
    std::size_t n = 0;
    int dir = -1;
    bool pow2 = false;
    // Bluestein state
    std::size_t m = 0;
    std::vector<cd> chirp;    // w[t] = exp(dir * i*pi*t^2/n)
    std::vector<cd> kernel_f; // FFT of the padded conjugate chirp

    FftPlan(std::size_t n_, int dir_) : n(n_), dir(dir_), pow2(is_pow2(n_)) {
        if (pow2 || n == 1) {
            return;
        }
        m = next_pow2(2 * n - 1);
        chirp.resize(n);
        for (std::size_t t = 0; t < n; ++t) {
            // t^2 mod 2n keeps the twiddle argument small
            const std::size_t q = (t * t) % (2 * n);
            const double ang = dir * M_PI * static_cast<double>(q) / static_cast<double>(n);
            chirp[t] = cd(std::cos(ang), std::sin(ang));
        }
        std::vector<cd> kern(m, cd(0.0, 0.0));
        kern[0] = std::conj(chirp[0]);
        for (std::size_t t = 1; t < n; ++t) {
            kern[t] = std::conj(chirp[t]);
            kern[m - t] = std::conj(chirp[t]);
        }
        fft_pow2(kern, -1);
        kernel_f = std::move(kern);
    }

    void run(cd* line, std::vector<cd>& scratch) const {
        if (n == 1) {
            return;
        }
        if (pow2) {
            fft_pow2_raw(line, n, dir);
            return;
        }
        scratch.assign(m, cd(0.0, 0.0));
        for (std::size_t t = 0; t < n; ++t) {
            scratch[t] = cmul(line[t], chirp[t]);
        }
        fft_pow2(scratch, -1);
        for (std::size_t t = 0; t < m; ++t) {
            scratch[t] = cmul(scratch[t], kernel_f[t]);
        }
        fft_pow2(scratch, +1);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t t = 0; t < n; ++t) {
            line[t] = cmul(chirp[t], scratch[t] * inv_m);
        }
    }
};

inline void transform_axis(ComplexVolume& v, int axis, int dir) {
    const std::size_t n = static_cast<std::size_t>(v.dim(axis));
    const FftPlan plan(n, dir);

    std::size_t stride = 1;
    for (int a = 0; a < axis; ++a) {
        stride *= static_cast<std::size_t>(v.dim(a));
    }
    const int oa = (axis == 0) ? 1 : 0;
    const int ob = (axis == 2) ? 1 : 2;
    const std::size_t na = static_cast<std::size_t>(v.dim(oa));
    const std::size_t nb = static_cast<std::size_t>(v.dim(ob));
    std::size_t stride_a = 1, stride_b = 1;
    for (int a = 0; a < oa; ++a) {
        stride_a *= static_cast<std::size_t>(v.dim(a));
    }
    for (int a = 0; a < ob; ++a) {
        stride_b *= static_cast<std::size_t>(v.dim(a));
    }

    std::vector<cd> line(n);
    std::vector<cd> scratch;
    for (std::size_t ib = 0; ib < nb; ++ib) {
        for (std::size_t ia = 0; ia < na; ++ia) {
            const std::size_t base = ia * stride_a + ib * stride_b;
            for (std::size_t t = 0; t < n; ++t) {
                line[t] = v.data[base + t * stride];
            }
            plan.run(line.data(), scratch);
            for (std::size_t t = 0; t < n; ++t) {
                v.data[base + t * stride] = line[t];
            }
        }
    }
}

inline void fft3_inplace(ComplexVolume& v, int dir) {
    transform_axis(v, 0, dir);
    transform_axis(v, 1, dir);
    transform_axis(v, 2, dir);
}

} // namespace detail

/// Unnormalized forward 3D DFT.
inline ComplexVolume fftn(const Volume3D& vol) {
    ComplexVolume k(vol.nx, vol.ny, vol.nz);
    for (std::size_t i = 0; i < vol.data.size(); ++i) {
        k.data[i] = detail::cd(static_cast<double>(vol.data[i]), 0.0);
    }
    detail::fft3_inplace(k, -1);
    return k;
}

/// Unnormalized forward 3D DFT of complex data.
inline ComplexVolume fftn(const ComplexVolume& vol) {
    ComplexVolume k = vol;
    detail::fft3_inplace(k, -1);
    return k;
}

/// Inverse 3D DFT, scaled by 1/N so that ifftn(fftn(v)) == v.
inline ComplexVolume ifftn(const ComplexVolume& k) {
    ComplexVolume v = k;
    detail::fft3_inplace(v, +1);
    const double inv_n = 1.0 / static_cast<double>(v.data.size());
    for (auto& c : v.data) {
        c *= inv_n;
    }
    return v;
}

} // namespace motionforge
