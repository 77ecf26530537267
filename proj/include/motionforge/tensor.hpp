#pragma once

#include <cstddef>
#include <vector>

#include "motionforge/errors.hpp"

namespace motionforge {

/// 4D activation tensor, NHWC: index = c + C*(j + W*(i + H*n)).
struct Tensor4 {
    int n = 0, h = 0, w = 0, c = 0;
    std::vector<float> data;

    Tensor4() = default;
    Tensor4(int n_, int h_, int w_, int c_) : n(n_), h(h_), w(w_), c(c_) {
        if (n_ < 1 || h_ < 1 || w_ < 1 || c_ < 1) {
            throw ShapeError("tensor: dims must be >= 1");
        }
        data.assign(static_cast<std::size_t>(n_) * h_ * w_ * c_, 0.0f);
    }

    std::size_t index(int in, int i, int j, int ic) const {
        return static_cast<std::size_t>(ic) +
               static_cast<std::size_t>(c) *
                   (static_cast<std::size_t>(j) +
                    static_cast<std::size_t>(w) *
                        (static_cast<std::size_t>(i) + static_cast<std::size_t>(h) * static_cast<std::size_t>(in)));
    }
    float at(int in, int i, int j, int ic) const { return data[index(in, i, j, ic)]; }
    float& at(int in, int i, int j, int ic) { return data[index(in, i, j, ic)]; }

    bool same_shape(const Tensor4& o) const { return n == o.n && h == o.h && w == o.w && c == o.c; }
};

} // namespace motionforge
