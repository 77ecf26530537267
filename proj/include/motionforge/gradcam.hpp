#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "motionforge/errors.hpp"
#include "motionforge/model.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

/// Class-activation map aligned to the slice it explains. `values` are
/// normalized to [0,1]; `raw_max` keeps the pre-normalization peak as the
/// magnitude proxy.
struct Heatmap {
    int h = 0, w = 0;
    std::vector<float> values;
    int target_class = 0;
    double raw_max = 0.0;

    Slice2D as_slice() const {
        Slice2D s(h, w);
        s.data = values;
        return s;
    }
};

/// Grad-CAM over the last convolutional activation: channel weights are the
/// spatial means of the target logit's gradient, the weighted activation sum
/// is rectified, upsampled to the slice size, and normalized by its maximum.
inline Heatmap gradcam(const ModelParams& params, const Slice2D& slice, int target_class) {
    if (target_class < 0 || target_class >= kNumClasses) {
        throw ArgumentError("gradcam: target class must be 0, 1 or 2");
    }
    if (slice.h != params.config.input_size || slice.w != params.config.input_size) {
        throw ShapeError("gradcam: slice dims must equal config input_size");
    }

    Tensor4 x(1, slice.h, slice.w, 1);
    x.data = slice.data;
    ForwardCache cache;
    model_forward(params, x, &cache);

    // gradient of the raw target logit, not the softmax
    std::vector<float> grad_logits(3, 0.0f);
    grad_logits[static_cast<std::size_t>(target_class)] = 1.0f;
    const BackwardResult back = model_backward(params, cache, grad_logits);

    const Tensor4& act = cache.conv_act[2];
    const Tensor4& dact = back.d_last_conv_act;
    const int hh = act.h, ww = act.w, cc = act.c;

    std::vector<double> alpha(static_cast<std::size_t>(cc), 0.0);
    for (int i = 0; i < hh; ++i) {
        for (int j = 0; j < ww; ++j) {
            for (int c = 0; c < cc; ++c) {
                alpha[static_cast<std::size_t>(c)] += dact.at(0, i, j, c);
            }
        }
    }
    const double inv_area = 1.0 / (static_cast<double>(hh) * static_cast<double>(ww));
    for (double& a : alpha) {
        a *= inv_area;
    }

    Slice2D raw(hh, ww);
    double raw_max = 0.0;
    for (int i = 0; i < hh; ++i) {
        for (int j = 0; j < ww; ++j) {
            double s = 0.0;
            for (int c = 0; c < cc; ++c) {
                s += alpha[static_cast<std::size_t>(c)] * act.at(0, i, j, c);
            }
            const double v = std::max(s, 0.0);
            raw.at(i, j) = static_cast<float>(v);
            raw_max = std::max(raw_max, v);
        }
    }

    Heatmap hm;
    hm.h = slice.h;
    hm.w = slice.w;
    hm.target_class = target_class;
    hm.raw_max = raw_max;
    if (raw_max == 0.0) {
        hm.values.assign(static_cast<std::size_t>(slice.h) * slice.w, 0.0f);
        return hm;
    }
    const Slice2D up = resample_bilinear(raw, slice.h, slice.w);
    hm.values.resize(up.data.size());
    const float inv = static_cast<float>(1.0 / raw_max);
    for (std::size_t i = 0; i < up.data.size(); ++i) {
        hm.values[i] = std::clamp(up.data[i] * inv, 0.0f, 1.0f);
    }
    return hm;
}

struct HeatmapStats {
    double raw_max = 0.0;
    double mean = 0.0;
    double foreground_fraction = 0.0; // fraction of normalized values > 0.5
};

inline HeatmapStats heatmap_stats(const Heatmap& hm) {
    HeatmapStats s;
    s.raw_max = hm.raw_max;
    if (hm.values.empty()) {
        return s;
    }
    double sum = 0.0;
    std::size_t over = 0;
    for (float v : hm.values) {
        sum += v;
        if (v > 0.5f) {
            ++over;
        }
    }
    s.mean = sum / static_cast<double>(hm.values.size());
    s.foreground_fraction = static_cast<double>(over) / static_cast<double>(hm.values.size());
    return s;
}

} // namespace motionforge
