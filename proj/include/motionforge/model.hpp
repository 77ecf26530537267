#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "motionforge/errors.hpp"
#include "motionforge/rng.hpp"
#include "motionforge/tensor.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

inline constexpr int kNumClasses = 3;

/// Architecture description: three 3x3 valid convolutions each followed by
/// 2x2 max pooling, then five dense layers with strictly decreasing widths
/// ending at the three class logits. ReLU everywhere except the last layer.
struct ModelConfig {
    int input_size = 64;
    std::array<int, 3> conv_channels{16, 32, 64};
    std::array<int, 5> dense_units{256, 128, 64, 32, 3};
    std::uint64_t seed = 0;
};

/// Spatial sizes at every stage, derived from the config alone.
struct LayerShapes {
    std::array<int, 3> conv_out{};  // after each valid 3x3 convolution
    std::array<int, 3> pool_out{};  // after each 2x2/2 max pool
    int flatten = 0;
};

inline LayerShapes compute_shapes(const ModelConfig& cfg) {
    if (cfg.input_size < 1) {
        throw ShapeError("model config: input_size must be positive");
    }
    for (int c : cfg.conv_channels) {
        if (c < 1) {
            throw ShapeError("model config: conv channels must be positive");
        }
    }
    for (std::size_t i = 0; i < cfg.dense_units.size(); ++i) {
        if (cfg.dense_units[i] < 1) {
            throw ShapeError("model config: dense units must be positive");
        }
        if (i > 0 && cfg.dense_units[i] >= cfg.dense_units[i - 1]) {
            throw ShapeError("model config: dense units must be strictly decreasing");
        }
    }
    if (cfg.dense_units.back() != kNumClasses) {
        throw ShapeError("model config: final dense width must be 3");
    }

    LayerShapes s;
    int size = cfg.input_size;
    for (int stage = 0; stage < 3; ++stage) {
        if (size < 3) {
            throw ShapeError("model config: input too small for conv stage " + std::to_string(stage + 1));
        }
        size -= 2;
        s.conv_out[static_cast<std::size_t>(stage)] = size;
        if (size < 2) {
            throw ShapeError("model config: input too small for pool stage " + std::to_string(stage + 1));
        }
        size /= 2;
        s.pool_out[static_cast<std::size_t>(stage)] = size;
    }
    s.flatten = size * size * cfg.conv_channels[2];
    return s;
}

/// Trainable weights and biases. Declaration order (conv1 w, conv1 b, ...,
/// dense5 w, dense5 b) is also the checkpoint serialization order.
/// Convolution kernels are stored (di, dj, c_in, c_out) with c_out fastest;
/// dense weights are row-major (out, in).
struct ModelParams {
    ModelConfig config;
    std::array<std::vector<float>, 3> conv_w, conv_b;
    std::array<std::vector<float>, 5> dense_w, dense_b;

    std::vector<std::vector<float>*> tensors() {
        std::vector<std::vector<float>*> t;
        for (int i = 0; i < 3; ++i) {
            t.push_back(&conv_w[static_cast<std::size_t>(i)]);
            t.push_back(&conv_b[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < 5; ++i) {
            t.push_back(&dense_w[static_cast<std::size_t>(i)]);
            t.push_back(&dense_b[static_cast<std::size_t>(i)]);
        }
        return t;
    }
    std::vector<const std::vector<float>*> tensors() const {
        std::vector<const std::vector<float>*> t;
        for (int i = 0; i < 3; ++i) {
            t.push_back(&conv_w[static_cast<std::size_t>(i)]);
            t.push_back(&conv_b[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < 5; ++i) {
            t.push_back(&dense_w[static_cast<std::size_t>(i)]);
            t.push_back(&dense_b[static_cast<std::size_t>(i)]);
        }
        return t;
    }

    std::uint64_t param_count() const {
        std::uint64_t n = 0;
        for (const auto* t : tensors()) {
            n += t->size();
        }
        return n;
    }
};

/// Glorot-uniform initialization (+-sqrt(6/(fan_in+fan_out))), biases zero,
/// fully determined by config.seed.
inline ModelParams init_params(const ModelConfig& cfg) {
    const LayerShapes shapes = compute_shapes(cfg);
    ModelParams p;
    p.config = cfg;
    Rng rng(cfg.seed);

    auto fill_uniform = [&rng](std::vector<float>& w, int fan_in, int fan_out) {
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        for (float& v : w) {
            v = static_cast<float>((uniform01(rng) * 2.0 - 1.0) * limit);
        }
    };

    int c_in = 1;
    for (int stage = 0; stage < 3; ++stage) {
        const int c_out = cfg.conv_channels[static_cast<std::size_t>(stage)];
        p.conv_w[static_cast<std::size_t>(stage)].resize(static_cast<std::size_t>(9) * c_in * c_out);
        p.conv_b[static_cast<std::size_t>(stage)].assign(static_cast<std::size_t>(c_out), 0.0f);
        fill_uniform(p.conv_w[static_cast<std::size_t>(stage)], 9 * c_in, 9 * c_out);
        c_in = c_out;
    }
    int in_width = shapes.flatten;
    for (int layer = 0; layer < 5; ++layer) {
        const int out_width = cfg.dense_units[static_cast<std::size_t>(layer)];
        p.dense_w[static_cast<std::size_t>(layer)].resize(static_cast<std::size_t>(out_width) * in_width);
        p.dense_b[static_cast<std::size_t>(layer)].assign(static_cast<std::size_t>(out_width), 0.0f);
        fill_uniform(p.dense_w[static_cast<std::size_t>(layer)], in_width, out_width);
        in_width = out_width;
    }
    return p;
}

// ---- layer primitives -----------------------------------------------------

/// Valid (no padding) stride-1 cross-correlation with 3x3 kernels.
inline Tensor4 conv2d_forward(const Tensor4& x, const std::vector<float>& w, const std::vector<float>& b,
                              int c_out) {
    if (x.h < 3 || x.w < 3) {
        throw ShapeError("conv2d: spatial dims must be >= 3");
    }
    const int c_in = x.c;
    if (w.size() != static_cast<std::size_t>(9) * c_in * c_out || b.size() != static_cast<std::size_t>(c_out)) {
        throw ShapeError("conv2d: kernel/bias shape mismatch");
    }
    Tensor4 y(x.n, x.h - 2, x.w - 2, c_out);
    for (int n = 0; n < x.n; ++n) {
        for (int i = 0; i < y.h; ++i) {
            for (int j = 0; j < y.w; ++j) {
                float* out = &y.data[y.index(n, i, j, 0)];
                for (int o = 0; o < c_out; ++o) {
                    out[o] = b[static_cast<std::size_t>(o)];
                }
                for (int di = 0; di < 3; ++di) {
                    for (int dj = 0; dj < 3; ++dj) {
                        const float* in = &x.data[x.index(n, i + di, j + dj, 0)];
                        const float* ker = &w[static_cast<std::size_t>(di * 3 + dj) * c_in * c_out];
                        for (int ci = 0; ci < c_in; ++ci) {
                            const float xv = in[ci];
                            const float* krow = ker + static_cast<std::size_t>(ci) * c_out;
                            for (int o = 0; o < c_out; ++o) {
                                out[o] += xv * krow[o];
                            }
                        }
                    }
                }
            }
        }
    }
    return y;
}

/// Gradients of conv2d_forward: accumulates both the kernel gradient and
/// the input gradient.
inline void conv2d_backward(const Tensor4& x, const std::vector<float>& w, int c_out, const Tensor4& dy,
                            std::vector<float>& dw, std::vector<float>& db, Tensor4& dx) {
    const int c_in = x.c;
    dw.assign(w.size(), 0.0f);
    db.assign(static_cast<std::size_t>(c_out), 0.0f);
    dx = Tensor4(x.n, x.h, x.w, x.c);
    for (int n = 0; n < dy.n; ++n) {
        for (int i = 0; i < dy.h; ++i) {
            for (int j = 0; j < dy.w; ++j) {
                const float* g = &dy.data[dy.index(n, i, j, 0)];
                for (int o = 0; o < c_out; ++o) {
                    db[static_cast<std::size_t>(o)] += g[o];
                }
                for (int di = 0; di < 3; ++di) {
                    for (int dj = 0; dj < 3; ++dj) {
                        const float* in = &x.data[x.index(n, i + di, j + dj, 0)];
                        float* dxp = &dx.data[dx.index(n, i + di, j + dj, 0)];
                        const std::size_t base = static_cast<std::size_t>((di * 3 + dj)) * c_in * c_out;
                        for (int ci = 0; ci < c_in; ++ci) {
                            const float xv = in[ci];
                            const float* krow = &w[base + static_cast<std::size_t>(ci) * c_out];
                            float* dwrow = &dw[base + static_cast<std::size_t>(ci) * c_out];
                            float acc = 0.0f;
                            for (int o = 0; o < c_out; ++o) {
                                dwrow[o] += xv * g[o];
                                acc += krow[o] * g[o];
                            }
                            dxp[ci] += acc;
                        }
                    }
                }
            }
        }
    }
}

/// 2x2 stride-2 max pooling, trailing row/column dropped on odd dims.
/// Records the flat input index of each window maximum; ties break toward
/// the lowest flat index.
inline Tensor4 maxpool2_forward(const Tensor4& x, std::vector<std::size_t>& argmax) {
    if (x.h < 2 || x.w < 2) {
        throw ShapeError("maxpool2: spatial dims must be >= 2");
    }
    Tensor4 y(x.n, x.h / 2, x.w / 2, x.c);
    argmax.assign(y.data.size(), 0);
    for (int n = 0; n < x.n; ++n) {
        for (int i = 0; i < y.h; ++i) {
            for (int j = 0; j < y.w; ++j) {
                for (int c = 0; c < x.c; ++c) {
                    float best = -std::numeric_limits<float>::infinity();
                    std::size_t best_idx = 0;
                    for (int di = 0; di < 2; ++di) {
                        for (int dj = 0; dj < 2; ++dj) {
                            const std::size_t idx = x.index(n, 2 * i + di, 2 * j + dj, c);
                            if (x.data[idx] > best) {
                                best = x.data[idx];
                                best_idx = idx;
                            }
                        }
                    }
                    const std::size_t out_idx = y.index(n, i, j, c);
                    y.data[out_idx] = best;
                    argmax[out_idx] = best_idx;
                }
            }
        }
    }
    return y;
}

inline Tensor4 maxpool2_backward(const Tensor4& x, const Tensor4& dy, const std::vector<std::size_t>& argmax) {
    Tensor4 dx(x.n, x.h, x.w, x.c);
    for (std::size_t i = 0; i < dy.data.size(); ++i) {
        dx.data[argmax[i]] += dy.data[i];
    }
    return dx;
}

/// Dense layer on a batch of row vectors: out = w * x + b per sample.
inline std::vector<float> dense_forward(const std::vector<float>& x, int batch, int in_width,
                                        const std::vector<float>& w, const std::vector<float>& b) {
    const int out_width = static_cast<int>(b.size());
    if (x.size() != static_cast<std::size_t>(batch) * in_width ||
        w.size() != static_cast<std::size_t>(out_width) * in_width) {
        throw ShapeError("dense: shape mismatch");
    }
    std::vector<float> y(static_cast<std::size_t>(batch) * out_width);
    for (int n = 0; n < batch; ++n) {
        const float* xv = &x[static_cast<std::size_t>(n) * in_width];
        float* yv = &y[static_cast<std::size_t>(n) * out_width];
        for (int o = 0; o < out_width; ++o) {
            const float* wrow = &w[static_cast<std::size_t>(o) * in_width];
            float acc = b[static_cast<std::size_t>(o)];
            for (int i = 0; i < in_width; ++i) {
                acc += wrow[i] * xv[i];
            }
            yv[o] = acc;
        }
    }
    return y;
}

inline void dense_backward(const std::vector<float>& x, int batch, int in_width, const std::vector<float>& w,
                           int out_width, const std::vector<float>& dy, std::vector<float>& dw,
                           std::vector<float>& db, std::vector<float>& dx) {
    dw.assign(w.size(), 0.0f);
    db.assign(static_cast<std::size_t>(out_width), 0.0f);
    dx.assign(x.size(), 0.0f);
    for (int n = 0; n < batch; ++n) {
        const float* xv = &x[static_cast<std::size_t>(n) * in_width];
        const float* gv = &dy[static_cast<std::size_t>(n) * out_width];
        float* dxv = &dx[static_cast<std::size_t>(n) * in_width];
        for (int o = 0; o < out_width; ++o) {
            const float g = gv[o];
            db[static_cast<std::size_t>(o)] += g;
            const float* wrow = &w[static_cast<std::size_t>(o) * in_width];
            float* dwrow = &dw[static_cast<std::size_t>(o) * in_width];
            for (int i = 0; i < in_width; ++i) {
                dwrow[i] += g * xv[i];
                dxv[i] += g * wrow[i];
            }
        }
    }
}

template <typename Container>
void relu_inplace(Container& x) {
    for (auto& v : x) {
        v = std::max(v, 0.0f);
    }
}

/// Stabilized sparse categorical cross-entropy on one 3-logit row.
/// grad = softmax(logits) - onehot(label).
struct XentResult {
    double loss = 0.0;
    std::array<float, 3> grad{};
};

inline XentResult softmax_xent(const std::array<float, 3>& logits, int label) {
    if (label < 0 || label >= kNumClasses) {
        throw ArgumentError("softmax_xent: label out of range");
    }
    const double maxv = std::max({logits[0], logits[1], logits[2]});
    std::array<double, 3> e{};
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        e[static_cast<std::size_t>(i)] = std::exp(static_cast<double>(logits[static_cast<std::size_t>(i)]) - maxv);
        sum += e[static_cast<std::size_t>(i)];
    }
    XentResult r;
    r.loss = std::log(sum) - (static_cast<double>(logits[static_cast<std::size_t>(label)]) - maxv);
    for (int i = 0; i < 3; ++i) {
        r.grad[static_cast<std::size_t>(i)] =
            static_cast<float>(e[static_cast<std::size_t>(i)] / sum - (i == label ? 1.0 : 0.0));
    }
    return r;
}

inline std::array<double, 3> softmax3(const std::array<float, 3>& logits) {
    const double maxv = std::max({logits[0], logits[1], logits[2]});
    std::array<double, 3> e{};
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        e[static_cast<std::size_t>(i)] = std::exp(static_cast<double>(logits[static_cast<std::size_t>(i)]) - maxv);
        sum += e[static_cast<std::size_t>(i)];
    }
    for (auto& v : e) {
        v /= sum;
    }
    return e;
}

// ---- full model ------------------------------------------------------------

/// Every intermediate needed for backpropagation and Grad-CAM.
struct ForwardCache {
    int batch = 0;
    LayerShapes shapes;
    Tensor4 input;
    std::array<Tensor4, 3> conv_act;  // post-ReLU convolution outputs
    std::array<Tensor4, 3> pool_out;
    std::array<std::vector<std::size_t>, 3> pool_argmax;
    std::array<std::vector<float>, 5> dense_in; // input to each dense layer
    std::vector<float> logits;                  // batch x 3
};

inline std::vector<float> model_forward(const ModelParams& params, const Tensor4& x, ForwardCache* cache = nullptr) {
    const ModelConfig& cfg = params.config;
    if (x.h != cfg.input_size || x.w != cfg.input_size || x.c != 1) {
        throw ShapeError("model_forward: input must be (n, s, s, 1) with s = config input_size");
    }
    const LayerShapes shapes = compute_shapes(cfg);

    ForwardCache local;
    ForwardCache& cc = cache ? *cache : local;
    cc.batch = x.n;
    cc.shapes = shapes;
    cc.input = x;

    Tensor4 cur = x;
    for (int stage = 0; stage < 3; ++stage) {
        Tensor4 z = conv2d_forward(cur, params.conv_w[static_cast<std::size_t>(stage)],
                                   params.conv_b[static_cast<std::size_t>(stage)],
                                   cfg.conv_channels[static_cast<std::size_t>(stage)]);
        relu_inplace(z.data);
        cc.conv_act[static_cast<std::size_t>(stage)] = z;
        cur = maxpool2_forward(z, cc.pool_argmax[static_cast<std::size_t>(stage)]);
        cc.pool_out[static_cast<std::size_t>(stage)] = cur;
    }

    // flatten preserves NHWC order per sample
    std::vector<float> flat = std::move(cur.data);
    int in_width = shapes.flatten;
    for (int layer = 0; layer < 5; ++layer) {
        cc.dense_in[static_cast<std::size_t>(layer)] = flat;
        const int out_width = cfg.dense_units[static_cast<std::size_t>(layer)];
        flat = dense_forward(flat, x.n, in_width, params.dense_w[static_cast<std::size_t>(layer)],
                             params.dense_b[static_cast<std::size_t>(layer)]);
        if (layer < 4) {
            relu_inplace(flat);
        }
        in_width = out_width;
    }
    cc.logits = flat;
    return flat;
}

/// Parameter gradients, same shapes as ModelParams.
struct Gradients {
    std::array<std::vector<float>, 3> conv_w, conv_b;
    std::array<std::vector<float>, 5> dense_w, dense_b;

    std::vector<std::vector<float>*> tensors() {
        std::vector<std::vector<float>*> t;
        for (int i = 0; i < 3; ++i) {
            t.push_back(&conv_w[static_cast<std::size_t>(i)]);
            t.push_back(&conv_b[static_cast<std::size_t>(i)]);
        }
        for (int i = 0; i < 5; ++i) {
            t.push_back(&dense_w[static_cast<std::size_t>(i)]);
            t.push_back(&dense_b[static_cast<std::size_t>(i)]);
        }
        return t;
    }
};

struct BackwardResult {
    Gradients grads;
    Tensor4 d_last_conv_act; // gradient at the third conv's post-ReLU output
};

/// Exact reverse-mode gradients of the logits' scalar contraction with
/// grad_logits (batch x 3). Max-pool routes through the stored argmax;
/// ReLU masks come from the cached activations.
inline BackwardResult model_backward(const ModelParams& params, const ForwardCache& cache,
                                     const std::vector<float>& grad_logits) {
    const ModelConfig& cfg = params.config;
    if (cache.batch <= 0 || cache.logits.size() != static_cast<std::size_t>(cache.batch) * kNumClasses) {
        throw ArgumentError("model_backward: cache does not match a completed forward pass");
    }
    if (grad_logits.size() != cache.logits.size()) {
        throw ShapeError("model_backward: grad_logits shape mismatch");
    }

    BackwardResult res;
    std::vector<float> grad = grad_logits;
    for (int layer = 4; layer >= 0; --layer) {
        const int out_width = cfg.dense_units[static_cast<std::size_t>(layer)];
        const int in_width = (layer == 0) ? cache.shapes.flatten : cfg.dense_units[static_cast<std::size_t>(layer - 1)];
        if (layer < 4) {
            // ReLU mask: dense_in of the next layer holds this layer's activation
            const std::vector<float>& act = cache.dense_in[static_cast<std::size_t>(layer + 1)];
            for (std::size_t i = 0; i < grad.size(); ++i) {
                if (act[i] <= 0.0f) {
                    grad[i] = 0.0f;
                }
            }
        }
        std::vector<float> dx;
        dense_backward(cache.dense_in[static_cast<std::size_t>(layer)], cache.batch, in_width,
                       params.dense_w[static_cast<std::size_t>(layer)], out_width, grad,
                       res.grads.dense_w[static_cast<std::size_t>(layer)],
                       res.grads.dense_b[static_cast<std::size_t>(layer)], dx);
        grad = std::move(dx);
    }

    // unflatten into the last pool's shape
    const Tensor4& pool3 = cache.pool_out[2];
    Tensor4 dcur(pool3.n, pool3.h, pool3.w, pool3.c);
    dcur.data = std::move(grad);

    for (int stage = 2; stage >= 0; --stage) {
        const Tensor4& act = cache.conv_act[static_cast<std::size_t>(stage)];
        Tensor4 dact = maxpool2_backward(act, dcur, cache.pool_argmax[static_cast<std::size_t>(stage)]);
        if (stage == 2) {
            res.d_last_conv_act = dact;
        }
        // ReLU mask on the conv activation
        for (std::size_t i = 0; i < dact.data.size(); ++i) {
            if (act.data[i] <= 0.0f) {
                dact.data[i] = 0.0f;
            }
        }
        const Tensor4& x = (stage == 0) ? cache.input : cache.pool_out[static_cast<std::size_t>(stage - 1)];
        Tensor4 dx;
        conv2d_backward(x, params.conv_w[static_cast<std::size_t>(stage)],
                        cfg.conv_channels[static_cast<std::size_t>(stage)], dact,
                        res.grads.conv_w[static_cast<std::size_t>(stage)],
                        res.grads.conv_b[static_cast<std::size_t>(stage)], dx);
        dcur = std::move(dx);
    }
    return res;
}

// ---- Adam ------------------------------------------------------------------

/// Adam optimizer state: first/second moments mirroring the parameter
/// tensors plus the step counter.
struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-7;
    long t = 0;
    std::vector<std::vector<float>> m, v;

    static AdamState for_params(const ModelParams& params, double lr = 1e-3) {
        AdamState s;
        s.lr = lr;
        for (const auto* t : params.tensors()) {
            s.m.emplace_back(t->size(), 0.0f);
            s.v.emplace_back(t->size(), 0.0f);
        }
        return s;
    }
};

inline void adam_step(ModelParams& params, Gradients& grads, AdamState& state) {
    auto pt = params.tensors();
    auto gt = grads.tensors();
    if (state.m.size() != pt.size()) {
        throw ArgumentError("adam_step: state does not match parameters");
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t k = 0; k < pt.size(); ++k) {
        std::vector<float>& p = *pt[k];
        const std::vector<float>& g = *gt[k];
        std::vector<float>& m = state.m[k];
        std::vector<float>& v = state.v[k];
        if (g.size() != p.size()) {
            throw ShapeError("adam_step: gradient shape mismatch");
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = g[i];
            const double mi = state.beta1 * m[i] + (1.0 - state.beta1) * gi;
            const double vi = state.beta2 * v[i] + (1.0 - state.beta2) * gi * gi;
            m[i] = static_cast<float>(mi);
            v[i] = static_cast<float>(vi);
            const double mhat = mi / bc1;
            const double vhat = vi / bc2;
            p[i] = static_cast<float>(p[i] - state.lr * mhat / (std::sqrt(vhat) + state.eps));
        }
    }
}

// ---- inference -------------------------------------------------------------

struct SlicePrediction {
    int cls = 0;
    std::array<double, 3> probs{};
};

/// Classify one preprocessed slice (must already be input_size x input_size,
/// intensities in [0,1]). Argmax ties resolve to the lowest class index.
inline SlicePrediction predict_slice(const ModelParams& params, const Slice2D& slice) {
    if (slice.h != params.config.input_size || slice.w != params.config.input_size) {
        throw ShapeError("predict_slice: slice dims must equal config input_size");
    }
    Tensor4 x(1, slice.h, slice.w, 1);
    x.data = slice.data;
    const std::vector<float> logits = model_forward(params, x);
    const std::array<float, 3> row{logits[0], logits[1], logits[2]};
    SlicePrediction p;
    p.probs = softmax3(row);
    p.cls = 0;
    for (int c = 1; c < 3; ++c) {
        if (row[static_cast<std::size_t>(c)] > row[static_cast<std::size_t>(p.cls)]) {
            p.cls = c;
        }
    }
    return p;
}

/// Per-volume report: fraction of slices per class and the majority class.
struct VolumePrediction {
    std::array<double, 3> pct{};
    int majority = 0;
    std::vector<SlicePrediction> slices;
};

inline VolumePrediction tally_volume(const std::vector<SlicePrediction>& slice_preds) {
    if (slice_preds.empty()) {
        throw ArgumentError("tally_volume: no slice predictions");
    }
    VolumePrediction v;
    v.slices = slice_preds;
    std::array<long, 3> counts{};
    for (const SlicePrediction& p : slice_preds) {
        counts[static_cast<std::size_t>(p.cls)] += 1;
    }
    for (int c = 0; c < 3; ++c) {
        v.pct[static_cast<std::size_t>(c)] =
            static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(slice_preds.size());
    }
    v.majority = 0;
    for (int c = 1; c < 3; ++c) {
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(v.majority)]) {
            v.majority = c;
        }
    }
    return v;
}

} // namespace motionforge
