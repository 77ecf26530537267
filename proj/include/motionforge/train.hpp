#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "motionforge/dataset.hpp"
#include "motionforge/errors.hpp"
#include "motionforge/model.hpp"
#include "motionforge/mrvol.hpp"
#include "motionforge/nifti.hpp"
#include "motionforge/rng.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

/// One training/evaluation sample: a preprocessed slice plus provenance.
struct SliceRecord {
    std::string volume_path;
    std::string subject;
    int slice_index = 0;
    int label = 0;
    std::vector<float> pixels; // input_size * input_size
};

struct SliceSets {
    int input_size = 0;
    std::vector<SliceRecord> train, val, test;
};

/// Slice extraction and preprocessing options shared by training and
/// inference.
struct PreprocessOptions {
    int input_size = 64;
    int slice_axis = 2;
    int slice_count = 14; // per volume; clamped to the axis size
    bool crop = false;
};

inline Volume3D read_volume_any(const std::string& path) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".nii") == 0) {
        return read_nifti(path);
    }
    return read_mrvol(path);
}

/// Extract the centered slice block of a normalized volume and bring each
/// slice to the model input size (foreground crop or plain resampling).
inline std::vector<Slice2D> preprocess_volume(const Volume3D& vol, const PreprocessOptions& opts) {
    const int n = vol.dim(opts.slice_axis);
    const int count = std::min(opts.slice_count, n);
    std::vector<Slice2D> slices = extract_slices(vol, opts.slice_axis, count);
    for (Slice2D& s : slices) {
        s = opts.crop ? crop_to_foreground_square(s, opts.input_size).slice
                      : resample_bilinear(s, opts.input_size, opts.input_size);
    }
    return slices;
}

/// Load every manifest volume, normalize, slice, preprocess, and group the
/// records by split tag. Paths are resolved relative to `base_dir` unless
/// absolute.
inline SliceSets load_slices(const DatasetManifest& manifest, const std::string& base_dir,
                             const PreprocessOptions& opts) {
    SliceSets sets;
    sets.input_size = opts.input_size;
    for (const ManifestEntry& e : manifest.entries) {
        const std::string path =
            (!e.path.empty() && e.path.front() == '/') ? e.path : base_dir + "/" + e.path;
        const Volume3D vol = normalize_intensity(read_volume_any(path));
        const std::vector<Slice2D> slices = preprocess_volume(vol, opts);
        const int n = vol.dim(opts.slice_axis);
        const int count = std::min(opts.slice_count, n);
        const int start = (n - count) / 2;
        for (std::size_t i = 0; i < slices.size(); ++i) {
            SliceRecord r;
            r.volume_path = e.path;
            r.subject = e.subject;
            r.slice_index = start + static_cast<int>(i);
            r.label = e.label;
            r.pixels = slices[i].data;
            auto* target = (e.split == "train") ? &sets.train : (e.split == "val") ? &sets.val : &sets.test;
            target->push_back(std::move(r));
        }
    }
    return sets;
}

struct TrainOptions {
    int epochs = 20;
    int batch_size = 32;
    double learning_rate = 1e-3;
    std::uint64_t shuffle_seed = 0;
};

struct EpochMetrics {
    int epoch = 0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    ModelParams params;
    AdamState adam;
    std::vector<EpochMetrics> epochs;
};

namespace detail {

inline Tensor4 batch_tensor(const std::vector<SliceRecord>& records, const std::vector<std::size_t>& order,
                            std::size_t begin, std::size_t end, int input_size) {
    Tensor4 x(static_cast<int>(end - begin), input_size, input_size, 1);
    for (std::size_t k = begin; k < end; ++k) {
        const SliceRecord& r = records[order[k]];
        if (r.pixels.size() != static_cast<std::size_t>(input_size) * input_size) {
            throw ShapeError("train: slice size does not match model input");
        }
        std::copy(r.pixels.begin(), r.pixels.end(),
                  x.data.begin() + static_cast<std::ptrdiff_t>((k - begin) * r.pixels.size()));
    }
    return x;
}

struct EvalPass {
    double loss = 0.0;
    double accuracy = 0.0;
};

inline EvalPass evaluate_records(const ModelParams& params, const std::vector<SliceRecord>& records,
                                 int batch_size) {
    std::vector<std::size_t> order(records.size());
    std::iota(order.begin(), order.end(), 0);
    double loss_sum = 0.0;
    long correct = 0;
    for (std::size_t begin = 0; begin < records.size(); begin += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(records.size(), begin + static_cast<std::size_t>(batch_size));
        const Tensor4 x = batch_tensor(records, order, begin, end, params.config.input_size);
        const std::vector<float> logits = model_forward(params, x);
        for (std::size_t k = begin; k < end; ++k) {
            const std::size_t row = k - begin;
            const std::array<float, 3> lg{logits[3 * row], logits[3 * row + 1], logits[3 * row + 2]};
            loss_sum += softmax_xent(lg, records[k].label).loss;
            int cls = 0;
            for (int c = 1; c < 3; ++c) {
                if (lg[static_cast<std::size_t>(c)] > lg[static_cast<std::size_t>(cls)]) {
                    cls = c;
                }
            }
            if (cls == records[k].label) {
                ++correct;
            }
        }
    }
    EvalPass out;
    out.loss = loss_sum / static_cast<double>(records.size());
    out.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
    return out;
}

} // namespace detail

/// Deterministic minibatch training: per epoch, one seeded shuffle of the
/// training slices, mean-reduced gradients per batch, one adam_step per
/// batch. Throws NumericError if the loss goes non-finite.
inline TrainResult train(const SliceSets& sets, const ModelConfig& config, const TrainOptions& opts = {}) {
    if (sets.train.empty() || sets.val.empty()) {
        throw ArgumentError("train: need non-empty train and val splits");
    }
    if (opts.epochs < 1 || opts.batch_size < 1) {
        throw ArgumentError("train: epochs and batch_size must be >= 1");
    }

    TrainResult result;
    result.params = init_params(config);
    result.adam = AdamState::for_params(result.params, opts.learning_rate);
    Rng shuffle_rng(opts.shuffle_seed);

    std::vector<std::size_t> order(sets.train.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
        shuffle(order, shuffle_rng);

        double loss_sum = 0.0;
        long correct = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += static_cast<std::size_t>(opts.batch_size)) {
            const std::size_t end = std::min(order.size(), begin + static_cast<std::size_t>(opts.batch_size));
            const std::size_t bn = end - begin;
            const Tensor4 x = detail::batch_tensor(sets.train, order, begin, end, config.input_size);

            ForwardCache cache;
            const std::vector<float> logits = model_forward(result.params, x, &cache);

            std::vector<float> grad_logits(logits.size());
            for (std::size_t k = 0; k < bn; ++k) {
                const SliceRecord& r = sets.train[order[begin + k]];
                const std::array<float, 3> lg{logits[3 * k], logits[3 * k + 1], logits[3 * k + 2]};
                const XentResult xr = softmax_xent(lg, r.label);
                loss_sum += xr.loss;
                for (int c = 0; c < 3; ++c) {
                    grad_logits[3 * k + static_cast<std::size_t>(c)] =
                        xr.grad[static_cast<std::size_t>(c)] / static_cast<float>(bn);
                }
                int cls = 0;
                for (int c = 1; c < 3; ++c) {
                    if (lg[static_cast<std::size_t>(c)] > lg[static_cast<std::size_t>(cls)]) {
                        cls = c;
                    }
                }
                if (cls == r.label) {
                    ++correct;
                }
            }
            if (!std::isfinite(loss_sum)) {
                throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch));
            }

            BackwardResult back = model_backward(result.params, cache, grad_logits);
            adam_step(result.params, back.grads, result.adam);
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.train_loss = loss_sum / static_cast<double>(order.size());
        m.train_accuracy = static_cast<double>(correct) / static_cast<double>(order.size());
        const detail::EvalPass val = detail::evaluate_records(result.params, sets.val, opts.batch_size);
        m.val_loss = val.loss;
        m.val_accuracy = val.accuracy;
        result.epochs.push_back(m);
    }
    return result;
}

} // namespace motionforge
