#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

#include "motionforge/errors.hpp"

namespace motionforge {

inline constexpr int kOtsuBins = 256;

namespace detail {

struct OtsuHistogram {
    std::array<double, kOtsuBins> count{};
    std::array<double, kOtsuBins> center{};
    double lo = 0.0;
    double hi = 0.0;
    double bin_width = 0.0;
};

template <typename T>
OtsuHistogram otsu_histogram(const std::vector<T>& values) {
    if (values.size() < 2) {
        throw DegenerateError("otsu: need at least 2 values");
    }
    double lo = static_cast<double>(values[0]);
    double hi = lo;
    for (const T& v : values) {
        const double d = static_cast<double>(v);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    if (!(hi > lo)) {
        throw DegenerateError("otsu: all values identical");
    }
    OtsuHistogram h;
    h.lo = lo;
    h.hi = hi;
    h.bin_width = (hi - lo) / kOtsuBins;
    for (int b = 0; b < kOtsuBins; ++b) {
        h.center[b] = lo + (b + 0.5) * h.bin_width;
    }
    for (const T& v : values) {
        int b = static_cast<int>((static_cast<double>(v) - lo) / (hi - lo) * kOtsuBins);
        b = std::clamp(b, 0, kOtsuBins - 1);
        h.count[b] += 1.0;
    }
    return h;
}

// Between-class variance of the histogram split at bin boundaries. `cuts`
// holds the last bin index of each class except the final one. Sums run in
// ascending bin order so the arithmetic is reproducible.
inline double between_class_variance(const OtsuHistogram& h, const std::vector<int>& cuts) {
    double total_w = 0.0;
    double total_m = 0.0;
    for (int b = 0; b < kOtsuBins; ++b) {
        total_w += h.count[b];
        total_m += h.count[b] * h.center[b];
    }
    const double mean_total = total_m / total_w;

    double variance = 0.0;
    int begin = 0;
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
        const int end = (k < cuts.size()) ? cuts[k] : kOtsuBins - 1;
        double w = 0.0;
        double m = 0.0;
        for (int b = begin; b <= end; ++b) {
            w += h.count[b];
            m += h.count[b] * h.center[b];
        }
        if (w > 0.0) {
            const double mu = m / w;
            variance += w * (mu - mean_total) * (mu - mean_total);
        }
        begin = end + 1;
    }
    return variance;
}

} // namespace detail

/// Multilevel Otsu thresholding: 256-bin histogram over [min, max],
/// exhaustive search over cut positions maximizing between-class variance.
/// Returns k thresholds in value units (bin upper edges); classes are
/// {v <= t1}, ({t1 < v <= t2},) {v > tk}. Ties resolve to the
/// lexicographically lowest cut tuple.
template <typename T>
std::vector<double> otsu_thresholds(const std::vector<T>& values, int k) {
    if (k != 1 && k != 2) {
        throw ArgumentError("otsu: k must be 1 or 2");
    }
    const detail::OtsuHistogram h = detail::otsu_histogram(values);

    std::vector<int> best;
    double best_var = -1.0;
    if (k == 1) {
        for (int t = 0; t < kOtsuBins - 1; ++t) {
            const double v = detail::between_class_variance(h, {t});
            if (v > best_var) {
                best_var = v;
                best = {t};
            }
        }
    } else {
        for (int t1 = 0; t1 < kOtsuBins - 2; ++t1) {
            for (int t2 = t1 + 1; t2 < kOtsuBins - 1; ++t2) {
                const double v = detail::between_class_variance(h, {t1, t2});
                if (v > best_var) {
                    best_var = v;
                    best = {t1, t2};
                }
            }
        }
    }

    std::vector<double> thresholds;
    thresholds.reserve(best.size());
    for (int t : best) {
        thresholds.push_back(h.lo + (t + 1) * h.bin_width);
    }
    return thresholds;
}

} // namespace motionforge
