#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "motionforge/errors.hpp"
#include "motionforge/otsu.hpp"
#include "motionforge/volume.hpp"

namespace motionforge {

/// Average edge strength: Sobel gradient magnitude averaged over the Otsu
/// edge mask. Lower values indicate blur, an indirect motion signature.
/// Returns 0 for slices with a constant gradient map or an empty mask.
inline double aes(const Slice2D& slice) {
    const int h = slice.h, w = slice.w;
    // replicate-edge sample
    auto px = [&](int r, int c) -> double {
        r = std::clamp(r, 0, h - 1);
        c = std::clamp(c, 0, w - 1);
        return slice.at(r, c);
    };

    std::vector<double> g(static_cast<std::size_t>(h) * static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double gx = (px(r - 1, c + 1) + 2.0 * px(r, c + 1) + px(r + 1, c + 1)) -
                              (px(r - 1, c - 1) + 2.0 * px(r, c - 1) + px(r + 1, c - 1));
            const double gy = (px(r + 1, c - 1) + 2.0 * px(r + 1, c) + px(r + 1, c + 1)) -
                              (px(r - 1, c - 1) + 2.0 * px(r - 1, c) + px(r - 1, c + 1));
            g[slice.index(r, c)] = std::sqrt(gx * gx + gy * gy);
        }
    }

    double threshold;
    try {
        threshold = otsu_thresholds(g, 1)[0];
    } catch (const DegenerateError&) {
        return 0.0; // constant gradient map: no edges
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : g) {
        if (v > threshold) {
            sum += v;
            ++count;
        }
    }
    return (count == 0) ? 0.0 : sum / static_cast<double>(count);
}

struct SpearmanResult {
    double rho = 0.0;
    double t_stat = 0.0; // large-sample indicator only
};

namespace detail {

template <typename T>
std::vector<double> average_ranks(const std::vector<T>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && !(x[order[i]] < x[order[j + 1]])) {
            ++j;
        }
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

} // namespace detail

/// Spearman's rank correlation with average ranks for ties; the t statistic
/// rho * sqrt((n-2)/(1-rho^2)) is reported alongside.
template <typename T, typename U>
SpearmanResult spearman(const std::vector<T>& x, const std::vector<U>& y) {
    if (x.size() != y.size()) {
        throw ArgumentError("spearman: length mismatch");
    }
    const std::size_t n = x.size();
    if (n < 3) {
        throw ArgumentError("spearman: need at least 3 samples");
    }
    const std::vector<double> rx = detail::average_ranks(x);
    const std::vector<double> ry = detail::average_ranks(y);

    const double mean = (static_cast<double>(n) + 1.0) / 2.0;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DegenerateError("spearman: correlation undefined for constant input");
    }
    SpearmanResult r;
    r.rho = sxy / std::sqrt(sxx * syy);
    const double denom = 1.0 - r.rho * r.rho;
    r.t_stat = (denom <= 0.0) ? std::copysign(std::numeric_limits<double>::infinity(), r.rho)
                              : r.rho * std::sqrt((static_cast<double>(n) - 2.0) / denom);
    return r;
}

/// Cohen's chance-corrected agreement between two {0,1,2} labelings.
inline double cohens_kappa(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) {
        throw ArgumentError("kappa: length mismatch");
    }
    if (a.empty()) {
        throw ArgumentError("kappa: empty input");
    }
    const double n = static_cast<double>(a.size());
    std::array<double, 3> row{}, col{};
    double agree = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0 || a[i] > 2 || b[i] < 0 || b[i] > 2) {
            throw ArgumentError("kappa: labels must be in {0,1,2}");
        }
        row[static_cast<std::size_t>(a[i])] += 1.0;
        col[static_cast<std::size_t>(b[i])] += 1.0;
        if (a[i] == b[i]) {
            agree += 1.0;
        }
    }
    const double p_o = agree / n;
    double p_e = 0.0;
    for (int c = 0; c < 3; ++c) {
        p_e += row[static_cast<std::size_t>(c)] * col[static_cast<std::size_t>(c)] / (n * n);
    }
    if (p_e >= 1.0) {
        throw DegenerateError("kappa: agreement degenerate (both labelings constant)");
    }
    return (p_o - p_e) / (1.0 - p_e);
}

/// 3x3 confusion counts; rows are truth, columns are prediction.
struct ConfusionMatrix {
    std::array<std::array<long, 3>, 3> m{};

    long total() const {
        long t = 0;
        for (const auto& row : m) {
            for (long v : row) {
                t += v;
            }
        }
        return t;
    }
    long row_sum(int r) const { return m[r][0] + m[r][1] + m[r][2]; }
    long col_sum(int c) const { return m[0][c] + m[1][c] + m[2][c]; }
};

inline ConfusionMatrix confusion(const std::vector<int>& preds, const std::vector<int>& truth) {
    if (preds.size() != truth.size()) {
        throw ArgumentError("confusion: length mismatch");
    }
    if (preds.empty()) {
        throw ArgumentError("confusion: empty input");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i] < 0 || preds[i] > 2 || truth[i] < 0 || truth[i] > 2) {
            throw ArgumentError("confusion: labels must be in {0,1,2}");
        }
        cm.m[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(preds[i])] += 1;
    }
    return cm;
}

struct MacroPr {
    double precision = 0.0;
    double recall = 0.0;
};

/// Macro-averaged precision and recall over classes with truth support.
/// A supported class that is never predicted contributes precision 0.
inline MacroPr macro_pr(const ConfusionMatrix& cm) {
    if (cm.total() == 0) {
        throw ArgumentError("macro_pr: empty confusion matrix");
    }
    double psum = 0.0, rsum = 0.0;
    int included = 0;
    for (int c = 0; c < 3; ++c) {
        const long support = cm.row_sum(c);
        if (support == 0) {
            continue;
        }
        ++included;
        const long tp = cm.m[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        const long predicted = cm.col_sum(c);
        psum += (predicted > 0) ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
        rsum += static_cast<double>(tp) / static_cast<double>(support);
    }
    return {psum / included, rsum / included};
}

inline double accuracy(const ConfusionMatrix& cm) {
    const long t = cm.total();
    if (t == 0) {
        throw ArgumentError("accuracy: empty confusion matrix");
    }
    return static_cast<double>(cm.m[0][0] + cm.m[1][1] + cm.m[2][2]) / static_cast<double>(t);
}

/// One-vs-rest ROC curve with trapezoidal AUC. Ties are grouped per unique
/// score so the area equals the pairwise win/tie counting probability.
struct RocCurve {
    std::vector<std::pair<double, double>> points; // (fpr, tpr)
    double auc = 0.0;
};

inline std::array<std::optional<RocCurve>, 3> roc_auc_ovr(const std::vector<std::array<double, 3>>& scores,
                                                          const std::vector<int>& truth) {
    if (scores.size() != truth.size()) {
        throw ArgumentError("roc: length mismatch");
    }
    std::array<std::optional<RocCurve>, 3> out;
    const std::size_t n = scores.size();
    for (int cls = 0; cls < 3; ++cls) {
        long pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (truth[i] == cls) {
                ++pos;
            }
        }
        const long neg = static_cast<long>(n) - pos;
        if (pos == 0 || neg == 0) {
            out[static_cast<std::size_t>(cls)] = std::nullopt;
            continue;
        }

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scores[a][static_cast<std::size_t>(cls)] > scores[b][static_cast<std::size_t>(cls)];
        });

        RocCurve curve;
        curve.points.emplace_back(0.0, 0.0);
        long tp = 0, fp = 0;
        long area2 = 0; // 2 * area in count units; exact integer arithmetic
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            const double s = scores[order[i]][static_cast<std::size_t>(cls)];
            long dtp = 0, dfp = 0;
            while (j < n && scores[order[j]][static_cast<std::size_t>(cls)] == s) {
                if (truth[order[j]] == cls) {
                    ++dtp;
                } else {
                    ++dfp;
                }
                ++j;
            }
            area2 += dfp * (2 * tp + dtp);
            tp += dtp;
            fp += dfp;
            curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(neg),
                                      static_cast<double>(tp) / static_cast<double>(pos));
            i = j;
        }
        curve.auc = static_cast<double>(area2) / (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
        out[static_cast<std::size_t>(cls)] = std::move(curve);
    }
    return out;
}

/// Bin AES values into the three motion classes with two-threshold Otsu.
/// AES is inversely related to motion, so the highest-AES bin maps to
/// class 0 and the lowest to class 2.
inline std::vector<int> aes_to_classes(const std::vector<double>& aes_values) {
    const std::vector<double> t = otsu_thresholds(aes_values, 2);
    std::vector<int> labels;
    labels.reserve(aes_values.size());
    for (double v : aes_values) {
        if (v <= t[0]) {
            labels.push_back(2);
        } else if (v <= t[1]) {
            labels.push_back(1);
        } else {
            labels.push_back(0);
        }
    }
    return labels;
}

} // namespace motionforge
