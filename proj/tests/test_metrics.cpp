#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "motionforge/metrics.hpp"
#include "motionforge/otsu.hpp"

#include "test_util.hpp"

using namespace motionforge;

namespace {

// Independent exhaustive Otsu oracle: same histogram definition (256 bins,
// centers as values, bin upper edges returned), direct summation per
// candidate cut, lexicographically lowest tie-break.
struct OracleHist {
    std::array<double, 256> count{};
    std::array<double, 256> center{};
    double lo = 0.0, width = 0.0;
};

OracleHist oracle_hist(const std::vector<double>& values) {
    OracleHist h;
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    h.lo = lo;
    h.width = (hi - lo) / 256.0;
    for (int b = 0; b < 256; ++b) {
        h.center[b] = lo + (b + 0.5) * h.width;
    }
    for (double v : values) {
        int b = static_cast<int>((v - lo) / (hi - lo) * 256.0);
        b = std::clamp(b, 0, 255);
        h.count[b] += 1.0;
    }
    return h;
}

double oracle_between_var(const OracleHist& h, std::vector<int> cuts) {
    double tw = 0.0, tm = 0.0;
    for (int b = 0; b < 256; ++b) {
        tw += h.count[b];
        tm += h.count[b] * h.center[b];
    }
    const double mu_t = tm / tw;
    cuts.push_back(255);
    double var = 0.0;
    int begin = 0;
    for (int end : cuts) {
        double w = 0.0, m = 0.0;
        for (int b = begin; b <= end; ++b) {
            w += h.count[b];
            m += h.count[b] * h.center[b];
        }
        if (w > 0.0) {
            const double mu = m / w;
            var += w * (mu - mu_t) * (mu - mu_t);
        }
        begin = end + 1;
    }
    return var;
}

std::vector<double> oracle_otsu(const std::vector<double>& values, int k) {
    const OracleHist h = oracle_hist(values);
    std::vector<int> best;
    double best_var = -1.0;
    if (k == 1) {
        for (int t = 0; t < 255; ++t) {
            const double v = oracle_between_var(h, {t});
            if (v > best_var) {
                best_var = v;
                best = {t};
            }
        }
    } else {
        for (int t1 = 0; t1 < 254; ++t1) {
            for (int t2 = t1 + 1; t2 < 255; ++t2) {
                const double v = oracle_between_var(h, {t1, t2});
                if (v > best_var) {
                    best_var = v;
                    best = {t1, t2};
                }
            }
        }
    }
    std::vector<double> out;
    for (int t : best) {
        out.push_back(h.lo + (t + 1) * h.width);
    }
    return out;
}

// minimize within-class variance instead: the k-means-style route
double oracle_within_var(const OracleHist& h, int cut) {
    double var = 0.0;
    for (int part = 0; part < 2; ++part) {
        const int b0 = part == 0 ? 0 : cut + 1;
        const int b1 = part == 0 ? cut : 255;
        double w = 0.0, m = 0.0;
        for (int b = b0; b <= b1; ++b) {
            w += h.count[b];
            m += h.count[b] * h.center[b];
        }
        if (w > 0.0) {
            const double mu = m / w;
            for (int b = b0; b <= b1; ++b) {
                var += h.count[b] * (h.center[b] - mu) * (h.center[b] - mu);
            }
        }
    }
    return var;
}

} // namespace

TEST_CASE("otsu k=1 on a two-spike histogram picks the lowest separating bin") {
    std::vector<double> values;
    for (int i = 0; i < 50; ++i) {
        values.push_back(0.0);
        values.push_back(255.0);
    }
    const auto t = otsu_thresholds(values, 1);
    REQUIRE(t.size() == 1);
    // any bin in [0, 254] separates equally; ties go to the lowest -> bin 0
    CHECK(t[0] == Catch::Approx(0.0 + 1.0 * 255.0 / 256.0));
    CHECK(t[0] == oracle_otsu(values, 1)[0]);
}

TEST_CASE("otsu k=2 separates three equal spikes at the lowest cut pair") {
    std::vector<double> values;
    for (int i = 0; i < 40; ++i) {
        values.push_back(0.0);
        values.push_back(128.0);
        values.push_back(255.0);
    }
    const auto t = otsu_thresholds(values, 2);
    REQUIRE(t.size() == 2);
    const auto expect = oracle_otsu(values, 2);
    CHECK(t[0] == expect[0]);
    CHECK(t[1] == expect[1]);
    // perfect separation: 0s below t1, 128s between, 255s above
    int c0 = 0, c1 = 0, c2 = 0;
    for (double v : values) {
        (v <= t[0] ? c0 : (v <= t[1] ? c1 : c2))++;
    }
    CHECK(c0 == 40);
    CHECK(c1 == 40);
    CHECK(c2 == 40);
}

TEST_CASE("otsu equals the exhaustive oracle on random inputs") {
    Rng rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 20 + static_cast<int>(uniform_index(rng, 200));
        std::vector<double> values(static_cast<std::size_t>(n));
        for (double& v : values) {
            v = uniform_range(rng, -3.0, 9.0);
        }
        const auto t1 = otsu_thresholds(values, 1);
        const auto o1 = oracle_otsu(values, 1);
        REQUIRE(t1 == o1);
        const auto t2 = otsu_thresholds(values, 2);
        const auto o2 = oracle_otsu(values, 2);
        REQUIRE(t2 == o2);
    }
}

TEST_CASE("otsu k=1 agrees with the within-class-variance minimizer") {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> values(150);
        for (double& v : values) {
            v = uniform_range(rng, 0.0, 1.0);
        }
        const OracleHist h = oracle_hist(values);
        int best_cut = 0;
        double best = oracle_within_var(h, 0);
        for (int cut = 1; cut < 255; ++cut) {
            const double w = oracle_within_var(h, cut);
            if (w < best) {
                best = w;
                best_cut = cut;
            }
        }
        const double expect = h.lo + (best_cut + 1) * h.width;
        CHECK(otsu_thresholds(values, 1)[0] == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("otsu rejects degenerate input") {
    CHECK_THROWS_AS(otsu_thresholds(std::vector<double>{1.0, 1.0, 1.0}, 1), DegenerateError);
    CHECK_THROWS_AS(otsu_thresholds(std::vector<double>{1.0}, 1), DegenerateError);
}

TEST_CASE("aes: constant slice has no edges") {
    Slice2D s(16, 16);
    std::fill(s.data.begin(), s.data.end(), 0.7f);
    CHECK(aes(s) == 0.0);
}

TEST_CASE("aes of a vertical step is the Sobel magnitude 4") {
    Slice2D s(12, 16);
    for (int r = 0; r < 12; ++r) {
        for (int c = 8; c < 16; ++c) {
            s.at(r, c) = 1.0f;
        }
    }
    CHECK(aes(s) == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("aes strictly decreases under box blur") {
    Slice2D s = mftest::random_slice(24, 24, 5);
    for (int r = 0; r < 24; ++r) {
        for (int c = 12; c < 24; ++c) {
            s.at(r, c) += 2.0f; // inject a strong step edge
        }
    }
    Slice2D blurred(24, 24);
    for (int r = 0; r < 24; ++r) {
        for (int c = 0; c < 24; ++c) {
            double acc = 0.0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int rr = std::clamp(r + dr, 0, 23);
                    const int cc = std::clamp(c + dc, 0, 23);
                    acc += s.at(rr, cc);
                }
            }
            blurred.at(r, c) = static_cast<float>(acc / 9.0);
        }
    }
    CHECK(aes(blurred) < aes(s));
}

TEST_CASE("aes is invariant to pre-normalization intensity shifts") {
    // quantized pixels and a power-of-two shift keep the float arithmetic
    // exact, so normalization cancels the shift bit-for-bit
    Slice2D a = mftest::random_slice(20, 20, 13);
    for (float& v : a.data) {
        v = std::round(v * 64.0f) / 64.0f;
    }
    Slice2D shifted = a;
    for (float& v : shifted.data) {
        v += 1.0f;
    }
    auto normalize = [](const Slice2D& s) {
        float lo = s.data[0], hi = s.data[0];
        for (float v : s.data) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        Slice2D out = s;
        for (float& v : out.data) {
            v = (v - lo) / (hi - lo);
        }
        return out;
    };
    CHECK(aes(normalize(a)) == aes(normalize(shifted)));
}

TEST_CASE("spearman: monotone and anti-monotone sequences") {
    CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30}).rho == Catch::Approx(1.0));
    CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{30, 20, 10}).rho == Catch::Approx(-1.0));
}

TEST_CASE("spearman handles ties with average ranks") {
    const std::vector<double> x{1, 2, 2, 3};
    const std::vector<double> y{1, 2, 3, 4};
    // hand-ranked oracle: ranks x = (1, 2.5, 2.5, 4), y = (1, 2, 3, 4)
    const std::vector<double> rx{1.0, 2.5, 2.5, 4.0};
    const std::vector<double> ry{1.0, 2.0, 3.0, 4.0};
    double mx = 2.5, my = 2.5, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < 4; ++i) {
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
        sxy += (rx[i] - mx) * (ry[i] - my);
    }
    const double expect = sxy / std::sqrt(sxx * syy);
    CHECK(spearman(x, y).rho == Catch::Approx(expect).margin(1e-12));
}

TEST_CASE("spearman is invariant under strictly increasing transforms") {
    Rng rng(3);
    std::vector<double> x(25), y(25);
    for (int i = 0; i < 25; ++i) {
        x[i] = uniform_range(rng, -5, 5);
        y[i] = uniform_range(rng, -5, 5);
    }
    const double base = spearman(x, y).rho;
    std::vector<double> xt = x, yt = y;
    for (double& v : xt) {
        v = std::exp(0.5 * v);
    }
    for (double& v : yt) {
        v = v * v * v + 2.0 * v;
    }
    CHECK(spearman(xt, yt).rho == Catch::Approx(base).margin(1e-12));
}

TEST_CASE("spearman rejects degenerate input") {
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), DegenerateError);
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ArgumentError);
    CHECK_THROWS_AS(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), ArgumentError);
}

TEST_CASE("cohens_kappa worked examples") {
    CHECK(cohens_kappa({0, 1, 2, 0, 1}, {0, 1, 2, 0, 1}) == Catch::Approx(1.0));
    // p_o = 0.5, p_e = 0.5 -> kappa 0
    CHECK(cohens_kappa({0, 0, 1, 1}, {0, 1, 0, 1}) == Catch::Approx(0.0).margin(1e-12));
    // constant rater: p_o equals p_e, kappa 0
    CHECK(cohens_kappa({0, 1, 2, 1}, {1, 1, 1, 1}) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("cohens_kappa is symmetric and rejects double-constant input") {
    const std::vector<int> a{0, 1, 2, 0, 1, 2, 0};
    const std::vector<int> b{0, 1, 1, 0, 2, 2, 1};
    CHECK(cohens_kappa(a, b) == Catch::Approx(cohens_kappa(b, a)));
    CHECK_THROWS_AS(cohens_kappa({1, 1}, {1, 1}), DegenerateError);
}

TEST_CASE("confusion, macro precision/recall and accuracy") {
    SECTION("perfect predictions") {
        const std::vector<int> t{0, 1, 2, 0, 1, 2};
        const ConfusionMatrix cm = confusion(t, t);
        CHECK(accuracy(cm) == 1.0);
        const MacroPr pr = macro_pr(cm);
        CHECK(pr.precision == 1.0);
        CHECK(pr.recall == 1.0);
    }

    SECTION("worked example rows [[5,0,0],[0,4,1],[0,2,3]]") {
        std::vector<int> truth, pred;
        auto add = [&](int t, int p, int n) {
            for (int i = 0; i < n; ++i) {
                truth.push_back(t);
                pred.push_back(p);
            }
        };
        add(0, 0, 5);
        add(1, 1, 4);
        add(1, 2, 1);
        add(2, 1, 2);
        add(2, 2, 3);
        const ConfusionMatrix cm = confusion(pred, truth);
        CHECK(cm.m[0][0] == 5);
        CHECK(cm.m[1][2] == 1);
        CHECK(cm.m[2][1] == 2);
        const MacroPr pr = macro_pr(cm);
        CHECK(pr.recall == Catch::Approx((1.0 + 0.8 + 0.6) / 3.0));
        CHECK(pr.precision == Catch::Approx((1.0 + 4.0 / 6.0 + 3.0 / 4.0) / 3.0));
        CHECK(accuracy(cm) == Catch::Approx(12.0 / 15.0));
    }

    SECTION("zero-support classes are excluded from the macro means") {
        const std::vector<int> truth{0, 0, 1, 1};
        const std::vector<int> pred{0, 1, 1, 1};
        const ConfusionMatrix cm = confusion(pred, truth);
        const MacroPr pr = macro_pr(cm);
        CHECK(pr.recall == Catch::Approx((0.5 + 1.0) / 2.0));
        CHECK(pr.precision == Catch::Approx((1.0 + 2.0 / 3.0) / 2.0));
    }

    SECTION("label permutation leaves the macro means unchanged") {
        Rng rng(8);
        std::vector<int> truth, pred;
        for (int i = 0; i < 60; ++i) {
            truth.push_back(static_cast<int>(uniform_index(rng, 3)));
            pred.push_back(static_cast<int>(uniform_index(rng, 3)));
        }
        const MacroPr base = macro_pr(confusion(pred, truth));
        const int perm[3] = {2, 0, 1};
        std::vector<int> truth_p, pred_p;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            truth_p.push_back(perm[truth[i]]);
            pred_p.push_back(perm[pred[i]]);
        }
        const MacroPr permuted = macro_pr(confusion(pred_p, truth_p));
        CHECK(permuted.precision == Catch::Approx(base.precision).margin(1e-12));
        CHECK(permuted.recall == Catch::Approx(base.recall).margin(1e-12));
    }

    SECTION("empty input is rejected") {
        CHECK_THROWS_AS(confusion({}, {}), ArgumentError);
    }
}

namespace {

double pairwise_auc(const std::vector<std::array<double, 3>>& scores, const std::vector<int>& truth, int cls) {
    long wins2 = 0; // 2*wins + ties
    long pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (truth[i] != cls) {
            continue;
        }
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (truth[j] == cls) {
                continue;
            }
            ++pairs;
            if (scores[i][static_cast<std::size_t>(cls)] > scores[j][static_cast<std::size_t>(cls)]) {
                wins2 += 2;
            } else if (scores[i][static_cast<std::size_t>(cls)] == scores[j][static_cast<std::size_t>(cls)]) {
                wins2 += 1;
            }
        }
    }
    return static_cast<double>(wins2) / (2.0 * static_cast<double>(pairs));
}

} // namespace

TEST_CASE("roc_auc: perfect separation gives 1, identical scores give 0.5") {
    std::vector<std::array<double, 3>> scores;
    std::vector<int> truth;
    for (int i = 0; i < 4; ++i) {
        scores.push_back({0.9, 0.05, 0.05});
        truth.push_back(0);
        scores.push_back({0.1, 0.8, 0.1});
        truth.push_back(1);
        scores.push_back({0.1, 0.1, 0.8});
        truth.push_back(2);
    }
    const auto rocs = roc_auc_ovr(scores, truth);
    for (int c = 0; c < 3; ++c) {
        REQUIRE(rocs[static_cast<std::size_t>(c)].has_value());
        CHECK(rocs[static_cast<std::size_t>(c)]->auc == 1.0);
    }

    std::vector<std::array<double, 3>> flat(6, {0.5, 0.3, 0.2});
    const std::vector<int> t2{0, 1, 2, 0, 1, 2};
    const auto rocs2 = roc_auc_ovr(flat, t2);
    for (int c = 0; c < 3; ++c) {
        CHECK(rocs2[static_cast<std::size_t>(c)]->auc == 0.5);
    }
}

TEST_CASE("roc_auc equals the pairwise-counting oracle exactly") {
    SECTION("six-sample mixed case") {
        const std::vector<std::array<double, 3>> scores{{0.5, 0.3, 0.2}, {0.5, 0.2, 0.3}, {0.4, 0.4, 0.2},
                                                        {0.2, 0.5, 0.3}, {0.3, 0.3, 0.4}, {0.1, 0.2, 0.7}};
        const std::vector<int> truth{0, 0, 1, 1, 2, 2};
        const auto rocs = roc_auc_ovr(scores, truth);
        for (int c = 0; c < 3; ++c) {
            REQUIRE(rocs[static_cast<std::size_t>(c)].has_value());
            CHECK(rocs[static_cast<std::size_t>(c)]->auc == pairwise_auc(scores, truth, c));
        }
    }

    SECTION("random score sets, including ties") {
        Rng rng(17);
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 6 + static_cast<int>(uniform_index(rng, 40));
            std::vector<std::array<double, 3>> scores;
            std::vector<int> truth;
            for (int i = 0; i < n; ++i) {
                // quantized scores so ties actually occur
                std::array<double, 3> s{};
                double sum = 0.0;
                for (int c = 0; c < 3; ++c) {
                    s[static_cast<std::size_t>(c)] = std::round(uniform01(rng) * 8.0) / 8.0;
                    sum += s[static_cast<std::size_t>(c)];
                }
                if (sum > 0) {
                    for (auto& v : s) {
                        v /= sum;
                    }
                }
                scores.push_back(s);
                truth.push_back(static_cast<int>(uniform_index(rng, 3)));
            }
            const auto rocs = roc_auc_ovr(scores, truth);
            for (int c = 0; c < 3; ++c) {
                if (!rocs[static_cast<std::size_t>(c)].has_value()) {
                    continue;
                }
                REQUIRE(rocs[static_cast<std::size_t>(c)]->auc == pairwise_auc(scores, truth, c));
            }
        }
    }
}

TEST_CASE("roc_auc reports absent classes as missing and keeps curves monotone") {
    const std::vector<std::array<double, 3>> scores{{0.9, 0.1, 0.0}, {0.2, 0.8, 0.0}, {0.4, 0.6, 0.0}};
    const std::vector<int> truth{0, 1, 1}; // class 2 has no positives
    const auto rocs = roc_auc_ovr(scores, truth);
    CHECK(rocs[0].has_value());
    CHECK(rocs[1].has_value());
    CHECK_FALSE(rocs[2].has_value());
    for (int c = 0; c < 2; ++c) {
        const auto& pts = rocs[static_cast<std::size_t>(c)]->points;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            CHECK(pts[i].first >= pts[i - 1].first);
            CHECK(pts[i].second >= pts[i - 1].second);
        }
        CHECK(pts.front() == std::pair<double, double>{0.0, 0.0});
        CHECK(pts.back() == std::pair<double, double>{1.0, 1.0});
    }
}

TEST_CASE("aes_to_classes recovers well-separated clusters with inverted order") {
    std::vector<double> values;
    Rng rng(31);
    std::vector<int> expect;
    for (int i = 0; i < 30; ++i) {
        values.push_back(uniform_range(rng, 9.0, 10.0)); // high AES -> class 0
        expect.push_back(0);
        values.push_back(uniform_range(rng, 4.0, 5.0)); // mid -> class 1
        expect.push_back(1);
        values.push_back(uniform_range(rng, 0.0, 0.5)); // low -> class 2
        expect.push_back(2);
    }
    const auto labels = aes_to_classes(values);
    CHECK(labels == expect);
}

TEST_CASE("aes_to_classes orientation makes spearman negative on monotone AES") {
    std::vector<double> values;
    for (int i = 0; i < 30; ++i) {
        values.push_back(static_cast<double>(i));
    }
    const auto labels = aes_to_classes(values);
    const SpearmanResult r = spearman(labels, values);
    CHECK(r.rho < 0.0);
}

TEST_CASE("aes_to_classes rejects constant lists") {
    CHECK_THROWS_AS(aes_to_classes(std::vector<double>(10, 3.0)), DegenerateError);
}
