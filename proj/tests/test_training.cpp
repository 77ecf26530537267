#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "motionforge/train.hpp"

#include "test_util.hpp"

using namespace motionforge;

namespace {

std::vector<ManifestEntry> entries_for(const std::vector<std::pair<std::string, int>>& subjects) {
    std::vector<ManifestEntry> out;
    for (const auto& [subject, label] : subjects) {
        ManifestEntry e;
        e.path = subject + ".mrvol";
        e.subject = subject;
        e.label = label;
        out.push_back(e);
    }
    return out;
}

std::map<std::string, int> split_counts(const DatasetManifest& m) {
    std::map<std::string, int> c;
    for (const auto& e : m.entries) {
        c[e.split] += 1;
    }
    return c;
}

// toy separable classes: blank / low-contrast noise / high-contrast noise
SliceSets toy_dataset(int per_class_train, int per_class_val, int input_size, std::uint64_t seed) {
    SliceSets sets;
    sets.input_size = input_size;
    Rng rng(seed);
    auto make = [&](int label) {
        SliceRecord r;
        r.label = label;
        r.pixels.assign(static_cast<std::size_t>(input_size) * input_size, 0.0f);
        if (label == 1) {
            for (float& v : r.pixels) {
                v = static_cast<float>(0.5 + uniform_range(rng, -0.08, 0.08));
            }
        } else if (label == 2) {
            for (float& v : r.pixels) {
                v = static_cast<float>(uniform01(rng));
            }
        }
        return r;
    };
    for (int cls = 0; cls < 3; ++cls) {
        for (int i = 0; i < per_class_train; ++i) {
            sets.train.push_back(make(cls));
        }
        for (int i = 0; i < per_class_val; ++i) {
            sets.val.push_back(make(cls));
        }
    }
    return sets;
}

ModelConfig toy_config(std::uint64_t seed) {
    ModelConfig cfg;
    cfg.input_size = 24;
    cfg.conv_channels = {4, 6, 8};
    cfg.dense_units = {32, 16, 8, 4, 3};
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("split_dataset: 100 one-class subjects split 64/16/20") {
    std::vector<std::pair<std::string, int>> subjects;
    for (int i = 0; i < 100; ++i) {
        subjects.emplace_back("s" + std::to_string(i), 0);
    }
    const DatasetManifest m = split_dataset(entries_for(subjects), 3);
    const auto counts = split_counts(m);
    CHECK(counts.at("train") == 64);
    CHECK(counts.at("val") == 16);
    CHECK(counts.at("test") == 20);
}

TEST_CASE("split_dataset applies the per-class floor rule") {
    // class sizes 34/33/33: per class, test = floor(n/5), val = floor((n-test)/5)
    std::vector<std::pair<std::string, int>> subjects;
    for (int i = 0; i < 100; ++i) {
        subjects.emplace_back("s" + std::to_string(i), i < 34 ? 0 : (i < 67 ? 1 : 2));
    }
    const DatasetManifest m = split_dataset(entries_for(subjects), 3);
    std::map<int, std::map<std::string, int>> per_class;
    for (const auto& e : m.entries) {
        per_class[e.label][e.split] += 1;
    }
    CHECK(per_class[0]["test"] == 6);
    CHECK(per_class[0]["val"] == 5);
    CHECK(per_class[0]["train"] == 23);
    for (int cls : {1, 2}) {
        CHECK(per_class[cls]["test"] == 6);
        CHECK(per_class[cls]["val"] == 5);
        CHECK(per_class[cls]["train"] == 22);
    }
}

TEST_CASE("split_dataset keeps all volumes of a subject together") {
    std::vector<ManifestEntry> entries;
    for (int s = 0; s < 18; ++s) {
        for (int rep = 0; rep < 3; ++rep) {
            ManifestEntry e;
            e.subject = "subj" + std::to_string(s);
            e.path = e.subject + "_" + std::to_string(rep) + ".mrvol";
            e.label = s % 3;
            entries.push_back(e);
        }
    }
    const DatasetManifest m = split_dataset(entries, 9);
    std::map<std::string, std::string> seen;
    for (const auto& e : m.entries) {
        auto it = seen.find(e.subject);
        if (it == seen.end()) {
            seen[e.subject] = e.split;
        } else {
            CHECK(it->second == e.split);
        }
    }
}

TEST_CASE("split_dataset is deterministic and validates inputs") {
    std::vector<std::pair<std::string, int>> subjects;
    for (int i = 0; i < 30; ++i) {
        subjects.emplace_back("s" + std::to_string(i), i % 3);
    }
    const DatasetManifest a = split_dataset(entries_for(subjects), 5);
    const DatasetManifest b = split_dataset(entries_for(subjects), 5);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].split == b.entries[i].split);
    }

    // a subject with two labels is inconsistent
    auto bad = entries_for(subjects);
    ManifestEntry dup;
    dup.subject = "s0";
    dup.path = "s0_b.mrvol";
    dup.label = 1;
    bad.push_back(dup);
    CHECK_THROWS_AS(split_dataset(bad, 5), ArgumentError);

    // fewer than 5 subjects in one class degenerates
    std::vector<std::pair<std::string, int>> sparse;
    for (int i = 0; i < 4; ++i) {
        sparse.emplace_back("a" + std::to_string(i), 0);
    }
    for (int i = 0; i < 6; ++i) {
        sparse.emplace_back("b" + std::to_string(i), 1);
    }
    CHECK_THROWS_AS(split_dataset(entries_for(sparse), 5), ArgumentError);
}

TEST_CASE("training on separable toy classes reaches 100% train accuracy") {
    // batch 4 rather than 32: at 120 toy samples a batch of 32 gives too few
    // optimizer steps in 20 epochs to converge
    const SliceSets sets = toy_dataset(40, 4, 24, 12);
    TrainOptions opts;
    opts.epochs = 20;
    opts.batch_size = 4;
    opts.shuffle_seed = 5;
    const TrainResult result = train(sets, toy_config(7), opts);

    REQUIRE(result.epochs.size() == 20);
    CHECK(result.epochs.back().train_accuracy == 1.0);
    CHECK(result.epochs[4].train_loss < result.epochs[0].train_loss);
    CHECK(result.epochs.back().val_accuracy == 1.0);
}

TEST_CASE("training is bit-deterministic for a fixed seed") {
    const SliceSets sets = toy_dataset(8, 2, 24, 3);
    TrainOptions opts;
    opts.epochs = 3;
    opts.batch_size = 16;
    opts.shuffle_seed = 21;

    const TrainResult a = train(sets, toy_config(4), opts);
    const TrainResult b = train(sets, toy_config(4), opts);
    auto ta = a.params.tensors();
    auto tb = b.params.tensors();
    for (std::size_t t = 0; t < ta.size(); ++t) {
        REQUIRE(*ta[t] == *tb[t]);
    }
    for (std::size_t e = 0; e < a.epochs.size(); ++e) {
        CHECK(a.epochs[e].train_loss == b.epochs[e].train_loss);
        CHECK(a.epochs[e].val_accuracy == b.epochs[e].val_accuracy);
    }

    TrainOptions other = opts;
    other.shuffle_seed = 22;
    const TrainResult c = train(sets, toy_config(4), other);
    bool any_diff = false;
    auto tc = c.params.tensors();
    for (std::size_t t = 0; t < ta.size() && !any_diff; ++t) {
        any_diff = (*ta[t] != *tc[t]);
    }
    CHECK(any_diff);
}

TEST_CASE("train validates its inputs") {
    SliceSets empty;
    empty.input_size = 24;
    CHECK_THROWS_AS(train(empty, toy_config(1), {}), ArgumentError);

    SliceSets no_val = toy_dataset(2, 1, 24, 9);
    no_val.val.clear();
    CHECK_THROWS_AS(train(no_val, toy_config(1), {}), ArgumentError);
}
