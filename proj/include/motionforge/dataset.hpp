#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "motionforge/errors.hpp"
#include "motionforge/rng.hpp"

namespace motionforge {

/// One volume in a dataset: where it lives, which subject it belongs to,
/// its motion class and its split assignment.
struct ManifestEntry {
    std::string path;
    std::string subject;
    int label = 0;
    std::string split; // "train", "val" or "test"; empty before splitting
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::vector<ManifestEntry> split_entries(const std::string& split) const {
        std::vector<ManifestEntry> out;
        for (const ManifestEntry& e : entries) {
            if (e.split == split) {
                out.push_back(e);
            }
        }
        return out;
    }
};

/// Subject-wise split preserving class balance: within each class, 20% of
/// subjects (floor) go to test, then 20% of the remaining pool (floor) to
/// validation; remainders stay in train. Every volume of a subject shares
/// its split tag.
inline DatasetManifest split_dataset(const std::vector<ManifestEntry>& entries, std::uint64_t seed) {
    if (entries.empty()) {
        throw ArgumentError("split_dataset: empty manifest");
    }
    std::map<std::string, int> subject_class;
    for (const ManifestEntry& e : entries) {
        if (e.label < 0 || e.label > 2) {
            throw ArgumentError("split_dataset: label out of range for " + e.path);
        }
        auto it = subject_class.find(e.subject);
        if (it == subject_class.end()) {
            subject_class[e.subject] = e.label;
        } else if (it->second != e.label) {
            throw ArgumentError("split_dataset: subject " + e.subject + " has inconsistent labels");
        }
    }

    std::map<int, std::vector<std::string>> by_class;
    for (const auto& [subject, label] : subject_class) {
        by_class[label].push_back(subject);
    }

    Rng rng(seed);
    std::map<std::string, std::string> subject_split;
    for (auto& [label, subjects] : by_class) {
        if (subjects.size() < 5) {
            throw ArgumentError("split_dataset: class " + std::to_string(label) +
                                " has fewer than 5 subjects; split degenerates");
        }
        std::sort(subjects.begin(), subjects.end());
        shuffle(subjects, rng);

        const std::size_t n = subjects.size();
        const std::size_t n_test = n / 5;
        const std::size_t n_pool = n - n_test;
        const std::size_t n_val = n_pool / 5;
        for (std::size_t i = 0; i < n; ++i) {
            const char* tag = (i < n_test) ? "test" : (i < n_test + n_val) ? "val" : "train";
            subject_split[subjects[i]] = tag;
        }
    }

    DatasetManifest out;
    out.entries = entries;
    for (ManifestEntry& e : out.entries) {
        e.split = subject_split.at(e.subject);
    }
    return out;
}

inline nlohmann::json manifest_to_json(const DatasetManifest& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (const ManifestEntry& e : m.entries) {
        entries.push_back({{"path", e.path}, {"subject", e.subject}, {"class", e.label}, {"split", e.split}});
    }
    return nlohmann::json{{"schema_version", 1}, {"entries", entries}};
}

inline DatasetManifest manifest_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema_version").get<int>() != 1) {
            throw FormatError("manifest: unsupported schema_version");
        }
        DatasetManifest m;
        for (const auto& je : j.at("entries")) {
            ManifestEntry e;
            e.path = je.at("path").get<std::string>();
            e.subject = je.at("subject").get<std::string>();
            e.label = je.at("class").get<int>();
            e.split = je.value("split", "");
            m.entries.push_back(std::move(e));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("manifest json: ") + e.what());
    }
}

inline void save_manifest(const DatasetManifest& m, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw IoError("manifest: cannot open for writing: " + path);
    }
    f << manifest_to_json(m).dump(2) << "\n";
}

inline DatasetManifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("manifest: cannot open: " + path);
    }
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("manifest json: ") + e.what());
    }
    return manifest_from_json(j);
}

} // namespace motionforge
