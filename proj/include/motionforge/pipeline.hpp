#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "motionforge/curve_io.hpp"
#include "motionforge/dataset.hpp"
#include "motionforge/errors.hpp"
#include "motionforge/eval_report.hpp"
#include "motionforge/metrics.hpp"
#include "motionforge/model.hpp"
#include "motionforge/motion.hpp"
#include "motionforge/mrvol.hpp"
#include "motionforge/parallel.hpp"
#include "motionforge/run_config.hpp"
#include "motionforge/train.hpp"

namespace motionforge {

/// Discover readable volumes (.mrvol, .nii) in a directory, sorted by name.
inline std::vector<std::filesystem::path> list_volumes(const std::string& dir) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("dataset: not a directory: " + dir);
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string ext = entry.path().extension().string();
        if (ext == ".mrvol" || ext == ".nii") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

/// Build a motion-simulated dataset from clean source volumes: balanced
/// class assignment, per-volume event sampling and k-space synthesis
/// (class 0 passes through untouched), normalization, subject-wise split.
/// Synthesized volumes land beside the manifest with their curve JSON for
/// audit. Returns the split manifest (also written to `manifest_path`).
inline DatasetManifest build_dataset(const std::string& src_dir, const RunConfig& config,
                                     const std::string& manifest_path) {
    config.validate();
    const std::vector<std::filesystem::path> files = list_volumes(src_dir);
    if (files.size() < 15) {
        throw ArgumentError("dataset: need at least 15 source volumes, found " + std::to_string(files.size()));
    }

    std::vector<std::string> subjects;
    subjects.reserve(files.size());
    for (const auto& f : files) {
        subjects.push_back(f.stem().string());
    }
    const std::map<std::string, MotionClass> classes = assign_balanced_classes(subjects, config.seed);

    const std::filesystem::path manifest_file(manifest_path);
    const std::filesystem::path out_dir =
        manifest_file.parent_path() / (manifest_file.stem().string() + "_volumes");
    std::filesystem::create_directories(out_dir);

    // all seeds drawn up front so volume-level parallelism stays deterministic
    std::vector<std::uint64_t> vol_seeds(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        vol_seeds[i] = mix_seed(config.seed, i);
    }

    std::vector<ManifestEntry> entries(files.size());
    parallel_for(files.size(), [&](std::size_t i) {
        const std::string subject = subjects[i];
        const MotionClass cls = classes.at(subject);
        Volume3D vol;
        try {
            vol = normalize_intensity(read_volume_any(files[i].string()));
        } catch (const Error& e) {
            throw IoError("dataset: unreadable volume " + files[i].string() + ": " + e.what());
        }

        const std::string out_name = subject + "_c" + std::to_string(static_cast<int>(cls)) + ".mrvol";
        const std::filesystem::path out_path = out_dir / out_name;
        if (cls == MotionClass::none) {
            write_mrvol(vol, out_path.string());
        } else {
            const int n_lines = vol.dim(config.pe_axis);
            CurveFile curve;
            curve.n_lines = n_lines;
            curve.ramp_width = config.ramp_width;
            curve.events = sample_events(cls, n_lines, vol_seeds[i], config.event_config());
            const Volume3D corrupted = synthesize_motion(vol, curve.build(), config.pe_axis);
            write_mrvol(corrupted, out_path.string());
            save_curve(curve, out_path.string() + ".curve.json");
        }

        ManifestEntry e;
        e.path = (out_dir.filename() / out_name).string();
        e.subject = subject;
        e.label = static_cast<int>(cls);
        entries[i] = std::move(e);
    });

    const DatasetManifest manifest = split_dataset(entries, config.seed);
    save_manifest(manifest, manifest_path);
    return manifest;
}

// ---- inference reports ------------------------------------------------------

struct SliceResult {
    int index = 0;
    SlicePrediction pred;
    std::optional<double> aes_value;
};

struct VolumeResult {
    std::string path;
    std::string subject;
    std::optional<int> truth;
    std::array<double, 3> pct{};
    int majority = 0;
    std::vector<SliceResult> slices;
};

struct InferenceReport {
    std::string model_path;
    std::vector<VolumeResult> volumes;
};

/// Run the classifier over every extracted slice of one normalized volume.
inline VolumeResult infer_volume(const ModelParams& params, const Volume3D& vol, const PreprocessOptions& opts,
                                 bool with_aes) {
    const int n = vol.dim(opts.slice_axis);
    const int count = std::min(opts.slice_count, n);
    const int start = (n - count) / 2;
    const std::vector<Slice2D> slices = preprocess_volume(vol, opts);

    VolumeResult res;
    std::vector<SlicePrediction> preds;
    preds.reserve(slices.size());
    for (std::size_t i = 0; i < slices.size(); ++i) {
        SliceResult sr;
        sr.index = start + static_cast<int>(i);
        sr.pred = predict_slice(params, slices[i]);
        if (with_aes) {
            sr.aes_value = aes(slices[i]);
        }
        preds.push_back(sr.pred);
        res.slices.push_back(std::move(sr));
    }
    const VolumePrediction tally = tally_volume(preds);
    res.pct = tally.pct;
    res.majority = tally.majority;
    return res;
}

inline nlohmann::json inference_report_to_json(const InferenceReport& r) {
    nlohmann::json volumes = nlohmann::json::array();
    for (const VolumeResult& v : r.volumes) {
        nlohmann::json slices = nlohmann::json::array();
        for (const SliceResult& s : v.slices) {
            nlohmann::json js{{"index", s.index},
                              {"class", s.pred.cls},
                              {"probs", {s.pred.probs[0], s.pred.probs[1], s.pred.probs[2]}}};
            if (s.aes_value.has_value()) {
                js["aes"] = *s.aes_value;
            }
            slices.push_back(std::move(js));
        }
        nlohmann::json jv{{"path", v.path},
                          {"subject", v.subject},
                          {"pct", {v.pct[0], v.pct[1], v.pct[2]}},
                          {"majority", v.majority},
                          {"slices", std::move(slices)}};
        if (v.truth.has_value()) {
            jv["truth"] = *v.truth;
        }
        volumes.push_back(std::move(jv));
    }
    return nlohmann::json{{"schema_version", 1}, {"model", r.model_path}, {"volumes", std::move(volumes)}};
}

inline InferenceReport inference_report_from_json(const nlohmann::json& j) {
    try {
        if (j.at("schema_version").get<int>() != 1) {
            throw FormatError("inference report: unsupported schema_version");
        }
        InferenceReport r;
        r.model_path = j.value("model", "");
        for (const auto& jv : j.at("volumes")) {
            VolumeResult v;
            v.path = jv.at("path").get<std::string>();
            v.subject = jv.value("subject", "");
            if (jv.contains("truth")) {
                v.truth = jv.at("truth").get<int>();
            }
            const auto& pct = jv.at("pct");
            for (int c = 0; c < 3; ++c) {
                v.pct[static_cast<std::size_t>(c)] = pct.at(c).get<double>();
            }
            v.majority = jv.at("majority").get<int>();
            for (const auto& js : jv.at("slices")) {
                SliceResult s;
                s.index = js.at("index").get<int>();
                s.pred.cls = js.at("class").get<int>();
                for (int c = 0; c < 3; ++c) {
                    s.pred.probs[static_cast<std::size_t>(c)] = js.at("probs").at(c).get<double>();
                }
                if (js.contains("aes")) {
                    s.aes_value = js.at("aes").get<double>();
                }
                v.slices.push_back(std::move(s));
            }
            r.volumes.push_back(std::move(v));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("inference report json: ") + e.what());
    }
}

inline void save_inference_report(const InferenceReport& r, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw IoError("report: cannot open for writing: " + path);
    }
    f << inference_report_to_json(r).dump(2) << "\n";
}

inline InferenceReport load_inference_report(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("report: cannot open: " + path);
    }
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("inference report json: ") + e.what());
    }
    return inference_report_from_json(j);
}

// ---- evaluation --------------------------------------------------------------

/// Score slice-level predictions against manifest truth labels. When every
/// slice carries an AES value, the AES agreement statistics (Spearman of
/// predicted class vs AES, Cohen's kappa vs Otsu-binned AES classes) are
/// included.
inline EvalReport evaluate_predictions(const InferenceReport& preds, const DatasetManifest& truth) {
    std::map<std::string, int> label_of;
    for (const ManifestEntry& e : truth.entries) {
        label_of[e.path] = e.label;
    }

    std::vector<int> y_pred, y_true;
    std::vector<std::array<double, 3>> scores;
    std::vector<double> aes_values;
    bool all_aes = true;

    EvalReport report;
    for (const VolumeResult& v : preds.volumes) {
        const auto it = label_of.find(v.path);
        if (it == label_of.end()) {
            throw ArgumentError("evaluate: prediction path not in truth manifest: " + v.path);
        }
        const int label = it->second;
        for (const SliceResult& s : v.slices) {
            y_pred.push_back(s.pred.cls);
            y_true.push_back(label);
            scores.push_back(s.pred.probs);
            if (s.aes_value.has_value()) {
                aes_values.push_back(*s.aes_value);
            } else {
                all_aes = false;
            }
        }
        EvalReport::PerVolume pv;
        pv.id = v.subject.empty() ? v.path : v.subject;
        pv.pct = v.pct;
        pv.majority = v.majority;
        report.per_volume.push_back(std::move(pv));
    }
    if (y_pred.empty()) {
        throw ArgumentError("evaluate: no slice predictions");
    }

    report.confusion = confusion(y_pred, y_true);
    report.accuracy = accuracy(report.confusion);
    const MacroPr pr = macro_pr(report.confusion);
    report.macro_precision = pr.precision;
    report.macro_recall = pr.recall;
    const auto rocs = roc_auc_ovr(scores, y_true);
    for (int c = 0; c < 3; ++c) {
        if (rocs[static_cast<std::size_t>(c)].has_value()) {
            report.auc[static_cast<std::size_t>(c)] = rocs[static_cast<std::size_t>(c)]->auc;
        }
    }

    if (all_aes && aes_values.size() == y_pred.size() && aes_values.size() >= 3) {
        try {
            const SpearmanResult sp = spearman(y_pred, aes_values);
            report.spearman_rho = sp.rho;
            report.spearman_t = sp.t_stat;
        } catch (const DegenerateError&) {
            // constant predictions or AES: correlation undefined, leave absent
        }
        try {
            report.kappa = cohens_kappa(y_pred, aes_to_classes(aes_values));
        } catch (const DegenerateError&) {
        }
    }
    return report;
}

} // namespace motionforge
