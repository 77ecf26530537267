// motionforge command-line interface: phantom generation, motion synthesis,
// dataset building, training, inference, Grad-CAM export and evaluation.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error, 3 numeric error.

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "motionforge/motionforge.hpp"

namespace mf = motionforge;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::array<int, 3> parse_dims(const std::string& s) {
    std::array<int, 3> dims{};
    char comma1 = 0, comma2 = 0;
    std::istringstream is(s);
    if (!(is >> dims[0] >> comma1 >> dims[1] >> comma2 >> dims[2]) || comma1 != ',' || comma2 != ',') {
        throw mf::ArgumentError("dims must be <nx>,<ny>,<nz>");
    }
    return dims;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw mf::IoError("cannot open for writing: " + path);
    }
    f << j.dump(2) << "\n";
}

struct PhantomArgs {
    int n = 9;
    std::string dims = "64,64,64";
    int ellipsoids = 6;
    std::uint64_t seed = 7;
    std::string out;
};

int run_phantom(const PhantomArgs& a) {
    if (a.n < 1) {
        throw mf::ArgumentError("phantom: --n must be >= 1");
    }
    const std::array<int, 3> dims = parse_dims(a.dims);
    fs::create_directories(a.out);
    json index;
    index["schema_version"] = 1;
    index["volumes"] = json::array();
    for (int i = 0; i < a.n; ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "phantom_%03d.mrvol", i);
        const mf::Volume3D vol = mf::generate_phantom(dims, a.ellipsoids, mf::mix_seed(a.seed, i));
        const fs::path path = fs::path(a.out) / name;
        mf::write_mrvol(vol, path.string());
        index["volumes"].push_back(name);
        std::cout << "phantom " << path.string() << " dims " << dims[0] << "x" << dims[1] << "x" << dims[2]
                  << "\n";
    }
    write_json_file(index, (fs::path(a.out) / "phantom_index.json").string());
    std::cout << "wrote " << a.n << " phantom volumes to " << a.out << "\n";
    return 0;
}

struct SynthesizeArgs {
    std::string in_path;
    int cls = 1;
    std::uint64_t seed = 0;
    std::string out;
    std::string curve_path;
    int pe_axis = 1;
    int ramp = 8;
};

int run_synthesize(const SynthesizeArgs& a) {
    const mf::Volume3D vol = mf::normalize_intensity(mf::read_volume_any(a.in_path));

    mf::CurveFile curve;
    if (!a.curve_path.empty()) {
        curve = mf::load_curve(a.curve_path);
    } else {
        const mf::MotionClass cls = mf::motion_class_from_int(a.cls);
        curve.n_lines = vol.dim(a.pe_axis);
        curve.ramp_width = a.ramp;
        curve.events = mf::sample_events(cls, curve.n_lines, a.seed);
        if (cls == mf::MotionClass::none) {
            mf::write_mrvol(vol, a.out);
            mf::save_curve(curve, a.out + ".curve.json");
            std::cout << "class 0: wrote normalized pass-through to " << a.out << "\n";
            return 0;
        }
    }

    mf::SynthStats stats;
    const mf::Volume3D corrupted = mf::synthesize_motion(vol, curve.build(), a.pe_axis, &stats);
    mf::write_mrvol(corrupted, a.out);
    mf::save_curve(curve, a.out + ".curve.json");
    std::cout << "synthesized " << a.out << " (" << curve.events.size() << " events, " << stats.distinct_poses
              << " distinct poses, " << stats.forward_ffts << " ffts)\n";
    return 0;
}

struct DatasetArgs {
    std::string src;
    std::string config;
    std::string out;
};

int run_dataset(const DatasetArgs& a) {
    const mf::RunConfig config = mf::load_run_config(a.config);
    const mf::DatasetManifest manifest = mf::build_dataset(a.src, config, a.out);
    std::array<int, 3> split_counts{};
    for (const auto& e : manifest.entries) {
        split_counts[e.split == "train" ? 0 : (e.split == "val" ? 1 : 2)] += 1;
    }
    std::cout << "dataset manifest " << a.out << ": " << manifest.entries.size() << " volumes ("
              << split_counts[0] << " train / " << split_counts[1] << " val / " << split_counts[2]
              << " test)\n";
    return 0;
}

struct TrainArgs {
    std::string manifest;
    std::string config;
    std::string out;
};

int run_train(const TrainArgs& a) {
    const mf::RunConfig config = mf::load_run_config(a.config);
    const mf::DatasetManifest manifest = mf::load_manifest(a.manifest);
    const std::string base_dir = fs::path(a.manifest).parent_path().string();

    mf::PreprocessOptions pre;
    pre.input_size = config.input_size;
    pre.slice_axis = config.slice_axis;
    pre.slice_count = config.slice_count;
    pre.crop = config.crop;
    const mf::SliceSets sets = mf::load_slices(manifest, base_dir.empty() ? "." : base_dir, pre);

    mf::TrainOptions opts;
    opts.epochs = config.epochs;
    opts.batch_size = config.batch_size;
    opts.learning_rate = config.learning_rate;
    opts.shuffle_seed = mf::mix_seed(config.seed, 0x7261696e); // distinct stream from init
    const mf::TrainResult result = mf::train(sets, config.model_config(), opts);

    mf::save_checkpoint(a.out, result.params, result.adam);

    json metrics;
    metrics["schema_version"] = 1;
    metrics["epochs"] = json::array();
    for (const mf::EpochMetrics& m : result.epochs) {
        metrics["epochs"].push_back({{"epoch", m.epoch},
                                     {"train_loss", m.train_loss},
                                     {"train_accuracy", m.train_accuracy},
                                     {"val_loss", m.val_loss},
                                     {"val_accuracy", m.val_accuracy}});
        std::cout << "epoch " << m.epoch << " train_loss " << m.train_loss << " train_acc " << m.train_accuracy
                  << " val_loss " << m.val_loss << " val_acc " << m.val_accuracy << "\n";
    }
    metrics["parameter_count"] = result.params.param_count();
    write_json_file(metrics, a.out + ".train.json");
    std::cout << "checkpoint " << a.out << " (" << result.params.param_count() << " parameters)\n";
    return 0;
}

struct InferArgs {
    std::string model;
    std::string volume;
    std::string manifest;
    std::string split = "test";
    bool crop = false;
    bool with_aes = false;
    bool with_gradcam = false;
    int axis = 2;
    int count = 0; // 0 = all slices
    std::string out;
};

json gradcam_stats_json(const mf::ModelParams& params, const mf::Volume3D& vol,
                        const mf::PreprocessOptions& pre, const mf::VolumeResult& res) {
    json arr = json::array();
    const std::vector<mf::Slice2D> slices = mf::preprocess_volume(vol, pre);
    for (std::size_t i = 0; i < slices.size(); ++i) {
        const mf::Heatmap hm = mf::gradcam(params, slices[i], res.slices[i].pred.cls);
        const mf::HeatmapStats st = mf::heatmap_stats(hm);
        arr.push_back({{"index", res.slices[i].index},
                       {"class", res.slices[i].pred.cls},
                       {"raw_max", st.raw_max},
                       {"mean", st.mean},
                       {"foreground_fraction", st.foreground_fraction}});
    }
    return arr;
}

int run_infer(const InferArgs& a) {
    if (a.volume.empty() == a.manifest.empty()) {
        throw mf::ArgumentError("infer: pass exactly one of --volume or --manifest");
    }
    const mf::Checkpoint ck = mf::load_checkpoint(a.model);

    mf::PreprocessOptions pre;
    pre.input_size = ck.params.config.input_size;
    pre.slice_axis = a.axis;
    pre.crop = a.crop;

    mf::InferenceReport report;
    report.model_path = a.model;

    auto infer_one = [&](const std::string& path, const std::string& subject,
                         std::optional<int> truth) -> json::object_t {
        const mf::Volume3D vol = mf::normalize_intensity(mf::read_volume_any(path));
        mf::PreprocessOptions p = pre;
        p.slice_count = (a.count > 0) ? a.count : vol.dim(a.axis);
        mf::VolumeResult res = mf::infer_volume(ck.params, vol, p, a.with_aes);
        res.path = path;
        res.subject = subject;
        res.truth = truth;
        json::object_t extra;
        if (a.with_gradcam) {
            extra["gradcam"] = gradcam_stats_json(ck.params, vol, p, res);
        }
        report.volumes.push_back(std::move(res));
        return extra;
    };

    std::vector<json::object_t> extras;
    if (!a.volume.empty()) {
        extras.push_back(infer_one(a.volume, fs::path(a.volume).stem().string(), std::nullopt));
    } else {
        const mf::DatasetManifest manifest = mf::load_manifest(a.manifest);
        const std::string base_dir = fs::path(a.manifest).parent_path().string();
        for (const mf::ManifestEntry& e : manifest.entries) {
            if (!a.split.empty() && a.split != "all" && e.split != a.split) {
                continue;
            }
            const std::string path =
                (!e.path.empty() && e.path.front() == '/') ? e.path : (base_dir.empty() ? "." : base_dir) + "/" + e.path;
            extras.push_back(infer_one(path, e.subject, e.label));
            report.volumes.back().path = e.path; // keep manifest-relative for evaluate
        }
        if (report.volumes.empty()) {
            throw mf::ArgumentError("infer: no manifest entries in split '" + a.split + "'");
        }
    }

    json j = mf::inference_report_to_json(report);
    for (std::size_t i = 0; i < extras.size(); ++i) {
        for (auto& [k, v] : extras[i]) {
            j["volumes"][i][k] = v;
        }
    }
    write_json_file(j, a.out);
    for (const mf::VolumeResult& v : report.volumes) {
        std::cout << v.path << " majority " << v.majority << " pct " << v.pct[0] << " " << v.pct[1] << " "
                  << v.pct[2] << "\n";
    }
    return 0;
}

struct GradcamArgs {
    std::string model;
    std::string volume;
    int slice = 0;
    int cls = 0;
    int axis = 2;
    bool crop = false;
    std::string out;
    std::string overlay;
};

int run_gradcam(const GradcamArgs& a) {
    const mf::Checkpoint ck = mf::load_checkpoint(a.model);
    const mf::Volume3D vol = mf::normalize_intensity(mf::read_volume_any(a.volume));
    const int n = vol.dim(a.axis);
    if (a.slice < 0 || a.slice >= n) {
        throw mf::ArgumentError("gradcam: slice index out of range");
    }
    const std::vector<mf::Slice2D> all = mf::extract_slices(vol, a.axis, n);
    mf::Slice2D slice = a.crop
                            ? mf::crop_to_foreground_square(all[static_cast<std::size_t>(a.slice)],
                                                            ck.params.config.input_size)
                                  .slice
                            : mf::resample_bilinear(all[static_cast<std::size_t>(a.slice)],
                                                    ck.params.config.input_size, ck.params.config.input_size);

    const mf::Heatmap hm = mf::gradcam(ck.params, slice, a.cls);
    mf::write_pgm(hm.as_slice(), a.out);
    if (!a.overlay.empty()) {
        mf::write_ppm_overlay(slice, hm.as_slice(), a.overlay);
    }
    const mf::HeatmapStats st = mf::heatmap_stats(hm);
    std::cout << "gradcam slice " << a.slice << " class " << a.cls << " raw_max " << st.raw_max << " mean "
              << st.mean << " fg " << st.foreground_fraction << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string pred;
    std::string truth;
    std::string out;
};

int run_evaluate(const EvaluateArgs& a) {
    const mf::InferenceReport preds = mf::load_inference_report(a.pred);
    const mf::DatasetManifest truth = mf::load_manifest(a.truth);
    const mf::EvalReport report = mf::evaluate_predictions(preds, truth);
    write_json_file(mf::eval_report_to_json(report), a.out);
    std::cout << "accuracy " << report.accuracy << " macro_precision " << report.macro_precision
              << " macro_recall " << report.macro_recall;
    if (report.spearman_rho.has_value()) {
        std::cout << " spearman_rho " << *report.spearman_rho;
    }
    if (report.kappa.has_value()) {
        std::cout << " kappa " << *report.kappa;
    }
    std::cout << "\n";
    return 0;
}

struct AesArgs {
    std::string volume;
    int axis = 2;
    int count = 0;
    std::string out;
};

int run_aes(const AesArgs& a) {
    const mf::Volume3D vol = mf::normalize_intensity(mf::read_volume_any(a.volume));
    const int n = vol.dim(a.axis);
    const int count = (a.count > 0) ? std::min(a.count, n) : n;
    const std::vector<mf::Slice2D> slices = mf::extract_slices(vol, a.axis, count);
    const int start = (n - count) / 2;

    json j;
    j["schema_version"] = 1;
    j["volume"] = a.volume;
    j["axis"] = a.axis;
    j["values"] = json::array();
    double sum = 0.0;
    for (std::size_t i = 0; i < slices.size(); ++i) {
        const double v = mf::aes(slices[i]);
        j["values"].push_back({{"index", start + static_cast<int>(i)}, {"aes", v}});
        sum += v;
    }
    j["mean"] = sum / static_cast<double>(slices.size());
    write_json_file(j, a.out);
    std::cout << "aes mean " << j["mean"].get<double>() << " over " << slices.size() << " slices\n";
    return 0;
}

struct CropArgs {
    std::string in_path;
    int size = 64;
    int axis = 2;
    std::string out;
};

int run_crop(const CropArgs& a) {
    const mf::Volume3D vol = mf::read_volume_any(a.in_path);
    const int n = vol.dim(a.axis);
    const std::vector<mf::Slice2D> slices = mf::extract_slices(vol, a.axis, n);

    // cropped slices restack along the original axis
    mf::Volume3D out(a.axis == 0 ? n : a.size, a.axis == 1 ? n : a.size, a.axis == 2 ? n : a.size,
                     vol.spacing);
    int n_foreground = 0;
    for (int k = 0; k < n; ++k) {
        const mf::CropResult cr = mf::crop_to_foreground_square(slices[static_cast<std::size_t>(k)], a.size);
        n_foreground += cr.foreground ? 1 : 0;
        const int oa = (a.axis == 0) ? 1 : 0;
        const int ob = (a.axis == 2) ? 1 : 2;
        int coord[3];
        coord[a.axis] = k;
        for (int i = 0; i < a.size; ++i) {
            coord[oa] = i;
            for (int j = 0; j < a.size; ++j) {
                coord[ob] = j;
                out.at(coord[0], coord[1], coord[2]) = cr.slice.at(i, j);
            }
        }
    }
    mf::write_mrvol(out, a.out);
    std::cout << "cropped " << n << " slices to " << a.size << "x" << a.size << " (" << n_foreground
              << " with foreground) -> " << a.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"motionforge: k-space motion artifact synthesis, CNN motion classification, Grad-CAM and AES evaluation"};
    app.require_subcommand(1);

    PhantomArgs phantom;
    auto* cmd_phantom = app.add_subcommand("phantom", "Generate synthetic head phantom volumes");
    cmd_phantom->add_option("--n", phantom.n, "Number of volumes");
    cmd_phantom->add_option("--dims", phantom.dims, "Volume dims as nx,ny,nz");
    cmd_phantom->add_option("--ellipsoids", phantom.ellipsoids, "Ellipsoids per phantom");
    cmd_phantom->add_option("--seed", phantom.seed, "Base seed");
    cmd_phantom->add_option("--out", phantom.out, "Output directory")->required();

    SynthesizeArgs synth;
    auto* cmd_synth = app.add_subcommand("synthesize", "Corrupt a volume with simulated rigid motion");
    cmd_synth->add_option("--in", synth.in_path, "Input volume (.mrvol or .nii)")->required();
    cmd_synth->add_option("--class", synth.cls, "Motion class 0, 1 or 2");
    cmd_synth->add_option("--seed", synth.seed, "Event sampling seed");
    cmd_synth->add_option("--curve", synth.curve_path, "Replay a stored curve JSON instead of sampling");
    cmd_synth->add_option("--pe-axis", synth.pe_axis, "Phase-encode axis (default 1)");
    cmd_synth->add_option("--ramp", synth.ramp, "Ramp width in lines (default 8)");
    cmd_synth->add_option("--out", synth.out, "Output volume path")->required();

    DatasetArgs dataset;
    auto* cmd_dataset = app.add_subcommand("dataset", "Build a balanced motion-simulated dataset");
    cmd_dataset->add_option("--src", dataset.src, "Directory of clean source volumes")->required();
    cmd_dataset->add_option("--config", dataset.config, "RunConfig JSON")->required();
    cmd_dataset->add_option("--out", dataset.out, "Output manifest JSON path")->required();

    TrainArgs train_args;
    auto* cmd_train = app.add_subcommand("train", "Train the motion classifier");
    cmd_train->add_option("--manifest", train_args.manifest, "Dataset manifest JSON")->required();
    cmd_train->add_option("--config", train_args.config, "RunConfig JSON")->required();
    cmd_train->add_option("--out", train_args.out, "Output checkpoint path")->required();

    InferArgs infer_args;
    auto* cmd_infer = app.add_subcommand("infer", "Classify volume slices");
    cmd_infer->add_option("--model", infer_args.model, "Checkpoint path")->required();
    cmd_infer->add_option("--volume", infer_args.volume, "Single volume to classify");
    cmd_infer->add_option("--manifest", infer_args.manifest, "Manifest of volumes to classify");
    cmd_infer->add_option("--split", infer_args.split, "Manifest split to run (train/val/test/all)");
    cmd_infer->add_flag("--crop", infer_args.crop, "Foreground-crop slices before inference");
    cmd_infer->add_flag("--aes", infer_args.with_aes, "Embed per-slice AES values");
    cmd_infer->add_flag("--gradcam", infer_args.with_gradcam, "Embed per-slice Grad-CAM stats");
    cmd_infer->add_option("--axis", infer_args.axis, "Slice axis (default 2)");
    cmd_infer->add_option("--count", infer_args.count, "Slices per volume (0 = all)");
    cmd_infer->add_option("--out", infer_args.out, "Output report JSON")->required();

    GradcamArgs gradcam_args;
    auto* cmd_gradcam = app.add_subcommand("gradcam", "Export a Grad-CAM heatmap for one slice");
    cmd_gradcam->add_option("--model", gradcam_args.model, "Checkpoint path")->required();
    cmd_gradcam->add_option("--volume", gradcam_args.volume, "Volume path")->required();
    cmd_gradcam->add_option("--slice", gradcam_args.slice, "Slice index along the axis")->required();
    cmd_gradcam->add_option("--class", gradcam_args.cls, "Target class")->required();
    cmd_gradcam->add_option("--axis", gradcam_args.axis, "Slice axis (default 2)");
    cmd_gradcam->add_flag("--crop", gradcam_args.crop, "Foreground-crop the slice first");
    cmd_gradcam->add_option("--out", gradcam_args.out, "Output heatmap PGM")->required();
    cmd_gradcam->add_option("--overlay", gradcam_args.overlay, "Optional overlay PPM");

    EvaluateArgs eval_args;
    auto* cmd_eval = app.add_subcommand("evaluate", "Score predictions against manifest truth");
    cmd_eval->add_option("--pred", eval_args.pred, "Inference report JSON")->required();
    cmd_eval->add_option("--truth", eval_args.truth, "Truth manifest JSON")->required();
    cmd_eval->add_option("--out", eval_args.out, "Output evaluation JSON")->required();

    AesArgs aes_args;
    auto* cmd_aes = app.add_subcommand("aes", "Per-slice average edge strength of a volume");
    cmd_aes->add_option("--volume", aes_args.volume, "Volume path")->required();
    cmd_aes->add_option("--axis", aes_args.axis, "Slice axis (default 2)");
    cmd_aes->add_option("--count", aes_args.count, "Slices (0 = all)");
    cmd_aes->add_option("--out", aes_args.out, "Output JSON")->required();

    CropArgs crop_args;
    auto* cmd_crop = app.add_subcommand("crop", "Foreground-crop every slice of a volume");
    cmd_crop->add_option("--in", crop_args.in_path, "Input volume")->required();
    cmd_crop->add_option("--size", crop_args.size, "Output slice size")->required();
    cmd_crop->add_option("--axis", crop_args.axis, "Slice axis (default 2)");
    cmd_crop->add_option("--out", crop_args.out, "Output volume path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_phantom->parsed()) return run_phantom(phantom);
        if (cmd_synth->parsed()) return run_synthesize(synth);
        if (cmd_dataset->parsed()) return run_dataset(dataset);
        if (cmd_train->parsed()) return run_train(train_args);
        if (cmd_infer->parsed()) return run_infer(infer_args);
        if (cmd_gradcam->parsed()) return run_gradcam(gradcam_args);
        if (cmd_eval->parsed()) return run_evaluate(eval_args);
        if (cmd_aes->parsed()) return run_aes(aes_args);
        if (cmd_crop->parsed()) return run_crop(crop_args);
    } catch (const mf::ArgumentError& e) {
        std::cerr << "error: argument: " << e.what() << "\n";
        return 1;
    } catch (const mf::NumericError& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 3;
    } catch (const mf::Error& e) {
        std::cerr << "error: data: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
