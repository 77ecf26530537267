#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "motionforge/errors.hpp"
#include "motionforge/model.hpp"
#include "motionforge/motion.hpp"

namespace motionforge {

/// Aggregated pipeline configuration. Loaded strictly: unknown keys are
/// rejected, and every value is validated against the module it feeds.
struct RunConfig {
    int input_size = 64;
    int slice_count = 14;
    int slice_axis = 2;
    bool crop = false;
    int pe_axis = 1;
    int ramp_width = 8;
    std::vector<int> event_lines{93, 118, 163, 238}; // on a 256-line axis
    std::array<double, 2> class1_range{0.0, 1.0};
    std::array<double, 2> class2_range{3.0, 4.0};
    std::array<int, 3> conv_channels{16, 32, 64};
    std::array<int, 5> dense_units{256, 128, 64, 32, 3};
    int epochs = 20;
    int batch_size = 32;
    double learning_rate = 1e-3;
    std::uint64_t seed = 42;

    ModelConfig model_config() const {
        ModelConfig m;
        m.input_size = input_size;
        m.conv_channels = conv_channels;
        m.dense_units = dense_units;
        m.seed = seed;
        compute_shapes(m); // validate
        return m;
    }

    EventConfig event_config() const {
        EventConfig e;
        e.lines_base256 = event_lines;
        e.mild_range = class1_range;
        e.severe_range = class2_range;
        return e;
    }

    void validate() const {
        if (slice_count < 1) {
            throw ArgumentError("config: slice_count must be >= 1");
        }
        if (slice_axis < 0 || slice_axis > 2 || pe_axis < 0 || pe_axis > 2) {
            throw ArgumentError("config: axes must be 0, 1 or 2");
        }
        if (ramp_width < 1) {
            throw ArgumentError("config: ramp_width must be >= 1");
        }
        if (epochs < 1 || batch_size < 1) {
            throw ArgumentError("config: epochs and batch_size must be >= 1");
        }
        if (!(learning_rate > 0.0)) {
            throw ArgumentError("config: learning_rate must be positive");
        }
        if (event_lines.empty()) {
            throw ArgumentError("config: event_lines must be non-empty");
        }
        for (int l : event_lines) {
            if (l < 0 || l > 255) {
                throw ArgumentError("config: event_lines must be within [0, 255]");
            }
        }
        if (!(class1_range[0] < class1_range[1]) || !(class2_range[0] < class2_range[1])) {
            throw ArgumentError("config: class ranges must satisfy lo < hi");
        }
        model_config();
    }
};

inline nlohmann::json run_config_to_json(const RunConfig& c) {
    return nlohmann::json{{"schema_version", 1},
                          {"input_size", c.input_size},
                          {"slice_count", c.slice_count},
                          {"slice_axis", c.slice_axis},
                          {"crop", c.crop},
                          {"pe_axis", c.pe_axis},
                          {"ramp_width", c.ramp_width},
                          {"event_lines", c.event_lines},
                          {"class1_range", c.class1_range},
                          {"class2_range", c.class2_range},
                          {"conv_channels", c.conv_channels},
                          {"dense_units", c.dense_units},
                          {"epochs", c.epochs},
                          {"batch_size", c.batch_size},
                          {"learning_rate", c.learning_rate},
                          {"seed", c.seed}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    static const std::set<std::string> known{
        "schema_version", "input_size",  "slice_count", "slice_axis",   "crop",
        "pe_axis",        "ramp_width",  "event_lines", "class1_range", "class2_range",
        "conv_channels",  "dense_units", "epochs",      "batch_size",   "learning_rate",
        "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (known.find(it.key()) == known.end()) {
            throw ArgumentError("config: unknown key '" + it.key() + "'");
        }
    }
    RunConfig c;
    try {
        if (j.contains("schema_version") && j.at("schema_version").get<int>() != 1) {
            throw FormatError("config: unsupported schema_version");
        }
        if (j.contains("input_size")) c.input_size = j.at("input_size").get<int>();
        if (j.contains("slice_count")) c.slice_count = j.at("slice_count").get<int>();
        if (j.contains("slice_axis")) c.slice_axis = j.at("slice_axis").get<int>();
        if (j.contains("crop")) c.crop = j.at("crop").get<bool>();
        if (j.contains("pe_axis")) c.pe_axis = j.at("pe_axis").get<int>();
        if (j.contains("ramp_width")) c.ramp_width = j.at("ramp_width").get<int>();
        if (j.contains("event_lines")) c.event_lines = j.at("event_lines").get<std::vector<int>>();
        if (j.contains("class1_range")) c.class1_range = j.at("class1_range").get<std::array<double, 2>>();
        if (j.contains("class2_range")) c.class2_range = j.at("class2_range").get<std::array<double, 2>>();
        if (j.contains("conv_channels")) c.conv_channels = j.at("conv_channels").get<std::array<int, 3>>();
        if (j.contains("dense_units")) c.dense_units = j.at("dense_units").get<std::array<int, 5>>();
        if (j.contains("epochs")) c.epochs = j.at("epochs").get<int>();
        if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<int>();
        if (j.contains("learning_rate")) c.learning_rate = j.at("learning_rate").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("config json: ") + e.what());
    }
    c.validate();
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("config: cannot open: " + path);
    }
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("config json: ") + e.what());
    }
    return run_config_from_json(j);
}

inline void save_run_config(const RunConfig& c, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw IoError("config: cannot open for writing: " + path);
    }
    f << run_config_to_json(c).dump(2) << "\n";
}

} // namespace motionforge
