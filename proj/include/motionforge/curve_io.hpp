#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "motionforge/errors.hpp"
#include "motionforge/motion.hpp"

namespace motionforge {

/// On-disk form of a motion curve: the events plus the parameters needed to
/// rebuild the per-line pose schedule exactly.
struct CurveFile {
    int n_lines = 0;
    int ramp_width = 1;
    std::vector<MotionEvent> events;

    MotionCurve build() const { return build_curve(events, n_lines, ramp_width); }
};

inline nlohmann::json curve_to_json(const CurveFile& c) {
    nlohmann::json events = nlohmann::json::array();
    for (const MotionEvent& e : c.events) {
        events.push_back({{"line", e.line},
                          {"rot", {e.delta.rot[0], e.delta.rot[1], e.delta.rot[2]}},
                          {"trans", {e.delta.trans[0], e.delta.trans[1], e.delta.trans[2]}}});
    }
    return nlohmann::json{{"n_lines", c.n_lines}, {"ramp_width", c.ramp_width}, {"events", events}};
}

inline CurveFile curve_from_json(const nlohmann::json& j) {
    try {
        CurveFile c;
        c.n_lines = j.at("n_lines").get<int>();
        c.ramp_width = j.at("ramp_width").get<int>();
        for (const auto& je : j.at("events")) {
            MotionEvent e;
            e.line = je.at("line").get<int>();
            for (int i = 0; i < 3; ++i) {
                e.delta.rot[i] = je.at("rot").at(i).get<double>();
                e.delta.trans[i] = je.at("trans").at(i).get<double>();
            }
            c.events.push_back(e);
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("curve json: ") + e.what());
    }
}

inline void save_curve(const CurveFile& c, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) {
        throw IoError("curve: cannot open for writing: " + path);
    }
    f << curve_to_json(c).dump(2) << "\n";
}

inline CurveFile load_curve(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("curve: cannot open: " + path);
    }
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("curve json: ") + e.what());
    }
    return curve_from_json(j);
}

} // namespace motionforge
