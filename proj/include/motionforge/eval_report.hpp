#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "motionforge/metrics.hpp"

namespace motionforge {

/// Aggregated evaluation results; `spearman_rho`, `t_stat` and `kappa` are
/// present only when AES values accompanied the predictions.
struct EvalReport {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    std::array<std::optional<double>, 3> auc{};
    ConfusionMatrix confusion;
    std::optional<double> spearman_rho;
    std::optional<double> spearman_t;
    std::optional<double> kappa;

    struct PerVolume {
        std::string id;
        std::array<double, 3> pct{};
        int majority = 0;
    };
    std::vector<PerVolume> per_volume;
};

inline nlohmann::json eval_report_to_json(const EvalReport& r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["accuracy"] = r.accuracy;
    j["macro_precision"] = r.macro_precision;
    j["macro_recall"] = r.macro_recall;
    nlohmann::json auc;
    const char* keys[3] = {"c0", "c1", "c2"};
    for (int c = 0; c < 3; ++c) {
        if (r.auc[static_cast<std::size_t>(c)].has_value()) {
            auc[keys[c]] = *r.auc[static_cast<std::size_t>(c)];
        } else {
            auc[keys[c]] = nullptr;
        }
    }
    j["auc"] = auc;
    nlohmann::json cm = nlohmann::json::array();
    for (int row = 0; row < 3; ++row) {
        cm.push_back({r.confusion.m[static_cast<std::size_t>(row)][0], r.confusion.m[static_cast<std::size_t>(row)][1],
                      r.confusion.m[static_cast<std::size_t>(row)][2]});
    }
    j["confusion"] = cm;
    j["spearman_rho"] = r.spearman_rho.has_value() ? nlohmann::json(*r.spearman_rho) : nlohmann::json(nullptr);
    j["spearman_t"] = r.spearman_t.has_value() ? nlohmann::json(*r.spearman_t) : nlohmann::json(nullptr);
    j["kappa"] = r.kappa.has_value() ? nlohmann::json(*r.kappa) : nlohmann::json(nullptr);
    nlohmann::json pv = nlohmann::json::array();
    for (const auto& v : r.per_volume) {
        pv.push_back({{"id", v.id}, {"pct", {v.pct[0], v.pct[1], v.pct[2]}}, {"majority", v.majority}});
    }
    j["per_volume"] = pv;
    return j;
}

} // namespace motionforge
