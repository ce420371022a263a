#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "advexplain/dataset.hpp"
#include "advexplain/explainer.hpp"
#include "advexplain/model.hpp"
#include "advexplain/trainer.hpp"

namespace advexplain {

// Model container: versioned header, architecture tag, layer shapes,
// schema/stats fingerprints, then row-major IEEE-754 little-endian doubles.
// Layout documented in docs/formats.md.
void save_model(const std::filesystem::path& path, const ClassifierModel& model,
                const std::string& schema_fingerprint,
                const std::string& stats_fingerprint);

struct LoadedModel {
    ClassifierModel model;
    std::string schema_fingerprint;
    std::string stats_fingerprint;
};

LoadedModel load_model(const std::filesystem::path& path);

// Normalization stats and box bounds of a training run.
void save_preprocess(const std::filesystem::path& path,
                     const FeatureSchema& schema, const NormalizationStats& stats,
                     const Eigen::VectorXd& x_min, const Eigen::VectorXd& x_max);

struct Preprocess {
    std::string schema_fingerprint;
    NormalizationStats stats;
    Eigen::VectorXd x_min;
    Eigen::VectorXd x_max;
};

Preprocess load_preprocess(const std::filesystem::path& path);

void save_history_csv(const std::filesystem::path& path, const TrainHistory& history);

void save_eval_json(const std::filesystem::path& path, const EvalReport& report);

// One JSON object per line: denormalized x0/x_hat, normalized delta,
// converged flag, iterations, feasible_distance.
void write_results_jsonl(const std::filesystem::path& path,
                         const std::vector<CorrectionResult>& results,
                         const NormalizationStats& stats);

std::vector<CorrectionResult> read_results_jsonl(const std::filesystem::path& path,
                                                 const NormalizationStats& stats);

}  // namespace advexplain
