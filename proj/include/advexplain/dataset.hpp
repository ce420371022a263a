#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "advexplain/schema.hpp"

namespace advexplain {

// One line of an NSL-KDD-format file: 41 raw feature fields, the attack
// name, and the optional trailing difficulty score.
struct RawRecord {
    std::vector<std::string> fields;
    std::string label;
    int difficulty = -1;  // -1 when absent
};

std::vector<RawRecord> parse_records(std::istream& in);

// Keeps Normal/DOS/Probe records, drops R2L/U2R, fails on unknown attack names.
std::vector<std::pair<RawRecord, ClassLabel>> filter_and_relabel(
    const std::vector<RawRecord>& records);

Eigen::VectorXd encode_record(const RawRecord& record, const FeatureSchema& schema);
Eigen::MatrixXd encode(const std::vector<RawRecord>& records, const FeatureSchema& schema);

struct NormalizationStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;  // strictly positive; constant columns stored as 1

    std::string fingerprint() const;
};

NormalizationStats fit_normalization(const Eigen::MatrixXd& train_matrix);

Eigen::VectorXd normalize(const Eigen::VectorXd& x, const NormalizationStats& stats);
Eigen::VectorXd denormalize(const Eigen::VectorXd& x, const NormalizationStats& stats);
Eigen::MatrixXd normalize(const Eigen::MatrixXd& X, const NormalizationStats& stats);
Eigen::MatrixXd denormalize(const Eigen::MatrixXd& X, const NormalizationStats& stats);

// Per-dimension min/max over rows of an (already normalized) matrix.
std::pair<Eigen::VectorXd, Eigen::VectorXd> compute_bounds(const Eigen::MatrixXd& X);

struct Dataset {
    Eigen::MatrixXd X;  // normalized, one row per sample
    std::vector<ClassLabel> y;
    FeatureSchema schema;
    NormalizationStats stats;
    Eigen::VectorXd x_min;
    Eigen::VectorXd x_max;

    std::size_t size() const { return y.size(); }
};

// Full ingestion pipeline for a training split: parse, filter, encode,
// fit normalization, normalize, fit bounds.
Dataset build_train_dataset(std::istream& in, const FeatureSchema& schema);

// Same pipeline for a held-out split, reusing training-time statistics.
Dataset build_eval_dataset(std::istream& in, const FeatureSchema& schema,
                           const NormalizationStats& stats,
                           const Eigen::VectorXd& x_min,
                           const Eigen::VectorXd& x_max);

// Draws class-balanced minibatches with replacement. batch_size is split
// evenly across classes, remainder going to the lowest class indices.
class BalancedSampler {
public:
    BalancedSampler(const Dataset& dataset, std::uint64_t seed);

    std::pair<Eigen::MatrixXd, std::vector<ClassLabel>> sample(int batch_size);

private:
    const Dataset* dataset_;
    std::vector<std::vector<std::size_t>> by_class_;
    std::mt19937_64 rng_;
};

}  // namespace advexplain
