#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "advexplain/dataset.hpp"
#include "advexplain/explainer.hpp"

namespace advexplain {

struct FeatureDeviation {
    std::string feature;
    double mean = 0.0;    // of (x0 - x_hat) in normalized space
    double stddev = 0.0;
    std::size_t count = 0;
};

struct DeviationSummary {
    std::vector<FeatureDeviation> rows;  // sorted by |mean| descending
    std::size_t converged_count = 0;
    std::size_t total_count = 0;
};

// Per-feature mean deviation over the converged results. One-hot spans are
// excluded; categorical changes are reported by categorical_comparison.
DeviationSummary mean_deviation(const std::vector<CorrectionResult>& results,
                                const FeatureSchema& schema);

struct FeatureDistribution {
    std::vector<double> x0_values;     // denormalized
    std::vector<double> x_hat_values;  // denormalized
};

FeatureDistribution feature_distribution(const std::vector<CorrectionResult>& results,
                                         const std::string& feature_name,
                                         const FeatureSchema& schema,
                                         const NormalizationStats& stats);

struct LevelCounts {
    std::string level;
    long x0_count = 0;
    long x_hat_count = 0;
};

struct CategoricalFeatureComparison {
    std::string feature;
    std::vector<LevelCounts> levels;
};

struct CategoricalComparison {
    std::vector<CategoricalFeatureComparison> features;
    std::size_t included_count = 0;
};

// Level histograms of the converged x0 set and the rounded x_hat set.
CategoricalComparison categorical_comparison(const std::vector<CorrectionResult>& results,
                                             const FeatureSchema& schema,
                                             const NormalizationStats& stats);

struct Projection2D {
    // 2 x encoded_dim; rows are the top-2 principal components, orthonormal,
    // sign fixed so each row's largest-magnitude entry is positive.
    Eigen::MatrixXd components;
};

Projection2D fit_projection(const Eigen::MatrixXd& reference_matrix);
Eigen::MatrixXd apply_projection(const Projection2D& projection,
                                 const Eigen::MatrixXd& xs);  // rows -> 2-D rows

// Writes deviation_summary.{json,csv}, categorical_comparison.json,
// results.jsonl and the SVG charts into output_dir.
void emit_report(const DeviationSummary& summary,
                 const CategoricalComparison& comparison,
                 const std::vector<CorrectionResult>& results,
                 const FeatureSchema& schema, const NormalizationStats& stats,
                 const std::filesystem::path& output_dir, int top_k = 20);

}  // namespace advexplain
