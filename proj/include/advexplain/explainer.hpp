#pragma once

#include <Eigen/Dense>
#include <vector>

#include "advexplain/dataset.hpp"
#include "advexplain/model.hpp"

namespace advexplain {

struct ExplainConfig {
    Eigen::VectorXd q_diag;   // diagonal of the quadratic weighting, entries > 0
    double alpha = 1.0;       // cross-entropy scale
    double step_size = 0.05;
    int max_iters = 2000;
    double tolerance = 1e-6;  // per-iterate movement threshold (normalized space)
    bool rounding_enabled = false;
    Eigen::VectorXd x_min;
    Eigen::VectorXd x_max;
    bool record_trace = false;

    void validate() const;
};

struct CorrectionResult {
    Eigen::VectorXd x0;     // normalized
    Eigen::VectorXd x_hat;  // normalized, inside bounds
    Eigen::VectorXd delta;  // x0 - x_hat
    bool converged = false;
    int iterations = 0;
    double final_objective = 0.0;
    double feasible_distance = 0.0;  // quadratic distance of the best feasible iterate
    std::vector<double> objective_trace;          // filled when record_trace
    std::vector<double> feasible_distance_trace;  // best feasible distance per iteration
};

// Snaps discrete features of a normalized point to valid raw values:
// integers to the nearest integer (half up), binaries to {0,1}, each
// one-hot span to its argmax slot (ties to the lowest slot). Continuous
// features pass through. Input and output are in normalized space.
Eigen::VectorXd round_for_indicator(const Eigen::VectorXd& x_hat_normalized,
                                    const FeatureSchema& schema,
                                    const NormalizationStats& stats);

// 0 iff the model classifies (optionally rounded) x_hat as target_class.
// Non-differentiable gate; no gradient flows through it.
int indicator(const ClassifierModel& model, const Eigen::VectorXd& x_hat,
              ClassLabel target_class, bool rounding_enabled,
              const FeatureSchema& schema, const NormalizationStats& stats);

// H(target, p(x_hat)) * alpha * I + (x_hat - x0)^T Q (x_hat - x0).
double adversarial_objective(const ClassifierModel& model,
                             const Eigen::VectorXd& x_hat,
                             const Eigen::VectorXd& x0, ClassLabel target_class,
                             const ExplainConfig& config,
                             const FeatureSchema& schema,
                             const NormalizationStats& stats);

Eigen::VectorXd project_box(const Eigen::VectorXd& x, const Eigen::VectorXd& x_min,
                            const Eigen::VectorXd& x_max);

// Projected first-order descent on the gated objective, starting at x0.
// Returns the feasible iterate closest to x0 when one exists.
CorrectionResult correct_sample(const ClassifierModel& model,
                                const Eigen::VectorXd& x0, ClassLabel target_class,
                                const ExplainConfig& config,
                                const FeatureSchema& schema,
                                const NormalizationStats& stats);

std::vector<CorrectionResult> explain_set(const ClassifierModel& model,
                                          const std::vector<Eigen::VectorXd>& samples,
                                          ClassLabel target_class,
                                          const ExplainConfig& config,
                                          const FeatureSchema& schema,
                                          const NormalizationStats& stats);

// Identity-Q config with bounds taken from the dataset.
ExplainConfig default_explain_config(const Dataset& dataset);

}  // namespace advexplain
