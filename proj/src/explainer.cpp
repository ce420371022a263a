#include "advexplain/explainer.hpp"

#include <cmath>
#include <limits>

#include "advexplain/error.hpp"

namespace advexplain {

void ExplainConfig::validate() const {
    if (q_diag.size() == 0 || (q_diag.array() <= 0.0).any())
        throw ValueError("q_diag entries must be positive");
    if (alpha <= 0 || step_size <= 0 || max_iters <= 0 || tolerance <= 0)
        throw ValueError("explain config values must be positive");
    if (x_min.size() != q_diag.size() || x_max.size() != q_diag.size())
        throw ValueError("bounds dimension mismatch");
    if ((x_min.array() > x_max.array()).any())
        throw ValueError("x_min must not exceed x_max");
}

Eigen::VectorXd round_for_indicator(const Eigen::VectorXd& x_hat_normalized,
                                    const FeatureSchema& schema,
                                    const NormalizationStats& stats) {
    Eigen::VectorXd raw = denormalize(x_hat_normalized, stats);
    for (const FeatureSpec& f : schema.features()) {
        const auto begin = static_cast<Eigen::Index>(f.span_begin);
        switch (f.kind) {
            case FeatureKind::Continuous:
                break;
            case FeatureKind::Integer:
                raw[begin] = std::floor(raw[begin] + 0.5);  // half up
                break;
            case FeatureKind::Binary:
                raw[begin] = raw[begin] >= 0.5 ? 1.0 : 0.0;
                break;
            case FeatureKind::Categorical: {
                Eigen::Index argmax = begin;
                for (std::size_t s = f.span_begin + 1; s < f.span_end; ++s) {
                    const auto i = static_cast<Eigen::Index>(s);
                    if (raw[i] > raw[argmax]) argmax = i;  // ties: lowest slot
                }
                for (std::size_t s = f.span_begin; s < f.span_end; ++s)
                    raw[static_cast<Eigen::Index>(s)] = 0.0;
                raw[argmax] = 1.0;
                break;
            }
        }
    }
    return normalize(raw, stats);
}

int indicator(const ClassifierModel& model, const Eigen::VectorXd& x_hat,
              ClassLabel target_class, bool rounding_enabled,
              const FeatureSchema& schema, const NormalizationStats& stats) {
    const Eigen::VectorXd& point =
        rounding_enabled ? round_for_indicator(x_hat, schema, stats) : x_hat;
    return model.predict_class(point) == target_class ? 0 : 1;
}

double adversarial_objective(const ClassifierModel& model,
                             const Eigen::VectorXd& x_hat,
                             const Eigen::VectorXd& x0, ClassLabel target_class,
                             const ExplainConfig& config,
                             const FeatureSchema& schema,
                             const NormalizationStats& stats) {
    const int gate = indicator(model, x_hat, target_class,
                               config.rounding_enabled, schema, stats);
    const Eigen::VectorXd diff = x_hat - x0;
    const double quad = (config.q_diag.array() * diff.array().square()).sum();
    if (gate == 0) return quad;
    const double h = cross_entropy(one_hot(target_class, model.n_classes()),
                                   model.forward_proba(x_hat));
    return h * config.alpha + quad;
}

Eigen::VectorXd project_box(const Eigen::VectorXd& x, const Eigen::VectorXd& x_min,
                            const Eigen::VectorXd& x_max) {
    return x.cwiseMax(x_min).cwiseMin(x_max);
}

namespace {

double quadratic_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& q_diag) {
    return (q_diag.array() * (a - b).array().square()).sum();
}

}  // namespace

CorrectionResult correct_sample(const ClassifierModel& model,
                                const Eigen::VectorXd& x0, ClassLabel target_class,
                                const ExplainConfig& config,
                                const FeatureSchema& schema,
                                const NormalizationStats& stats) {
    config.validate();
    if ((x0.array() < config.x_min.array()).any() ||
        (x0.array() > config.x_max.array()).any())
        throw ValueError("x0 lies outside the box bounds");

    const Eigen::VectorXd target = one_hot(target_class, model.n_classes());

    CorrectionResult result;
    result.x0 = x0;

    // With I=0 at x0 the whole gradient vanishes, so the iterate would
    // never move; report the no-op correction directly.
    if (indicator(model, x0, target_class, config.rounding_enabled, schema,
                  stats) == 0) {
        result.x_hat = x0;
        result.delta = Eigen::VectorXd::Zero(x0.size());
        result.converged = true;
        result.iterations = 0;
        result.feasible_distance = 0.0;
        result.final_objective = 0.0;
        return result;
    }

    Eigen::VectorXd x = x0;
    Eigen::VectorXd best_feasible;
    double best_distance = std::numeric_limits<double>::infinity();

    auto note_feasible = [&](const Eigen::VectorXd& candidate) {
        const double d = quadratic_distance(candidate, x0, config.q_diag);
        if (d < best_distance) {
            best_distance = d;
            best_feasible = candidate;
        }
    };

    int iter = 0;
    for (; iter < config.max_iters; ++iter) {
        const int gate = indicator(model, x, target_class,
                                   config.rounding_enabled, schema, stats);
        if (gate == 0) note_feasible(x);
        if (config.record_trace) {
            result.objective_trace.push_back(adversarial_objective(
                model, x, x0, target_class, config, schema, stats));
            result.feasible_distance_trace.push_back(best_distance);
        }

        // The indicator gates the cross-entropy pull but receives no
        // gradient of its own; the quadratic term always pulls toward x0.
        Eigen::VectorXd grad =
            2.0 * config.q_diag.cwiseProduct(x - x0);
        if (gate == 1)
            grad += config.alpha * model.grad_input(x, target);
        if (!grad.allFinite())
            throw ValueError("non-finite gradient at iteration " +
                             std::to_string(iter));

        Eigen::VectorXd next =
            project_box(x - config.step_size * grad, config.x_min, config.x_max);
        const double movement = (next - x).norm();
        x = std::move(next);
        if (gate == 0 && movement < config.tolerance) {
            ++iter;
            break;
        }
    }

    result.iterations = iter;
    if (std::isfinite(best_distance)) {
        result.converged = true;
        result.x_hat = best_feasible;
        result.feasible_distance = best_distance;
    } else {
        result.converged = false;
        result.x_hat = x;
        result.feasible_distance = std::numeric_limits<double>::quiet_NaN();
    }
    result.delta = result.x0 - result.x_hat;
    result.final_objective = adversarial_objective(
        model, result.x_hat, x0, target_class, config, schema, stats);
    return result;
}

std::vector<CorrectionResult> explain_set(const ClassifierModel& model,
                                          const std::vector<Eigen::VectorXd>& samples,
                                          ClassLabel target_class,
                                          const ExplainConfig& config,
                                          const FeatureSchema& schema,
                                          const NormalizationStats& stats) {
    std::vector<CorrectionResult> results;
    results.reserve(samples.size());
    for (const auto& x0 : samples)
        results.push_back(
            correct_sample(model, x0, target_class, config, schema, stats));
    return results;
}

ExplainConfig default_explain_config(const Dataset& dataset) {
    ExplainConfig config;
    config.q_diag = Eigen::VectorXd::Ones(dataset.X.cols());
    config.x_min = dataset.x_min;
    config.x_max = dataset.x_max;
    return config;
}

}  // namespace advexplain
