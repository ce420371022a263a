#include "advexplain/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "advexplain/error.hpp"

namespace advexplain {

void TrainConfig::validate() const {
    if (learning_rate <= 0 || batch_size <= 0 || max_epochs <= 0 ||
        weight_decay < 0 || early_stop_patience <= 0)
        throw ValueError("train config values must be positive");
    if (validation_fraction <= 0.0 || validation_fraction > 0.5)
        throw ValueError("validation_fraction must be in (0, 0.5]");
}

namespace {

// Stratified split: per class, a seeded shuffle, then the first
// floor(n_c * fraction) indices become validation.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    const std::vector<ClassLabel>& y, double fraction, std::uint64_t seed) {
    std::vector<std::vector<std::size_t>> by_class(kNumClasses);
    for (std::size_t i = 0; i < y.size(); ++i)
        by_class[static_cast<int>(y[i])].push_back(i);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> train_idx, val_idx;
    for (auto& pool : by_class) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const auto n_val = static_cast<std::size_t>(
            static_cast<double>(pool.size()) * fraction);
        val_idx.insert(val_idx.end(), pool.begin(), pool.begin() + n_val);
        train_idx.insert(train_idx.end(), pool.begin() + n_val, pool.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
    return {std::move(train_idx), std::move(val_idx)};
}

Dataset subset(const Dataset& ds, const std::vector<std::size_t>& idx) {
    Dataset out{Eigen::MatrixXd(static_cast<Eigen::Index>(idx.size()), ds.X.cols()),
                {}, ds.schema, ds.stats, ds.x_min, ds.x_max};
    out.y.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.X.row(static_cast<Eigen::Index>(i)) =
            ds.X.row(static_cast<Eigen::Index>(idx[i]));
        out.y.push_back(ds.y[idx[i]]);
    }
    return out;
}

Eigen::MatrixXd to_one_hot(const std::vector<ClassLabel>& y) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(
        static_cast<Eigen::Index>(y.size()), kNumClasses);
    for (std::size_t i = 0; i < y.size(); ++i)
        T(static_cast<Eigen::Index>(i), static_cast<int>(y[i])) = 1.0;
    return T;
}

double accuracy_on(const ClassifierModel& model, const Dataset& ds) {
    Eigen::MatrixXd probs = model.forward_proba(ds.X);
    long correct = 0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        Eigen::Index pred = 0;
        for (Eigen::Index k = 1; k < probs.cols(); ++k)
            if (probs(i, k) > probs(i, pred)) pred = k;
        if (pred == static_cast<int>(ds.y[static_cast<std::size_t>(i)])) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(probs.rows());
}

}  // namespace

TrainHistory train(ClassifierModel& model, const Dataset& dataset,
                   const TrainConfig& config) {
    config.validate();
    auto [train_idx, val_idx] =
        stratified_split(dataset.y, config.validation_fraction, config.seed);
    Dataset train_ds = subset(dataset, train_idx);
    Dataset val_ds = subset(dataset, val_idx);

    BalancedSampler sampler(train_ds, config.seed + 1);
    const int batches_per_epoch = static_cast<int>(
        (train_ds.size() + config.batch_size - 1) /
        static_cast<std::size_t>(config.batch_size));

    TrainHistory history;
    std::vector<Layer> best_params = model.layers();
    double best_val = -1.0;
    int epochs_since_improvement = 0;

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        double loss_sum = 0.0;
        for (int b = 0; b < batches_per_epoch; ++b) {
            auto [X, y] = sampler.sample(config.batch_size);
            Eigen::MatrixXd T = to_one_hot(y);
            const double loss = model.batch_loss(X, T);
            if (!std::isfinite(loss))
                throw ValueError("non-finite loss at epoch " +
                                 std::to_string(epoch) + ", batch " +
                                 std::to_string(b));
            loss_sum += loss;
            model.apply_update(model.grad_params(X, T, config.weight_decay),
                               config.learning_rate);
        }
        history.train_loss.push_back(loss_sum / batches_per_epoch);
        const double val_acc = accuracy_on(model, val_ds);
        history.val_accuracy.push_back(val_acc);
        if (val_acc > best_val) {
            best_val = val_acc;
            history.best_epoch = epoch;
            best_params = model.layers();
            epochs_since_improvement = 0;
        } else if (++epochs_since_improvement >= config.early_stop_patience) {
            break;
        }
    }
    model.layers() = std::move(best_params);
    return history;
}

EvalReport evaluate(const ClassifierModel& model, const Dataset& dataset) {
    EvalReport report;
    Eigen::MatrixXd probs = model.forward_proba(dataset.X);
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        Eigen::Index pred = 0;
        for (Eigen::Index k = 1; k < probs.cols(); ++k)
            if (probs(i, k) > probs(i, pred)) pred = k;
        const int truth = static_cast<int>(dataset.y[static_cast<std::size_t>(i)]);
        report.confusion[truth][pred] += 1;
    }
    long total = 0, diag = 0;
    for (int t = 0; t < kNumClasses; ++t)
        for (int p = 0; p < kNumClasses; ++p) {
            total += report.confusion[t][p];
            if (t == p) diag += report.confusion[t][p];
        }
    report.accuracy = total > 0 ? static_cast<double>(diag) / total : 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
        long row = 0, col = 0;
        for (int k = 0; k < kNumClasses; ++k) {
            row += report.confusion[c][k];
            col += report.confusion[k][c];
        }
        report.recall[c] = row > 0 ? static_cast<double>(report.confusion[c][c]) / row : 0.0;
        report.precision[c] = col > 0 ? static_cast<double>(report.confusion[c][c]) / col : 0.0;
    }
    return report;
}

std::vector<Misclassified> collect_misclassified(const ClassifierModel& model,
                                                 const Dataset& dataset,
                                                 ClassLabel true_class,
                                                 ClassLabel predicted_class) {
    std::vector<Misclassified> out;
    Eigen::MatrixXd probs = model.forward_proba(dataset.X);
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        if (dataset.y[static_cast<std::size_t>(i)] != true_class) continue;
        Eigen::Index pred = 0;
        for (Eigen::Index k = 1; k < probs.cols(); ++k)
            if (probs(i, k) > probs(i, pred)) pred = k;
        if (pred == static_cast<int>(predicted_class))
            out.push_back({dataset.X.row(i).transpose(), static_cast<std::size_t>(i)});
    }
    return out;
}

}  // namespace advexplain
