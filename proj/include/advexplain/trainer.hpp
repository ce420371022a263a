#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "advexplain/dataset.hpp"
#include "advexplain/model.hpp"

namespace advexplain {

struct TrainConfig {
    double learning_rate = 0.01;
    int batch_size = 128;
    int max_epochs = 60;
    double weight_decay = 1e-4;
    int early_stop_patience = 10;       // epochs without validation improvement
    double validation_fraction = 0.1;   // in (0, 0.5]
    std::uint64_t seed = 42;

    void validate() const;
};

struct TrainHistory {
    std::vector<double> train_loss;     // per epoch
    std::vector<double> val_accuracy;   // per epoch
    int best_epoch = -1;                // index into the vectors above
};

// Minibatch gradient descent on balanced batches with early stopping.
// Returns the parameters of the best-validation-accuracy epoch.
TrainHistory train(ClassifierModel& model, const Dataset& dataset,
                   const TrainConfig& config);

struct EvalReport {
    double accuracy = 0.0;
    std::array<std::array<long, kNumClasses>, kNumClasses> confusion{};  // [true][pred]
    std::array<double, kNumClasses> precision{};
    std::array<double, kNumClasses> recall{};
};

EvalReport evaluate(const ClassifierModel& model, const Dataset& dataset);

struct Misclassified {
    Eigen::VectorXd x0;  // normalized
    std::size_t index;   // row index in the dataset
};

std::vector<Misclassified> collect_misclassified(const ClassifierModel& model,
                                                 const Dataset& dataset,
                                                 ClassLabel true_class,
                                                 ClassLabel predicted_class);

}  // namespace advexplain
