#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "advexplain/schema.hpp"

namespace advexplain {

enum class Architecture { Linear, Mlp };

struct Layer {
    Eigen::MatrixXd W;  // out x in
    Eigen::VectorXd b;
};

// Softmax classifier: either a single linear layer or an MLP with ReLU
// hidden layers. Forward passes and gradients are exact; the model is
// immutable during inference.
class ClassifierModel {
public:
    // Linear model, zero-initialized (cross-entropy in the linear case is convex).
    static ClassifierModel linear(int input_dim, int n_classes = kNumClasses);

    // MLP with ReLU hidden layers; weights drawn uniform(-a, a),
    // a = sqrt(6 / (fan_in + fan_out)), biases zero.
    static ClassifierModel mlp(int input_dim, const std::vector<int>& hidden_widths,
                               int n_classes = kNumClasses, std::uint64_t seed = 42);

    Architecture architecture() const { return architecture_; }
    int input_dim() const { return input_dim_; }
    int n_classes() const { return n_classes_; }
    const std::vector<int>& hidden_widths() const { return hidden_widths_; }

    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }

    Eigen::VectorXd forward_proba(const Eigen::VectorXd& x) const;
    // Batched variant; one row per sample.
    Eigen::MatrixXd forward_proba(const Eigen::MatrixXd& X) const;

    ClassLabel predict_class(const Eigen::VectorXd& x) const;

    // Gradient of cross_entropy(target, forward_proba(x)) w.r.t. x.
    Eigen::VectorXd grad_input(const Eigen::VectorXd& x,
                               const Eigen::VectorXd& target) const;

    // Mean cross-entropy gradient over the batch plus weight decay on the
    // weight matrices (biases not decayed). Rows of targets are one-hot.
    std::vector<Layer> grad_params(const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& targets,
                                   double weight_decay) const;

    // Mean cross-entropy over the batch (no decay term).
    double batch_loss(const Eigen::MatrixXd& X, const Eigen::MatrixXd& targets) const;

    void apply_update(const std::vector<Layer>& grads, double learning_rate);

private:
    ClassifierModel() = default;

    // Forward pass keeping pre- and post-activation values per layer.
    struct Trace {
        std::vector<Eigen::MatrixXd> activations;  // inputs to each layer
        Eigen::MatrixXd probs;
    };
    Trace forward_trace(const Eigen::MatrixXd& X) const;

    Architecture architecture_ = Architecture::Linear;
    int input_dim_ = 0;
    int n_classes_ = 0;
    std::vector<int> hidden_widths_;
    std::vector<Layer> layers_;

    friend ClassifierModel make_model_from_layers(Architecture, int, int,
                                                  std::vector<int>, std::vector<Layer>);
};

// Used by deserialization; validates the shape chain.
ClassifierModel make_model_from_layers(Architecture arch, int input_dim,
                                       int n_classes, std::vector<int> hidden_widths,
                                       std::vector<Layer> layers);

// -sum target_k log(probs_k); probs clamped below at 1e-12 before the log.
double cross_entropy(const Eigen::VectorXd& target, const Eigen::VectorXd& probs);

Eigen::VectorXd one_hot(ClassLabel label, int n_classes = kNumClasses);

}  // namespace advexplain
