#include "advexplain/model.hpp"

#include <cmath>
#include <random>

#include "advexplain/error.hpp"

namespace advexplain {

namespace {

constexpr double kProbFloor = 1e-12;

// Row-wise softmax with max-subtraction.
Eigen::MatrixXd softmax_rows(const Eigen::MatrixXd& logits) {
    Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
    Eigen::MatrixXd shifted =
        (logits.colwise() - row_max).array().exp().matrix();
    Eigen::VectorXd sums = shifted.rowwise().sum();
    return shifted.array().colwise() / sums.array();
}

void check_shape_chain(int input_dim, int n_classes,
                       const std::vector<Layer>& layers) {
    if (layers.empty()) throw ValueError("model has no layers");
    Eigen::Index in = input_dim;
    for (const auto& layer : layers) {
        if (layer.W.cols() != in || layer.b.size() != layer.W.rows())
            throw ValueError("layer shapes do not chain");
        in = layer.W.rows();
    }
    if (in != n_classes)
        throw ValueError("final layer width does not match n_classes");
}

}  // namespace

ClassifierModel ClassifierModel::linear(int input_dim, int n_classes) {
    ClassifierModel m;
    m.architecture_ = Architecture::Linear;
    m.input_dim_ = input_dim;
    m.n_classes_ = n_classes;
    m.layers_.push_back({Eigen::MatrixXd::Zero(n_classes, input_dim),
                         Eigen::VectorXd::Zero(n_classes)});
    return m;
}

ClassifierModel ClassifierModel::mlp(int input_dim, const std::vector<int>& hidden_widths,
                                     int n_classes, std::uint64_t seed) {
    if (hidden_widths.empty())
        throw ValueError("MLP needs at least one hidden layer");
    ClassifierModel m;
    m.architecture_ = Architecture::Mlp;
    m.input_dim_ = input_dim;
    m.n_classes_ = n_classes;
    m.hidden_widths_ = hidden_widths;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    int in = input_dim;
    std::vector<int> widths = hidden_widths;
    widths.push_back(n_classes);
    for (int out : widths) {
        const double a = std::sqrt(6.0 / (in + out));
        Eigen::MatrixXd W(out, in);
        for (Eigen::Index i = 0; i < W.rows(); ++i)
            for (Eigen::Index j = 0; j < W.cols(); ++j)
                W(i, j) = a * unit(rng);
        m.layers_.push_back({std::move(W), Eigen::VectorXd::Zero(out)});
        in = out;
    }
    return m;
}

ClassifierModel make_model_from_layers(Architecture arch, int input_dim,
                                       int n_classes, std::vector<int> hidden_widths,
                                       std::vector<Layer> layers) {
    check_shape_chain(input_dim, n_classes, layers);
    ClassifierModel m;
    m.architecture_ = arch;
    m.input_dim_ = input_dim;
    m.n_classes_ = n_classes;
    m.hidden_widths_ = std::move(hidden_widths);
    m.layers_ = std::move(layers);
    return m;
}

ClassifierModel::Trace ClassifierModel::forward_trace(const Eigen::MatrixXd& X) const {
    if (X.cols() != input_dim_)
        throw ValueError("forward: input has dimension " + std::to_string(X.cols()) +
                         ", model expects " + std::to_string(input_dim_));
    Trace t;
    t.activations.reserve(layers_.size());
    Eigen::MatrixXd a = X;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        t.activations.push_back(a);
        Eigen::MatrixXd z =
            (a * layers_[l].W.transpose()).rowwise() + layers_[l].b.transpose();
        if (l + 1 < layers_.size())
            a = z.cwiseMax(0.0);  // ReLU
        else
            a = std::move(z);
    }
    t.probs = softmax_rows(a);
    return t;
}

Eigen::MatrixXd ClassifierModel::forward_proba(const Eigen::MatrixXd& X) const {
    return forward_trace(X).probs;
}

Eigen::VectorXd ClassifierModel::forward_proba(const Eigen::VectorXd& x) const {
    return forward_proba(Eigen::MatrixXd(x.transpose())).row(0).transpose();
}

ClassLabel ClassifierModel::predict_class(const Eigen::VectorXd& x) const {
    Eigen::VectorXd p = forward_proba(x);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < p.size(); ++i)
        if (p[i] > p[best]) best = i;  // ties keep the lowest index
    return static_cast<ClassLabel>(best);
}

Eigen::VectorXd ClassifierModel::grad_input(const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& target) const {
    if (target.size() != n_classes_)
        throw ValueError("grad_input: target dimension mismatch");
    Trace t = forward_trace(Eigen::MatrixXd(x.transpose()));
    // dL/dlogits = probs - target, then backpropagate through the layers.
    Eigen::MatrixXd delta = t.probs - target.transpose();
    for (std::size_t l = layers_.size(); l-- > 0;) {
        Eigen::MatrixXd da = delta * layers_[l].W;
        if (l > 0) {
            // ReLU mask from the input of layer l (output of layer l-1).
            da = da.cwiseProduct(
                (t.activations[l].array() > 0.0).cast<double>().matrix());
        }
        delta = std::move(da);
    }
    return delta.row(0).transpose();
}

std::vector<Layer> ClassifierModel::grad_params(const Eigen::MatrixXd& X,
                                                const Eigen::MatrixXd& targets,
                                                double weight_decay) const {
    if (targets.rows() != X.rows() || targets.cols() != n_classes_)
        throw ValueError("grad_params: target shape mismatch");
    const double inv_n = 1.0 / static_cast<double>(X.rows());
    Trace t = forward_trace(X);
    std::vector<Layer> grads(layers_.size());
    Eigen::MatrixXd delta = (t.probs - targets) * inv_n;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        grads[l].W = delta.transpose() * t.activations[l] +
                     weight_decay * layers_[l].W;
        grads[l].b = delta.colwise().sum();
        if (l > 0) {
            delta = (delta * layers_[l].W)
                        .cwiseProduct((t.activations[l].array() > 0.0)
                                          .cast<double>()
                                          .matrix());
        }
    }
    return grads;
}

double ClassifierModel::batch_loss(const Eigen::MatrixXd& X,
                                   const Eigen::MatrixXd& targets) const {
    Eigen::MatrixXd probs = forward_proba(X);
    Eigen::ArrayXXd clamped = probs.array().max(kProbFloor);
    return -(targets.array() * clamped.log()).rowwise().sum().mean();
}

void ClassifierModel::apply_update(const std::vector<Layer>& grads,
                                   double learning_rate) {
    if (grads.size() != layers_.size())
        throw ValueError("apply_update: gradient layer count mismatch");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        layers_[l].W -= learning_rate * grads[l].W;
        layers_[l].b -= learning_rate * grads[l].b;
    }
}

double cross_entropy(const Eigen::VectorXd& target, const Eigen::VectorXd& probs) {
    if (target.size() != probs.size())
        throw ValueError("cross_entropy: dimension mismatch");
    return -(target.array() * probs.array().max(kProbFloor).log()).sum();
}

Eigen::VectorXd one_hot(ClassLabel label, int n_classes) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(n_classes);
    t[static_cast<int>(label)] = 1.0;
    return t;
}

}  // namespace advexplain
