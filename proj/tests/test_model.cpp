#include <doctest.h>

#include <cmath>
#include <random>

#include "advexplain/error.hpp"
#include "advexplain/model.hpp"

using namespace advexplain;

namespace {

// Central finite differences of the scalar loss x -> H(target, p(x)).
Eigen::VectorXd fd_grad_input(const ClassifierModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& target, double h = 1e-5) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (cross_entropy(target, model.forward_proba(hi)) -
                cross_entropy(target, model.forward_proba(lo))) /
               (2 * h);
    }
    return g;
}

double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).norm() / std::max(1e-12, std::max(a.norm(), b.norm()));
}

ClassifierModel random_model(bool mlp, int input_dim, std::uint64_t seed) {
    if (mlp) return ClassifierModel::mlp(input_dim, {5, 4}, kNumClasses, seed);
    ClassifierModel m = ClassifierModel::linear(input_dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& layer : m.layers()) {
        for (Eigen::Index i = 0; i < layer.W.size(); ++i)
            layer.W.data()[i] = gauss(rng);
        for (Eigen::Index i = 0; i < layer.b.size(); ++i) layer.b[i] = gauss(rng);
    }
    return m;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("forward_proba is a stable softmax") {
    ClassifierModel zero = ClassifierModel::linear(4);
    Eigen::VectorXd any = Eigen::VectorXd::Random(4);
    Eigen::VectorXd p = zero.forward_proba(any);
    for (int k = 0; k < 3; ++k) CHECK(p[k] == doctest::Approx(1.0 / 3));

    // W = [[1,0],[0,1],[0,0]], b = 0, x = (ln 2, 0) -> (1/2, 1/4, 1/4).
    ClassifierModel m = ClassifierModel::linear(2);
    m.layers()[0].W << 1, 0,
                       0, 1,
                       0, 0;
    Eigen::VectorXd x(2);
    x << std::log(2.0), 0.0;
    Eigen::VectorXd probs = m.forward_proba(x);
    CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(probs[2] == doctest::Approx(0.25).epsilon(1e-12));

    // Simplex invariant on random inputs and models.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ClassifierModel rm = random_model(seed % 2 == 0, 6, seed + 1);
        Eigen::VectorXd big = Eigen::VectorXd::Random(6) * 100;
        Eigen::VectorXd rp = rm.forward_proba(big);
        CHECK(std::abs(rp.sum() - 1.0) < 1e-9);
        CHECK(rp.minCoeff() >= 0.0);
    }

    Eigen::VectorXd wrong_dim = Eigen::VectorXd::Zero(5);
    CHECK_THROWS_AS(zero.forward_proba(wrong_dim), ValueError);
}

TEST_CASE("softmax is shift and scale-order invariant") {
    ClassifierModel m = random_model(false, 3, 11);
    Eigen::VectorXd x = Eigen::VectorXd::Random(3);
    Eigen::VectorXd base = m.forward_proba(x);

    // Adding a constant to all logits (bias shift) leaves probs unchanged.
    ClassifierModel shifted = m;
    shifted.layers()[0].b.array() += 17.5;
    CHECK((shifted.forward_proba(x) - base).cwiseAbs().maxCoeff() < 1e-12);

    // Scaling logits by 2 (temperature) preserves the argmax.
    ClassifierModel heated = m;
    heated.layers()[0].W *= 2.0;
    heated.layers()[0].b *= 2.0;
    CHECK(heated.predict_class(x) == m.predict_class(x));
}

TEST_CASE("predict_class breaks ties toward the lowest class") {
    ClassifierModel zero = ClassifierModel::linear(2);
    CHECK(zero.predict_class(Eigen::VectorXd::Random(2)) == ClassLabel::Normal);

    ClassifierModel m = ClassifierModel::linear(1);
    m.layers()[0].W << 1, 1, 0;  // classes 0 and 1 tie for any x
    Eigen::VectorXd x(1);
    x << 3.0;
    CHECK(m.predict_class(x) == ClassLabel::Normal);
}

TEST_CASE("cross_entropy matches the analytic values") {
    Eigen::VectorXd target = one_hot(ClassLabel::Normal);
    Eigen::VectorXd sure(3), uniform(3);
    sure << 1, 0, 0;
    uniform << 1.0 / 3, 1.0 / 3, 1.0 / 3;
    CHECK(cross_entropy(target, sure) <= 1e-11);
    CHECK(cross_entropy(target, uniform) == doctest::Approx(std::log(3.0)));
    CHECK_THROWS_AS(cross_entropy(target, Eigen::VectorXd::Zero(2)), ValueError);
}

TEST_CASE("grad_input matches the linear closed form and finite differences") {
    ClassifierModel m = random_model(false, 5, 3);
    Eigen::VectorXd x = Eigen::VectorXd::Random(5);
    Eigen::VectorXd target = one_hot(ClassLabel::Dos);

    Eigen::VectorXd analytic =
        m.layers()[0].W.transpose() * (m.forward_proba(x) - target);
    CHECK(rel_err(m.grad_input(x, target), analytic) < 1e-10);

    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        ClassifierModel rm = random_model(seed % 2 == 1, 6, 100 + seed);
        Eigen::VectorXd rx = Eigen::VectorXd::Random(6);
        Eigen::VectorXd rt = one_hot(static_cast<ClassLabel>(seed % 3));
        CHECK(rel_err(rm.grad_input(rx, rt), fd_grad_input(rm, rx, rt)) < 1e-5);
    }

    // A saturated, correct prediction has a vanishing input gradient.
    ClassifierModel sure = ClassifierModel::linear(2);
    sure.layers()[0].W << 1, 0,
                          0, 1,
                          -1, -1;
    sure.layers()[0].b << 60, 0, 0;
    CHECK(sure.grad_input(Eigen::VectorXd::Zero(2), one_hot(ClassLabel::Normal))
              .norm() < 1e-6);
}

TEST_CASE("grad_params matches finite differences on a 4-2-3 MLP") {
    ClassifierModel m = ClassifierModel::mlp(4, {2}, kNumClasses, 9);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(3, 4);
    Eigen::MatrixXd T(3, 3);
    T.setZero();
    T(0, 0) = T(1, 2) = T(2, 1) = 1;
    const double decay = 0.01;

    auto loss_with_decay = [&](const ClassifierModel& model) {
        double reg = 0;
        for (const auto& layer : model.layers()) reg += layer.W.squaredNorm();
        return model.batch_loss(X, T) + 0.5 * decay * reg;
    };

    auto grads = m.grad_params(X, T, decay);
    REQUIRE(grads.size() == m.layers().size());

    const double h = 1e-6;
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-5 * std::max(1.0, std::abs(b));
    };
    for (std::size_t l = 0; l < m.layers().size(); ++l) {
        for (Eigen::Index i = 0; i < m.layers()[l].W.size(); ++i) {
            ClassifierModel hi = m, lo = m;
            hi.layers()[l].W.data()[i] += h;
            lo.layers()[l].W.data()[i] -= h;
            CHECK(close(grads[l].W.data()[i],
                        (loss_with_decay(hi) - loss_with_decay(lo)) / (2 * h)));
        }
        for (Eigen::Index i = 0; i < m.layers()[l].b.size(); ++i) {
            ClassifierModel hi = m, lo = m;
            hi.layers()[l].b[i] += h;
            lo.layers()[l].b[i] -= h;
            CHECK(close(grads[l].b[i],
                        (loss_with_decay(hi) - loss_with_decay(lo)) / (2 * h)));
        }
    }
}

TEST_CASE("apply_update descends the loss") {
    ClassifierModel m = ClassifierModel::mlp(3, {4}, kNumClasses, 5);
    Eigen::MatrixXd X = Eigen::MatrixXd::Random(8, 3);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(8, 3);
    for (int i = 0; i < 8; ++i) T(i, i % 3) = 1;
    const double before = m.batch_loss(X, T);
    for (int it = 0; it < 50; ++it) m.apply_update(m.grad_params(X, T, 0.0), 0.1);
    CHECK(m.batch_loss(X, T) < before);
}

TEST_CASE("model constructors validate their inputs") {
    CHECK_THROWS_AS(ClassifierModel::mlp(4, {}, kNumClasses, 1), ValueError);
    std::vector<Layer> bad{{Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(2)}};
    CHECK_THROWS_AS(
        make_model_from_layers(Architecture::Linear, 2, 3, {}, std::move(bad)),
        ValueError);
}

}  // TEST_SUITE
