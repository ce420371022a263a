#include <doctest.h>

#include <cmath>
#include <limits>

#include "advexplain/error.hpp"
#include "advexplain/explainer.hpp"
#include "test_util.hpp"
#include "toy_oracle.hpp"

using namespace advexplain;

namespace {

// 2-D linear toy on the plane schema; class 2 is suppressed outright so
// the decision reduces to class 0 vs class 1.
ClassifierModel plane_model(double w0x, double w0y, double b0) {
    ClassifierModel m = ClassifierModel::linear(2);
    m.layers()[0].W << w0x, w0y,
                       0, 0,
                       0, 0;
    m.layers()[0].b << b0, 0, -50;
    return m;
}

ExplainConfig plane_config(double lo = -1.0, double hi = 1.0) {
    ExplainConfig config;
    config.q_diag = Eigen::VectorXd::Ones(2);
    config.x_min = Eigen::VectorXd::Constant(2, lo);
    config.x_max = Eigen::VectorXd::Constant(2, hi);
    return config;
}

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_SUITE("explainer") {

TEST_CASE("round_for_indicator snaps discrete features") {
    const FeatureSchema schema = testutil::tiny_schema();
    const NormalizationStats stats = testutil::identity_stats(6);

    Eigen::VectorXd x(6);
    // duration, protocol one-hot (0.2, 0.9, 0.4), flagged, hits
    x << 0.7, 0.2, 0.9, 0.4, 0.6, 3.49;
    Eigen::VectorXd r = round_for_indicator(x, schema, stats);
    CHECK(r[0] == 0.7);  // continuous passes through
    CHECK(r[1] == 0.0);
    CHECK(r[2] == 1.0);  // argmax slot
    CHECK(r[3] == 0.0);
    CHECK(r[4] == 1.0);  // binary >= 0.5
    CHECK(r[5] == 3.0);  // half up: 3.49 -> 3

    x[5] = 3.5;
    CHECK(round_for_indicator(x, schema, stats)[5] == 4.0);
    x[4] = 0.49;
    CHECK(round_for_indicator(x, schema, stats)[4] == 0.0);

    // Idempotent on already-valid records.
    Eigen::VectorXd valid(6);
    valid << -1.3, 0, 0, 1, 1, 7;
    CHECK(round_for_indicator(valid, schema, stats) == valid);

    // Under non-identity stats, rounding happens in raw space.
    NormalizationStats shifted;
    shifted.mean = Eigen::VectorXd::Constant(6, 2.0);
    shifted.std = Eigen::VectorXd::Constant(6, 4.0);
    Eigen::VectorXd raw(6);
    raw << 0.7, 0.2, 0.9, 0.4, 0.6, 3.49;
    Eigen::VectorXd rounded_raw(6);
    rounded_raw << 0.7, 0, 1, 0, 1, 3;
    CHECK((round_for_indicator(normalize(raw, shifted), schema, shifted) -
           normalize(rounded_raw, shifted))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("indicator gates on the optionally rounded point") {
    const FeatureSchema schema = testutil::tiny_schema();
    const NormalizationStats stats = testutil::identity_stats(6);

    // Class 0 iff hits >= 3.25; only the last slot matters.
    ClassifierModel m = ClassifierModel::linear(6);
    m.layers()[0].W.row(0) << 0, 0, 0, 0, 0, 4;
    m.layers()[0].b << -13, 0, -50;

    Eigen::VectorXd x(6);
    x << 0, 0, 1, 0, 0, 3.49;  // raw 3.49 -> class 0; rounds to 3 -> class 1
    CHECK(indicator(m, x, ClassLabel::Normal, false, schema, stats) == 0);
    CHECK(indicator(m, x, ClassLabel::Normal, true, schema, stats) == 1);
    CHECK(indicator(m, x, ClassLabel::Dos, false, schema, stats) == 1);
    x[5] = 3.51;  // rounds to 4 -> class 0 either way
    CHECK(indicator(m, x, ClassLabel::Normal, true, schema, stats) == 0);
}

TEST_CASE("adversarial_objective combines gate, cross-entropy and distance") {
    const FeatureSchema schema = testutil::plane_schema();
    const NormalizationStats stats = testutil::identity_stats(2);
    ClassifierModel m = plane_model(1, 0, 0);  // class 0 iff x >= 0
    ExplainConfig config = plane_config();
    config.q_diag = vec2(2, 2);

    // Already classified as target: the objective is pure distance, and
    // zero at x_hat = x0.
    Eigen::VectorXd x0 = vec2(0.5, 0.2);
    CHECK(adversarial_objective(m, x0, x0, ClassLabel::Normal, config, schema,
                                stats) == 0.0);
    // diff (1, -1) against q = (2, 2) -> 2*1 + 2*1 = 4.
    CHECK(adversarial_objective(m, vec2(0.5, 0.2), vec2(-0.5, 1.2),
                                ClassLabel::Normal, config, schema,
                                stats) == doctest::Approx(4.0));

    // Gated: at x_hat = x0 the quadratic vanishes and only alpha * H is left.
    Eigen::VectorXd wrong_side = vec2(0.5, 0.0);  // classified Normal, target Dos
    config.alpha = 1.0;
    CHECK(adversarial_objective(m, wrong_side, wrong_side, ClassLabel::Dos,
                                config, schema, stats) ==
          doctest::Approx(cross_entropy(one_hot(ClassLabel::Dos),
                                        m.forward_proba(wrong_side))));

    // The cross-entropy contribution scales exactly linearly in alpha.
    Eigen::VectorXd miss = vec2(-0.5, 0.0);
    const double at1 = adversarial_objective(m, miss, x0, ClassLabel::Normal,
                                             config, schema, stats);
    config.alpha = 2.0;
    const double at2 = adversarial_objective(m, miss, x0, ClassLabel::Normal,
                                             config, schema, stats);
    const double dist = (config.q_diag.array() *
                         (miss - x0).array().square()).sum();
    CHECK(at2 - dist == doctest::Approx(2.0 * (at1 - dist)));
}

TEST_CASE("project_box clamps coordinatewise and is idempotent") {
    Eigen::VectorXd lo = vec2(-1, 0);
    Eigen::VectorXd hi = vec2(1, 2);
    CHECK(project_box(vec2(0.5, 1.0), lo, hi) == vec2(0.5, 1.0));
    CHECK(project_box(vec2(-3, 5), lo, hi) == vec2(-1, 2));
    CHECK(project_box(vec2(2, -1), lo, hi) == vec2(1, 0));
    Eigen::VectorXd once = project_box(vec2(9, -9), lo, hi);
    CHECK(project_box(once, lo, hi) == once);
}

TEST_CASE("explain config validation") {
    ExplainConfig config = plane_config();
    config.validate();
    config.alpha = 0;
    CHECK_THROWS_AS(config.validate(), ValueError);

    config = plane_config();
    config.q_diag[1] = 0.0;
    CHECK_THROWS_AS(config.validate(), ValueError);

    config = plane_config();
    config.x_min = vec2(1, 1);
    config.x_max = vec2(0, 0);
    CHECK_THROWS_AS(config.validate(), ValueError);

    config = plane_config();
    config.x_min = Eigen::VectorXd::Zero(3);
    CHECK_THROWS_AS(config.validate(), ValueError);
}

TEST_CASE("correct_sample is a no-op for already-correct points") {
    const FeatureSchema schema = testutil::plane_schema();
    const NormalizationStats stats = testutil::identity_stats(2);
    ClassifierModel m = plane_model(1, 0, 0);
    ExplainConfig config = plane_config();

    Eigen::VectorXd x0 = vec2(0.4, -0.7);
    CorrectionResult r =
        correct_sample(m, x0, ClassLabel::Normal, config, schema, stats);
    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.x_hat == x0);  // bitwise: the iterate never moves
    CHECK(r.delta == Eigen::VectorXd::Zero(2));
    CHECK(r.feasible_distance == 0.0);
    CHECK(r.final_objective == 0.0);
}

TEST_CASE("correct_sample reports failure when no feasible point exists") {
    const FeatureSchema schema = testutil::plane_schema();
    const NormalizationStats stats = testutil::identity_stats(2);
    ClassifierModel m = ClassifierModel::linear(2);
    m.layers()[0].b << 10, 0, 0;  // class 0 everywhere
    ExplainConfig config = plane_config();
    config.max_iters = 50;

    CorrectionResult r = correct_sample(m, vec2(0, 0), ClassLabel::Dos, config,
                                        schema, stats);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 50);
    CHECK(std::isnan(r.feasible_distance));
    // Even the failed iterate respects the box.
    CHECK((r.x_hat.array() >= config.x_min.array()).all());
    CHECK((r.x_hat.array() <= config.x_max.array()).all());

    CHECK_THROWS_AS(correct_sample(m, vec2(5, 0), ClassLabel::Dos, config,
                                   schema, stats),
                    ValueError);  // x0 outside bounds
}

TEST_CASE("correct_sample matches a brute-force oracle on 2-D toys") {
    const FeatureSchema schema = testutil::plane_schema();
    const NormalizationStats stats = testutil::identity_stats(2);

    struct Toy {
        ClassifierModel model;
        Eigen::VectorXd x0;
        Eigen::VectorXd q_diag;
    };
    std::vector<Toy> toys;
    toys.push_back({plane_model(1, 0, 0), vec2(-0.5, 0.3), vec2(1, 1)});
    toys.push_back({plane_model(1, 1, 0), vec2(-0.6, -0.2), vec2(1, 1)});
    toys.push_back({plane_model(2, -1, -0.3), vec2(-0.5, 0.5), vec2(1, 1)});
    toys.push_back({plane_model(1, 0, -0.4), vec2(-0.2, 0.0), vec2(2, 0.5)});
    toys.push_back({plane_model(0, 1, -0.5), vec2(0.9, -0.9), vec2(1, 1)});

    for (std::size_t i = 0; i < toys.size(); ++i) {
        CAPTURE(i);
        ExplainConfig config = plane_config();
        config.q_diag = toys[i].q_diag;
        // Large alpha so the cross-entropy push dominates the quadratic
        // pull near the boundary; tiny steps for a precise best iterate.
        config.alpha = 20.0;
        config.step_size = 0.001;
        config.max_iters = 100000;
        config.tolerance = 1e-9;

        // x0 really is misclassified, so there is something to correct.
        REQUIRE(toys[i].model.predict_class(toys[i].x0) != ClassLabel::Normal);

        CorrectionResult r = correct_sample(toys[i].model, toys[i].x0,
                                            ClassLabel::Normal, config, schema,
                                            stats);
        REQUIRE(r.converged);
        const double oracle = testutil::brute_force_min_distance(
            toys[i].model, toys[i].x0, ClassLabel::Normal, config, schema,
            stats);
        REQUIRE(std::isfinite(oracle));
        CHECK(r.feasible_distance <= 1.02 * oracle);
        // The reported point really is feasible and in bounds.
        CHECK(indicator(toys[i].model, r.x_hat, ClassLabel::Normal, false,
                        schema, stats) == 0);
        CHECK((r.x_hat.array() >= config.x_min.array()).all());
        CHECK((r.x_hat.array() <= config.x_max.array()).all());
        CHECK(r.delta == Eigen::VectorXd(r.x0 - r.x_hat));
    }
}

TEST_CASE("feasible distance trace never increases") {
    const FeatureSchema schema = testutil::plane_schema();
    const NormalizationStats stats = testutil::identity_stats(2);
    ClassifierModel m = plane_model(1, 1, 0);
    ExplainConfig config = plane_config();
    config.record_trace = true;
    config.alpha = 20.0;
    config.step_size = 0.005;
    config.max_iters = 2000;

    CorrectionResult r = correct_sample(m, vec2(-0.6, -0.2), ClassLabel::Normal,
                                        config, schema, stats);
    REQUIRE(r.converged);
    REQUIRE_FALSE(r.feasible_distance_trace.empty());
    CHECK(r.objective_trace.size() == r.feasible_distance_trace.size());
    for (std::size_t i = 1; i < r.feasible_distance_trace.size(); ++i)
        CHECK(r.feasible_distance_trace[i] <= r.feasible_distance_trace[i - 1]);
    CHECK(r.feasible_distance_trace.back() == r.feasible_distance);
}

TEST_CASE("explain_set preserves order and inputs") {
    const FeatureSchema schema = testutil::plane_schema();
    const NormalizationStats stats = testutil::identity_stats(2);
    ClassifierModel m = plane_model(1, 0, 0);
    ExplainConfig config = plane_config();
    config.max_iters = 200;

    std::vector<Eigen::VectorXd> samples = {vec2(-0.5, 0.3), vec2(0.7, 0.0),
                                            vec2(-0.1, -0.9)};
    auto results = explain_set(m, samples, ClassLabel::Normal, config, schema,
                               stats);
    REQUIRE(results.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        CHECK(results[i].x0 == samples[i]);
    CHECK(results[1].iterations == 0);  // already classified as target
}

TEST_CASE("default_explain_config mirrors the dataset geometry") {
    auto ss = testutil::synth_stream(300, 11);
    Dataset ds = build_train_dataset(ss, FeatureSchema::nsl_kdd());
    ExplainConfig config = default_explain_config(ds);
    config.validate();
    CHECK(config.q_diag == Eigen::VectorXd::Ones(ds.X.cols()));
    CHECK(config.x_min == ds.x_min);
    CHECK(config.x_max == ds.x_max);
    CHECK(config.alpha == 1.0);
}

}  // TEST_SUITE
