#pragma once

// Shared fixtures for the unit suites: tiny schemas, identity
// normalization stats, and small synthetic datasets.

#include <Eigen/Dense>
#include <sstream>
#include <string>
#include <vector>

#include "advexplain/dataset.hpp"
#include "advexplain/schema.hpp"
#include "advexplain/synth.hpp"

namespace testutil {

// duration (continuous), protocol (categorical, 3 levels), flagged
// (binary), hits (integer): encoded_dim = 6.
inline advexplain::FeatureSchema tiny_schema() {
    using advexplain::FeatureKind;
    std::vector<advexplain::FeatureSpec> specs(4);
    specs[0].name = "duration";
    specs[0].kind = FeatureKind::Continuous;
    specs[1].name = "protocol";
    specs[1].kind = FeatureKind::Categorical;
    specs[1].levels = {"icmp", "tcp", "udp"};
    specs[2].name = "flagged";
    specs[2].kind = FeatureKind::Binary;
    specs[3].name = "hits";
    specs[3].kind = FeatureKind::Integer;
    return advexplain::FeatureSchema(std::move(specs));
}

// Two unconstrained continuous features; handy for 2-D toy classifiers.
inline advexplain::FeatureSchema plane_schema() {
    std::vector<advexplain::FeatureSpec> specs(2);
    specs[0].name = "x";
    specs[0].kind = advexplain::FeatureKind::Continuous;
    specs[1].name = "y";
    specs[1].kind = advexplain::FeatureKind::Continuous;
    return advexplain::FeatureSchema(std::move(specs));
}

inline advexplain::NormalizationStats identity_stats(int dim) {
    advexplain::NormalizationStats stats;
    stats.mean = Eigen::VectorXd::Zero(dim);
    stats.std = Eigen::VectorXd::Ones(dim);
    return stats;
}

// In-memory synthetic NSL-KDD-format split.
inline std::stringstream synth_stream(std::size_t n, std::uint64_t seed) {
    std::stringstream ss;
    advexplain::write_synthetic_nslkdd(ss, {n, seed, true});
    return ss;
}

}  // namespace testutil
