#pragma once

// Brute-force reference for 2-D correction problems: scan the box on a
// regular grid and return the smallest quadratic distance to x0 over all
// grid points the model classifies as the target class. Shared by the
// unit suite and the acceptance gate.

#include <Eigen/Dense>
#include <limits>

#include "advexplain/explainer.hpp"

namespace testutil {

inline double brute_force_min_distance(const advexplain::ClassifierModel& model,
                                       const Eigen::VectorXd& x0,
                                       advexplain::ClassLabel target_class,
                                       const advexplain::ExplainConfig& config,
                                       const advexplain::FeatureSchema& schema,
                                       const advexplain::NormalizationStats& stats,
                                       double grid_step = 1e-3) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd p(2);
    for (double a = config.x_min[0]; a <= config.x_max[0] + grid_step / 2;
         a += grid_step) {
        for (double b = config.x_min[1]; b <= config.x_max[1] + grid_step / 2;
             b += grid_step) {
            p[0] = a;
            p[1] = b;
            if (advexplain::indicator(model, p, target_class,
                                      config.rounding_enabled, schema, stats) != 0)
                continue;
            const Eigen::VectorXd diff = p - x0;
            const double d = (config.q_diag.array() * diff.array().square()).sum();
            if (d < best) best = d;
        }
    }
    return best;
}

}  // namespace testutil
