#pragma once

#include "safectrl/metrics.hpp"

namespace safectrl {

// Parameter grids for one algorithm: every (d_min, k, param) combination runs
// the full scenario set.
struct SweepSpec {
    RobotModel model;
    Algorithm algorithm = Algorithm::SSA;
    std::vector<double> dmin_grid{0.5, 1.0, 1.5, 2.0, 3.0};
    std::vector<double> k_grid{0.5, 1.0, 2.0};
    std::vector<double> param_grid;  // default: default_param_grid(algorithm)
    HumanParams human;
    EstimationSettings estimation;
    ReferenceGains gains;
    double d_s = 2.0;
};

// Five log-spaced magnitudes; negated for the slack/rate parameters.
std::vector<double> default_param_grid(Algorithm alg);

struct SweepPoint {
    double d_min = 0.0, k = 0.0, param = 0.0;
    double mean_safety = 0.0;
    double mean_efficiency = 0.0;
    double mean_intervention_rate = 0.0;
    bool any_collision = false;
    int invalid_episodes = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<int> frontier;  // indices into points, safety ascending
    std::optional<double> hybrid;
};

SweepResult tradeoff_sweep(const SweepSpec& spec, const std::vector<Scenario>& scenarios,
                           int threads = 0);

// Upper-right convex hull of (safety, efficiency) points: dominated points
// and points strictly below the hull chain are removed; collinear chain
// points are kept. Returns indices ordered by safety ascending.
std::vector<int> upper_right_frontier(const std::vector<std::pair<double, double>>& points);

}  // namespace safectrl
