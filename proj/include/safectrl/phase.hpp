#pragma once

#include "safectrl/controllers.hpp"

namespace safectrl {

// A 2-D position slice of the ball state space at fixed velocity, with a
// static obstacle and a fixed goal for the reference control.
struct PhaseSliceSpec {
    Eigen::Vector2d velocity{1.0, 0.0};
    Eigen::Vector2d obstacle_position{0.0, 0.0};
    Eigen::Vector2d goal{4.0, 0.0};
    double xmin = -4.0, xmax = 4.0, ymin = -4.0, ymax = 4.0;
    int resolution_x = 41, resolution_y = 41;
    ReferenceGains gains;
};

struct PhasePoint {
    double x = 0.0, y = 0.0;
    double phi = 0.0;
    Eigen::Vector2d u0, u;
};

// Safe control evaluated over the slice; arrows u - u0 plus phi values for
// contour plotting.
std::vector<PhasePoint> phase_portrait(const ControllerConfig& cfg, const PhaseSliceSpec& spec);

}  // namespace safectrl
