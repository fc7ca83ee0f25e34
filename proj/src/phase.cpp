#include "safectrl/phase.hpp"

namespace safectrl {

std::vector<PhasePoint> phase_portrait(const ControllerConfig& cfg, const PhaseSliceSpec& spec) {
    cfg.validate();
    if (spec.resolution_x < 1 || spec.resolution_y < 1)
        throw RejectedInputError("phase grid resolution must be >= 1");

    const RobotModel ball = RobotModel::ball2d();
    const ObstacleState obstacle =
        ObstacleState::static_at((Vec(2) << spec.obstacle_position.x(),
                                  spec.obstacle_position.y()).finished());

    auto coordinate = [](double lo, double hi, int n, int i) {
        if (n == 1) return 0.5 * (lo + hi);
        return lo + (hi - lo) * i / (n - 1);
    };

    std::vector<PhasePoint> out;
    out.reserve(static_cast<std::size_t>(spec.resolution_x) * spec.resolution_y);
    for (int iy = 0; iy < spec.resolution_y; ++iy) {
        for (int ix = 0; ix < spec.resolution_x; ++ix) {
            PhasePoint pt;
            pt.x = coordinate(spec.xmin, spec.xmax, spec.resolution_x, ix);
            pt.y = coordinate(spec.ymin, spec.ymax, spec.resolution_y, iy);
            // nudge off the obstacle where phi is singular
            if (std::hypot(pt.x - spec.obstacle_position.x(),
                           pt.y - spec.obstacle_position.y()) < 1e-3)
                pt.x = spec.obstacle_position.x() + 1e-3;

            Vec x(4);
            x << pt.x, pt.y, spec.velocity.x(), spec.velocity.y();
            const SafetyEvaluation eval =
                lie_derivatives(ball, x, obstacle, cfg.safety_params);
            Vec goal(2);
            goal << spec.goal.x(), spec.goal.y();
            const Vec u0 = reference_controller(ball, x, goal, spec.gains);
            const SafeControlOutput res = unified_control(cfg, u0, eval);
            pt.phi = eval.phi;
            pt.u0 = Eigen::Vector2d(u0(0), u0(1));
            pt.u = Eigen::Vector2d(res.u(0), res.u(1));
            out.push_back(pt);
        }
    }
    return out;
}

}  // namespace safectrl
