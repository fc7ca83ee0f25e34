#include "safectrl/human.hpp"

namespace safectrl {

const char* human_kind_name(HumanKind kind) {
    switch (kind) {
        case HumanKind::Passive: return "passive";
        case HumanKind::GoalSeeking: return "goalseek";
        case HumanKind::Interactive: return "interactive";
    }
    return "?";
}

HumanKind human_kind_from_name(const std::string& name) {
    if (name == "passive") return HumanKind::Passive;
    if (name == "goalseek" || name == "goalseeking") return HumanKind::GoalSeeking;
    if (name == "interactive") return HumanKind::Interactive;
    throw RejectedInputError("unknown human model: " + name);
}

namespace {

Eigen::Vector2d clamp_norm(Eigen::Vector2d v, double max_norm) {
    const double n = v.norm();
    if (n > max_norm) v *= max_norm / n;
    return v;
}

}  // namespace

Eigen::Vector2d human_goal_seek_accel(const HumanParams& params, const Eigen::Vector4d& human,
                                      const Eigen::Vector2d& goal, Rng& rng) {
    Eigen::Vector2d a = params.kp * (goal - human.head<2>()) - params.kd * human.tail<2>();
    const double nx = rng.gaussian();
    const double ny = rng.gaussian();
    a.x() += params.noise_sigma * nx;
    a.y() += params.noise_sigma * ny;
    return clamp_norm(a, params.a_max);
}

Eigen::Vector2d human_step_control(const HumanParams& params, const Eigen::Vector4d& human,
                                   const Eigen::Vector2d& robot_position,
                                   const Eigen::Vector2d& goal, Rng& rng) {
    Eigen::Vector2d a = human_goal_seek_accel(params, human, goal, rng);
    if (params.kind == HumanKind::Interactive) {
        const Eigen::Vector2d rel = human.head<2>() - robot_position;
        const double r = rel.norm();
        if (r > 1e-9) {
            const Eigen::Vector2d repulsion =
                clamp_norm(params.avoid_gain * rel / (r * r * r), params.a_max);
            a = clamp_norm(a + repulsion, params.a_max);
        }
    }
    return a;
}

HumanTrajectory preroll_human(const HumanParams& params, const Scenario& scenario,
                              const Eigen::Vector4d& start,
                              const std::vector<Eigen::Vector2d>& goals,
                              const IntegratorConfig& integrator, double goal_radius) {
    const RobotModel ball = RobotModel::ball2d();
    // The human noise stream depends on the scenario only, never on the
    // robot's controller, so all controllers face the same trajectory.
    Rng rng(Rng::mix(scenario.seed, 0x68756d616eULL));

    HumanTrajectory traj;
    const int frames = scenario.frame_count();
    traj.states.reserve(frames + 1);
    traj.states.push_back(start);

    Eigen::Vector4d h = start;
    std::size_t goal_idx = 0;
    for (int k = 0; k < frames; ++k) {
        const Eigen::Vector2d goal = goals.empty() ? Eigen::Vector2d(h.head<2>())
                                                   : goals[goal_idx % goals.size()];
        const Eigen::Vector2d a = human_goal_seek_accel(params, h, goal, rng);
        Vec hx(4);
        hx << h(0), h(1), h(2), h(3);
        Vec u(2);
        u << a(0), a(1);
        const Vec next = step(ball, hx, u, integrator);
        h = Eigen::Vector4d(next(0), next(1), next(2), next(3));
        if (!goals.empty() && (h.head<2>() - goal).norm() < goal_radius) {
            traj.goal_events.emplace_back(static_cast<int>(goal_idx),
                                          (k + 1) * integrator.control_dt);
            ++goal_idx;
        }
        traj.states.push_back(h);
    }
    return traj;
}

}  // namespace safectrl
