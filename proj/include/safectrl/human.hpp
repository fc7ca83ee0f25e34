#pragma once

#include "safectrl/rng.hpp"
#include "safectrl/scenario.hpp"

namespace safectrl {

enum class HumanKind { Passive, GoalSeeking, Interactive };

const char* human_kind_name(HumanKind kind);
HumanKind human_kind_from_name(const std::string& name);

// The human agent is a 2D ball (double integrator). Passive replays a
// trajectory pre-rolled from the goal-seeking law without robot coupling, so
// every controller sees bit-identical human motion on the same scenario.
struct HumanParams {
    HumanKind kind = HumanKind::Passive;
    double kp = 4.0;
    double kd = 4.0;
    double noise_sigma = 0.2;  // control noise, m/s^2
    double avoid_gain = 2.0;   // Interactive repulsion gain
    double a_max = 5.0;

    // Parameterization of a human that never moves (for invariance suites).
    static HumanParams static_human() {
        HumanParams p;
        p.kind = HumanKind::Passive;
        p.kp = 0.0;
        p.kd = 0.0;
        p.noise_sigma = 0.0;
        return p;
    }
};

// Goal-seeking acceleration: PD toward the goal plus Gaussian control noise,
// clamped to a_max. Consumes two Gaussian draws regardless of sigma so that
// streams align across configurations.
Eigen::Vector2d human_goal_seek_accel(const HumanParams& params, const Eigen::Vector4d& human,
                                      const Eigen::Vector2d& goal, Rng& rng);

// Full control law: goal seeking plus, in Interactive mode, inverse-square
// repulsion avoid_gain * (p_h - p_r) / ||p_h - p_r||^3 capped at a_max.
Eigen::Vector2d human_step_control(const HumanParams& params, const Eigen::Vector4d& human,
                                   const Eigen::Vector2d& robot_position,
                                   const Eigen::Vector2d& goal, Rng& rng);

struct HumanTrajectory {
    std::vector<Eigen::Vector4d> states;  // frame_count + 1 states
    std::vector<std::pair<int, double>> goal_events;  // (goal index, time)
};

// Pre-rolls the human alone over the scenario (no robot coupling).
HumanTrajectory preroll_human(const HumanParams& params, const Scenario& scenario,
                              const Eigen::Vector4d& start,
                              const std::vector<Eigen::Vector2d>& goals,
                              const IntegratorConfig& integrator, double goal_radius);

}  // namespace safectrl
