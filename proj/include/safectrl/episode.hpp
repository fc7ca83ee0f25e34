#pragma once

#include <optional>

#include "safectrl/controllers.hpp"
#include "safectrl/estimation.hpp"
#include "safectrl/human.hpp"
#include "safectrl/scenario.hpp"

namespace safectrl {

struct EstimationSettings {
    bool perfect_sensing = false;
    double meas_sigma = 0.01;  // position measurement noise, m (rad for joints)
};

struct EpisodeConfig {
    RobotModel model;
    ControllerConfig controller;
    ReferenceGains gains;
    HumanParams human;
    EstimationSettings estimation;
    IntegratorConfig integrator;
    double goal_radius = 0.5;
    double collision_distance = 0.25;
    // Execution-side acceleration limit of the simulated robot. The control
    // laws themselves are unconstrained; near-singular constraint directions
    // (||lg_phi|| -> 0 on the arms) can command arbitrarily large corrections
    // that no plant could track. The log keeps the commanded control.
    double exec_accel_limit = 50.0;
};

struct FrameRecord {
    double t = 0.0;
    Vec robot_state;
    Eigen::Vector4d human_state;
    Vec u0, u;
    double phi = 0.0;    // controller's view (estimated states)
    double d = 0.0;      // true minimum distance
    double d_dot = 0.0;  // true approach rate
    bool intervened = false;
    bool degenerate = false;
};

struct GoalEvent {
    bool robot = true;
    int index = 0;
    double t = 0.0;
};

struct EpisodeLog {
    std::vector<FrameRecord> frames;
    std::vector<GoalEvent> goal_events;
    bool collided = false;
    double collision_time = -1.0;
    bool interactive = false;
    bool valid = true;
    std::string diagnostics;
    int sma_warnings = 0;
    int degenerate_frames = 0;
};

// Start states are a pure function of the scenario seed (identical for every
// controller); the human is placed at least 1.5 m from the robot skeleton.
Vec initial_robot_state(const RobotModel& model, const Scenario& scenario);
Eigen::Vector4d initial_human_state(const RobotModel& model, const Scenario& scenario);

// Goals are stored in workspace coordinates; arm models remap them
// deterministically into their reachable annulus.
Eigen::Vector2d remap_goal(const RobotModel& model, const Eigen::Vector2d& goal,
                           const Workspace& workspace, bool robot_goal);

// Runs one episode: per frame, Kalman predict/update (or perfect sensing),
// safety evaluation from the estimated states, reference control toward the
// current goal, the safe control law, then one control period of physics for
// both agents, goal bookkeeping, and the collision check. After a collision
// the robot freezes and the episode runs to full length.
EpisodeLog run_episode(const EpisodeConfig& cfg, const Scenario& scenario);

}  // namespace safectrl
