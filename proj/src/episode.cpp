#include "safectrl/episode.hpp"

#include <bit>
#include <cmath>

namespace safectrl {

namespace {

constexpr std::uint64_t kStartStream = 0x7374617274ULL;
constexpr std::uint64_t kMeasStream = 0x6d656173ULL;
constexpr double kMinStartSeparation = 1.5;

Vec lift(const Eigen::Vector2d& p, int dim) {
    Vec v = Vec::Zero(dim);
    v(0) = p.x();
    v(1) = p.y();
    return v;
}

std::uint64_t hash_double(double v) { return std::bit_cast<std::uint64_t>(v); }

// Measurement noise stream: decorrelated across algorithm and parameters but
// reproducible for identical configurations.
std::uint64_t measurement_seed(const Scenario& sc, const EpisodeConfig& cfg) {
    std::uint64_t s = Rng::mix(sc.seed, kMeasStream);
    s = Rng::mix(s, static_cast<std::uint64_t>(cfg.controller.algorithm));
    s = Rng::mix(s, hash_double(cfg.controller.safety_params.d_min));
    s = Rng::mix(s, hash_double(cfg.controller.safety_params.k));
    s = Rng::mix(s, hash_double(cfg.controller.algorithm_param()));
    return s;
}

struct RobotStart {
    Vec state;
};

Vec draw_robot_state(const RobotModel& model, const Workspace& ws, Rng& rng) {
    const double mx = 0.1 * (ws.xmax - ws.xmin);
    const double my = 0.1 * (ws.ymax - ws.ymin);
    Vec x = Vec::Zero(model.nx());
    switch (model.kind) {
        case ModelKind::Ball2D:
            x(0) = rng.uniform(ws.xmin + mx, ws.xmax - mx);
            x(1) = rng.uniform(ws.ymin + my, ws.ymax - my);
            break;
        case ModelKind::Unicycle:
            x(0) = rng.uniform(ws.xmin + mx, ws.xmax - mx);
            x(1) = rng.uniform(ws.ymin + my, ws.ymax - my);
            x(3) = rng.uniform(-M_PI, M_PI);
            break;
        case ModelKind::Scara:
            x(0) = rng.uniform(-M_PI, M_PI);
            x(1) = rng.uniform(-M_PI, M_PI);
            break;
        case ModelKind::Arm4Dof:
            x(0) = rng.uniform(-M_PI, M_PI);
            for (int j = 1; j < 4; ++j) x(j) = rng.uniform(-1.2, 1.2);
            break;
    }
    return x;
}

}  // namespace

Eigen::Vector2d remap_goal(const RobotModel& model, const Eigen::Vector2d& goal,
                           const Workspace& ws, bool robot_goal) {
    double r_lo = 0.0, r_hi = 0.0;
    switch (model.kind) {
        case ModelKind::Ball2D:
        case ModelKind::Unicycle:
            return goal;
        case ModelKind::Scara:
            r_lo = robot_goal ? 0.5 : 0.8;
            r_hi = robot_goal ? 1.8 : 2.6;
            break;
        case ModelKind::Arm4Dof:
            r_lo = robot_goal ? 1.6 : 1.0;
            r_hi = robot_goal ? 3.4 : 4.4;
            break;
    }
    const double r_max = std::hypot(std::max(std::abs(ws.xmin), std::abs(ws.xmax)),
                                    std::max(std::abs(ws.ymin), std::abs(ws.ymax)));
    const double r = goal.norm();
    double angle = r > 1e-12 ? std::atan2(goal.y(), goal.x()) : 0.0;
    // Human goals live in an angular sector: chords between any two of them
    // clear the arm's anchored base, so collisions stay controller-avoidable.
    if (!robot_goal) angle *= 55.0 / 180.0;
    const double rr = r_lo + (r_hi - r_lo) * std::min(1.0, r / r_max);
    return {rr * std::cos(angle), rr * std::sin(angle)};
}

Vec initial_robot_state(const RobotModel& model, const Scenario& scenario) {
    Rng rng(Rng::mix(scenario.seed, kStartStream));
    return draw_robot_state(model, scenario.workspace, rng);
}

Eigen::Vector4d initial_human_state(const RobotModel& model, const Scenario& scenario) {
    Rng rng(Rng::mix(scenario.seed, kStartStream));
    const Vec robot = draw_robot_state(model, scenario.workspace, rng);

    const Workspace& ws = scenario.workspace;
    const double mx = 0.1 * (ws.xmax - ws.xmin);
    const double my = 0.1 * (ws.ymax - ws.ymin);
    Eigen::Vector2d p;
    for (int attempt = 0; attempt < 64; ++attempt) {
        p.x() = rng.uniform(ws.xmin + mx, ws.xmax - mx);
        p.y() = rng.uniform(ws.ymin + my, ws.ymax - my);
        if (model.kind == ModelKind::Scara || model.kind == ModelKind::Arm4Dof)
            p = remap_goal(model, p, ws, false);
        const auto [c_r, arc] = critical_point(model, robot, lift(p, model.workspace_dim()));
        if ((c_r - lift(p, model.workspace_dim())).norm() >= kMinStartSeparation) break;
    }
    return {p.x(), p.y(), 0.0, 0.0};
}

namespace {

// Per-agent linear filters. Arms are exact linear double integrators in
// configuration space; the unicycle runs a constant-velocity filter on its
// Cartesian position channel (heading reconstructed from the velocity
// estimate); the human is always a constant-velocity Cartesian filter.
struct RobotEstimator {
    KalmanConfig kf;
    GaussianBelief belief;
    bool cartesian = false;  // unicycle channel
    double theta_hat = 0.0;

    static KalmanConfig double_integrator(int n, double dt, double sigma) {
        KalmanConfig cfg;
        cfg.A = Mat::Identity(2 * n, 2 * n);
        cfg.A.topRightCorner(n, n) = dt * Mat::Identity(n, n);
        cfg.B = Mat::Zero(2 * n, n);
        cfg.B.topRows(n) = 0.5 * dt * dt * Mat::Identity(n, n);
        cfg.B.bottomRows(n) = dt * Mat::Identity(n, n);
        cfg.C = Mat::Zero(n, 2 * n);
        cfg.C.leftCols(n).setIdentity();
        cfg.Q = 1e-8 * Mat::Identity(2 * n, 2 * n);
        cfg.R = sigma * sigma * Mat::Identity(n, n);
        return cfg;
    }

    static KalmanConfig constant_velocity(double dt, double sigma, double accel_scale) {
        KalmanConfig cfg = double_integrator(2, dt, sigma);
        cfg.B.setZero();  // driving input unknown to the filter
        const double q = accel_scale * accel_scale;
        Mat Q = Mat::Zero(4, 4);
        Q.topLeftCorner(2, 2) = 0.25 * dt * dt * dt * dt * q * Mat::Identity(2, 2);
        Q.topRightCorner(2, 2) = 0.5 * dt * dt * dt * q * Mat::Identity(2, 2);
        Q.bottomLeftCorner(2, 2) = 0.5 * dt * dt * dt * q * Mat::Identity(2, 2);
        Q.bottomRightCorner(2, 2) = dt * dt * q * Mat::Identity(2, 2);
        cfg.Q = Q;
        return cfg;
    }

    void init(const RobotModel& model, const Vec& x_true, double dt, double sigma) {
        if (model.kind == ModelKind::Unicycle) {
            cartesian = true;
            kf = constant_velocity(dt, sigma, 5.0);
            belief.mean = Vec::Zero(4);
            belief.mean.head(2) = x_true.head(2);
            belief.mean(2) = x_true(2) * std::cos(x_true(3));
            belief.mean(3) = x_true(2) * std::sin(x_true(3));
            theta_hat = x_true(3);
        } else {
            const int n = model.nu();
            kf = double_integrator(n, dt, sigma);
            belief.mean = x_true;
        }
        belief.covariance = 1e-4 * Mat::Identity(belief.mean.size(), belief.mean.size());
    }

    void advance(const RobotModel& model, const Vec& u, const Vec& x_true, double sigma,
                 Rng& rng) {
        Vec u_kf = cartesian ? Vec(Vec::Zero(2)) : u;
        belief = kf_predict(kf, belief, u_kf);
        Vec z(kf.C.rows());
        for (int i = 0; i < z.size(); ++i) z(i) = x_true(i) + sigma * rng.gaussian();
        belief = kf_update(kf, belief, z);
    }

    Vec estimate(const RobotModel& model, const Vec& x_true) {
        if (!cartesian) return belief.mean;
        Vec x(4);
        x.head(2) = belief.mean.head(2);
        const Eigen::Vector2d v(belief.mean(2), belief.mean(3));
        x(2) = v.norm();
        if (v.norm() > 0.05) theta_hat = std::atan2(v.y(), v.x());
        x(3) = theta_hat;
        return x;
    }
};

struct HumanEstimator {
    KalmanConfig kf;
    GaussianBelief belief;

    void init(const Eigen::Vector4d& h_true, double dt, double sigma) {
        kf = RobotEstimator::constant_velocity(dt, sigma, 5.0);
        belief.mean = Vec(4);
        belief.mean << h_true(0), h_true(1), h_true(2), h_true(3);
        belief.covariance = 1e-4 * Mat::Identity(4, 4);
    }

    void advance(const Eigen::Vector4d& h_true, double sigma, Rng& rng) {
        belief = kf_predict(kf, belief, Vec::Zero(2));
        Vec z(2);
        z << h_true(0) + sigma * rng.gaussian(), h_true(1) + sigma * rng.gaussian();
        belief = kf_update(kf, belief, z);
    }
};

}  // namespace

EpisodeLog run_episode(const EpisodeConfig& cfg, const Scenario& scenario) {
    cfg.controller.validate();
    const RobotModel& model = cfg.model;
    const int wdim = model.workspace_dim();
    const int frames = scenario.frame_count();
    // the scenario's frame rate sets the control period
    IntegratorConfig integrator{1.0 / scenario.fps, cfg.integrator.substeps};
    const double dt = integrator.control_dt;

    EpisodeLog log;
    log.interactive = cfg.human.kind == HumanKind::Interactive;
    log.frames.reserve(frames);

    // Goals in the model's frame.
    std::vector<Eigen::Vector2d> robot_goals, human_goals;
    robot_goals.reserve(scenario.robot_goals.size());
    for (const auto& g : scenario.robot_goals)
        robot_goals.push_back(remap_goal(model, g, scenario.workspace, true));
    for (const auto& g : scenario.human_goals)
        human_goals.push_back(remap_goal(model, g, scenario.workspace, false));

    Vec x = initial_robot_state(model, scenario);
    Eigen::Vector4d h = initial_human_state(model, scenario);

    HumanTrajectory preroll;
    if (cfg.human.kind == HumanKind::Passive)
        preroll = preroll_human(cfg.human, scenario, h, human_goals, integrator,
                                cfg.goal_radius);

    Rng human_rng(Rng::mix(scenario.seed, 0x68756d616eULL));
    Rng meas_rng(measurement_seed(scenario, cfg));

    RobotEstimator robot_est;
    HumanEstimator human_est;
    if (!cfg.estimation.perfect_sensing) {
        robot_est.init(model, x, dt, cfg.estimation.meas_sigma);
        human_est.init(h, dt, cfg.estimation.meas_sigma);
    }

    std::size_t robot_goal_idx = 0;
    std::size_t human_goal_idx = 0;
    bool frozen = false;
    Vec last_u = Vec::Zero(model.nu());

    for (int k = 0; k < frames; ++k) {
        const double t = k * dt;
        FrameRecord rec;
        rec.t = t;
        rec.robot_state = x;
        rec.human_state = h;

        // (1) state estimation
        Vec x_hat = x;
        Eigen::Vector4d h_hat = h;
        if (!cfg.estimation.perfect_sensing) {
            robot_est.advance(model, last_u, x, cfg.estimation.meas_sigma, meas_rng);
            human_est.advance(h, cfg.estimation.meas_sigma, meas_rng);
            x_hat = robot_est.estimate(model, x);
            h_hat = Eigen::Vector4d(human_est.belief.mean(0), human_est.belief.mean(1),
                                    human_est.belief.mean(2), human_est.belief.mean(3));
        }

        ObstacleState obs_true{lift(h.head<2>(), wdim), lift(h.tail<2>(), wdim)};
        ObstacleState obs_hat{lift(h_hat.head<2>(), wdim), lift(h_hat.tail<2>(), wdim)};

        try {
            const CriticalPair true_pair = critical_pair(model, x, obs_true);
            rec.d = true_pair.d;
            rec.d_dot = true_pair.d_dot;

            if (!frozen) {
                // (2)-(4) safety evaluation, reference control, safe control
                const SafetyEvaluation eval =
                    lie_derivatives(model, x_hat, obs_hat, cfg.controller.safety_params);
                const Eigen::Vector2d goal2 = robot_goals[robot_goal_idx % robot_goals.size()];
                const Vec u0 = reference_controller(model, x_hat, lift(goal2, wdim), cfg.gains);
                const SafeControlOutput out = unified_control(cfg.controller, u0, eval);

                rec.phi = eval.phi;
                rec.u0 = u0;
                rec.u = out.u;
                rec.intervened = out.intervened;
                rec.degenerate = out.diagnostics.degenerate;
                if (out.diagnostics.degenerate) ++log.degenerate_frames;
                if (out.diagnostics.sma_rate_warning) ++log.sma_warnings;

                // (5) integrate the robot; the plant tracks the command up to
                // its acceleration limit
                Vec u_exec = out.u;
                const double u_norm = u_exec.norm();
                if (cfg.exec_accel_limit > 0.0 && u_norm > cfg.exec_accel_limit)
                    u_exec *= cfg.exec_accel_limit / u_norm;
                x = step(model, x, u_exec, integrator);
                last_u = u_exec;
            } else {
                rec.phi = phi(cfg.controller.safety_params, true_pair);
                rec.u0 = Vec::Zero(model.nu());
                rec.u = Vec::Zero(model.nu());
            }
        } catch (const CoincidentPointsError&) {
            // Contact: record the collision and freeze the robot below.
            rec.phi = cfg.controller.safety_params.d_min * cfg.controller.safety_params.d_min;
            rec.d = 0.0;
            rec.d_dot = 0.0;
            rec.u0 = Vec::Zero(model.nu());
            rec.u = Vec::Zero(model.nu());
        } catch (const NumericalBlowupError& e) {
            log.valid = false;
            log.diagnostics = e.what();
            log.frames.push_back(std::move(rec));
            break;
        } catch (const IllConditionedGradientError& e) {
            log.valid = false;
            log.diagnostics = e.what();
            log.frames.push_back(std::move(rec));
            break;
        }

        // (5) integrate the human
        if (cfg.human.kind == HumanKind::Passive) {
            h = preroll.states[k + 1];
        } else {
            const Eigen::Vector2d goal = human_goals[human_goal_idx % human_goals.size()];
            const Eigen::Vector2d a =
                human_step_control(cfg.human, h, Eigen::Vector2d(x(0), x(1)), goal, human_rng);
            Vec hx(4);
            hx << h(0), h(1), h(2), h(3);
            Vec hu(2);
            hu << a(0), a(1);
            const Vec next = step(RobotModel::ball2d(), hx, hu, integrator);
            h = Eigen::Vector4d(next(0), next(1), next(2), next(3));
        }

        // (6) goal bookkeeping
        if (!frozen) {
            const Eigen::Vector2d goal2 = robot_goals[robot_goal_idx % robot_goals.size()];
            if ((end_effector(model, x) - lift(goal2, wdim)).norm() < cfg.goal_radius) {
                log.goal_events.push_back({true, static_cast<int>(robot_goal_idx), t + dt});
                ++robot_goal_idx;
            }
        }
        if (cfg.human.kind != HumanKind::Passive) {
            const Eigen::Vector2d goal = human_goals[human_goal_idx % human_goals.size()];
            if ((h.head<2>() - goal).norm() < cfg.goal_radius) {
                log.goal_events.push_back({false, static_cast<int>(human_goal_idx), t + dt});
                ++human_goal_idx;
            }
        }

        // (7) collision check
        if (!log.collided) {
            const auto [c_r, arc] = critical_point(model, x, lift(h.head<2>(), wdim));
            const double d_now = (c_r - lift(h.head<2>(), wdim)).norm();
            if (d_now < cfg.collision_distance) {
                log.collided = true;
                log.collision_time = t + dt;
                frozen = true;
                x.tail(model.nu()).setZero();
                last_u = Vec::Zero(model.nu());
            }
        }

        log.frames.push_back(std::move(rec));
    }

    // Passive human goal events come from the pre-roll (robot-independent).
    if (cfg.human.kind == HumanKind::Passive) {
        for (const auto& [idx, tg] : preroll.goal_events)
            log.goal_events.push_back({false, idx, tg});
    }

    return log;
}

}  // namespace safectrl
