#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>

#include "safectrl/io.hpp"
#include "safectrl/metrics.hpp"
#include "safectrl/phase.hpp"
#include "safectrl/scenario.hpp"
#include "safectrl/sweep.hpp"

using namespace safectrl;

namespace {

EpisodeConfig ball_episode_config(Algorithm alg) {
    EpisodeConfig cfg;
    cfg.model = RobotModel::ball2d();
    cfg.controller.algorithm = alg;
    cfg.controller.safety_params = {1.0, 1.0};
    cfg.controller.eta = -0.5;
    cfg.controller.lambda = -1.0;
    cfg.estimation.perfect_sensing = true;
    return cfg;
}

bool same_frames(const EpisodeLog& a, const EpisodeLog& b) {
    if (a.frames.size() != b.frames.size()) return false;
    for (std::size_t i = 0; i < a.frames.size(); ++i) {
        if (a.frames[i].robot_state != b.frames[i].robot_state) return false;
        if (a.frames[i].human_state != b.frames[i].human_state) return false;
        if (a.frames[i].u != b.frames[i].u) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("generate_scenarios: determinism and bounds") {
    const auto a = generate_scenarios(7, 40);
    const auto b = generate_scenarios(7, 40);
    REQUIRE(a.size() == 40);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].robot_goals == b[i].robot_goals);
        CHECK(a[i].human_goals == b[i].human_goals);
        for (const auto& g : a[i].robot_goals) {
            CHECK(g.x() >= a[i].workspace.xmin);
            CHECK(g.x() <= a[i].workspace.xmax);
            CHECK(g.y() >= a[i].workspace.ymin);
            CHECK(g.y() <= a[i].workspace.ymax);
        }
        CHECK(a[i].robot_goals.size() >= 30);
        CHECK(a[i].human_goals.size() >= 30);
    }
}

TEST_CASE("generate_scenarios: neighbouring master seeds differ") {
    const auto a = generate_scenarios(100, 1);
    const auto b = generate_scenarios(101, 1);
    CHECK(a[0].robot_goals[0] != b[0].robot_goals[0]);
}

TEST_CASE("generate_scenarios: a longer list extends a shorter one") {
    const auto small = generate_scenarios(9, 5);
    const auto big = generate_scenarios(9, 12);
    for (std::size_t i = 0; i < small.size(); ++i) {
        CHECK(small[i].seed == big[i].seed);
        CHECK(small[i].robot_goals == big[i].robot_goals);
    }
}

TEST_CASE("generate_scenarios: invalid inputs rejected") {
    CHECK_THROWS_AS(generate_scenarios(1, 0), RejectedInputError);
    CHECK_THROWS_AS(generate_scenarios(1, 3, Workspace{2, -5, 2, 5}), RejectedInputError);
}

TEST_CASE("scenario json round trip") {
    const auto scenarios = generate_scenarios(21, 3);
    const std::string path = "test_scenarios_tmp.json";
    write_scenarios_json(path, scenarios);
    const auto loaded = read_scenarios_json(path);
    REQUIRE(loaded.size() == scenarios.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].seed == scenarios[i].seed);
        CHECK(loaded[i].robot_goals == scenarios[i].robot_goals);
        CHECK(loaded[i].human_goals == scenarios[i].human_goals);
        CHECK(loaded[i].fps == scenarios[i].fps);
    }
    std::remove(path.c_str());
}

TEST_CASE("human: goal seeker is quiet at the goal without noise") {
    HumanParams hp;
    hp.kind = HumanKind::GoalSeeking;
    hp.noise_sigma = 0.0;
    Rng rng(1);
    const Eigen::Vector4d at_goal(1.0, 2.0, 0.0, 0.0);
    const auto a = human_goal_seek_accel(hp, at_goal, {1.0, 2.0}, rng);
    CHECK(a.norm() == 0.0);
}

TEST_CASE("human: interactive repulsion decays with distance") {
    HumanParams hp;
    hp.kind = HumanKind::Interactive;
    hp.noise_sigma = 0.0;
    hp.kp = 0.0;
    hp.kd = 0.0;
    Rng rng(1);
    const Eigen::Vector4d h(0.0, 0.0, 0.0, 0.0);
    const auto far = human_step_control(hp, h, {11.0, 0.0}, {0.0, 0.0}, rng);
    CHECK(far.norm() < 1e-2 * hp.a_max);
    Rng rng2(1);
    const auto near = human_step_control(hp, h, {0.5, 0.0}, {0.0, 0.0}, rng2);
    CHECK(near.norm() > far.norm());
}

TEST_CASE("fairness: passive human trajectory is identical across controllers") {
    const auto scenarios = generate_scenarios(33, 2);
    for (const auto& sc : scenarios) {
        EpisodeLog logs[3];
        int i = 0;
        for (Algorithm alg : {Algorithm::SSA, Algorithm::BFM, Algorithm::SMA}) {
            auto cfg = ball_episode_config(alg);
            logs[i++] = run_episode(cfg, sc);
        }
        for (int j = 1; j < 3; ++j) {
            REQUIRE(logs[j].frames.size() == logs[0].frames.size());
            for (std::size_t k = 0; k < logs[0].frames.size(); ++k)
                CHECK(logs[j].frames[k].human_state == logs[0].frames[k].human_state);
        }
    }
}

TEST_CASE("episode: determinism") {
    const auto scenarios = generate_scenarios(55, 1);
    auto cfg = ball_episode_config(Algorithm::SSA);
    cfg.estimation.perfect_sensing = false;  // exercise the filter path too
    const auto a = run_episode(cfg, scenarios[0]);
    const auto b = run_episode(cfg, scenarios[0]);
    CHECK(same_frames(a, b));
    CHECK(a.goal_events.size() == b.goal_events.size());
    CHECK(a.collided == b.collided);
}

TEST_CASE("episode: distant human means no intervention and baseline efficiency") {
    // Static human; robot goals confined to the quadrant opposite the human,
    // so the safety constraint never activates for the gated algorithms.
    auto scenarios = generate_scenarios(66, 1);
    Scenario sc = scenarios[0];
    const Vec x0 = initial_robot_state(RobotModel::ball2d(), sc);
    const Eigen::Vector4d h0 = initial_human_state(RobotModel::ball2d(), sc);
    // goals on the ray from the human through the robot: retreating all the way
    const Eigen::Vector2d dir = (x0.head(2) - Eigen::Vector2d(h0.head<2>())).normalized();
    Eigen::Vector2d anchor = Eigen::Vector2d(h0.head<2>()) + 8.0 * dir;
    anchor.x() = std::clamp(anchor.x(), -4.0, 4.0);
    anchor.y() = std::clamp(anchor.y(), -4.0, 4.0);
    Rng jitter(4242);
    sc.robot_goals.clear();
    for (int g = 0; g < 32; ++g)
        sc.robot_goals.emplace_back(
            std::clamp(anchor.x() + jitter.uniform(-0.5, 0.5), -4.5, 4.5),
            std::clamp(anchor.y() + jitter.uniform(-0.5, 0.5), -4.5, 4.5));

    EpisodeLog logs[3];
    int i = 0;
    for (Algorithm alg : {Algorithm::SSA, Algorithm::SSS, Algorithm::PFM}) {
        auto cfg = ball_episode_config(alg);
        cfg.human = HumanParams::static_human();
        logs[i] = run_episode(cfg, sc);
        // the robot start may be anywhere, but it retreats to the far corner;
        // the human stays >= 1.5 m away for the gated laws to stay quiet
        for (const auto& f : logs[i].frames) CHECK(!f.intervened);
        ++i;
    }
    CHECK(efficiency_score(logs[0]) == efficiency_score(logs[1]));
    CHECK(efficiency_score(logs[0]) == efficiency_score(logs[2]));
    CHECK(efficiency_score(logs[0]) > 0.0);
    CHECK(same_frames(logs[0], logs[1]));
}

TEST_CASE("episode: SSS gate over full logs") {
    const auto scenarios = generate_scenarios(77, 3);
    for (const auto& sc : scenarios) {
        auto cfg = ball_episode_config(Algorithm::SSS);
        const auto log = run_episode(cfg, sc);
        for (const auto& f : log.frames) {
            if (f.u0.size() == 0) continue;
            if (f.phi < 0.0 && !log.collided) CHECK(f.u == f.u0);
        }
    }
}

TEST_CASE("episode: collision definition consistency") {
    const auto scenarios = generate_scenarios(88, 6);
    auto cfg = ball_episode_config(Algorithm::PFM);
    cfg.controller.c1 = 0.1;  // weak avoidance provokes collisions
    cfg.controller.safety_params = {0.5, 0.5};
    for (const auto& sc : scenarios) {
        const auto log = run_episode(cfg, sc);
        const double dmin = min_distance(log);
        if (log.collided)
            CHECK(dmin < cfg.collision_distance);
        else
            CHECK(dmin >= cfg.collision_distance);
    }
}

TEST_CASE("metric monotonicity: smaller d_min lets the robot get closer") {
    const auto scenarios = generate_scenarios(99, 40);
    auto mean_min_distance = [&](double d_min) {
        auto cfg = ball_episode_config(Algorithm::SSA);
        cfg.controller.safety_params.d_min = d_min;
        double sum = 0.0;
        for (const auto& sc : scenarios) sum += min_distance(run_episode(cfg, sc));
        return sum / scenarios.size();
    };
    const double at_small = mean_min_distance(0.5);
    const double at_mid = mean_min_distance(1.0);
    const double at_large = mean_min_distance(2.0);
    CHECK(at_small <= at_mid * 1.05);
    CHECK(at_mid <= at_large * 1.05);
}

TEST_CASE("efficiency_score: counting rules") {
    EpisodeLog log;
    CHECK(efficiency_score(log) == 0.0);

    log.goal_events = {{true, 0, 1.0}, {true, 1, 2.0}, {true, 2, 3.0}, {false, 0, 1.5},
                       {false, 1, 2.5}};
    log.interactive = false;
    CHECK(efficiency_score(log) == 3.0);
    log.interactive = true;
    CHECK(efficiency_score(log) == 5.0);
}

TEST_CASE("safety_score: threshold and sign behaviour") {
    EpisodeLog log;
    FrameRecord f;
    f.d = 3.0;
    f.d_dot = -2.0;
    log.frames.assign(10, f);
    CHECK(safety_score(log, 2.0) == 0.0);

    log.frames.clear();
    f.d = 2.0 / std::exp(1.0);
    f.d_dot = -1.0;
    log.frames.push_back(f);
    CHECK(safety_score(log, 2.0) == doctest::Approx(-1.0));

    log.frames[0].d_dot = 1.0;
    CHECK(safety_score(log, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("hybrid_score: maximum collision-free efficiency") {
    CHECK(*hybrid_score({{3, false}, {5, false}, {9, true}}) == 5.0);
    CHECK(!hybrid_score({{3, true}, {5, true}}).has_value());
    CHECK(*hybrid_score({{4.5, false}}) == 4.5);
}

TEST_CASE("frontier: dominance and collinearity") {
    const std::vector<std::pair<double, double>> pts{{1, 1}, {2, 3}, {3, 2}, {4, 1}};
    const auto f = upper_right_frontier(pts);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == 1);
    CHECK(f[1] == 2);
    CHECK(f[2] == 3);
}

TEST_CASE("frontier: single point and duplicates") {
    CHECK(upper_right_frontier({{2.0, 5.0}}).size() == 1);
    const auto f = upper_right_frontier({{1, 2}, {1, 2}, {3, 1}});
    REQUIRE(f.size() == 2);
    CHECK(f[0] == 0);
    CHECK(f[1] == 2);
}

TEST_CASE("frontier: matches brute-force dominance plus hull pruning") {
    Rng rng(123);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<double, double>> pts;
        const int n = rng.uniform_int(1, 12);
        for (int i = 0; i < n; ++i)
            pts.emplace_back(rng.uniform(0, 10), rng.uniform(0, 10));

        const auto frontier = upper_right_frontier(pts);

        // oracle: nondominated points not strictly below any chord of the
        // nondominated set
        std::vector<int> nondom;
        for (int i = 0; i < n; ++i) {
            bool dominated = false;
            for (int j = 0; j < n && !dominated; ++j) {
                if (i == j) continue;
                const bool geq = pts[j].first >= pts[i].first &&
                                 pts[j].second >= pts[i].second;
                const bool strict = pts[j].first > pts[i].first ||
                                    pts[j].second > pts[i].second;
                if (geq && strict) dominated = true;
                if (geq && !strict && j < i) dominated = true;
            }
            if (!dominated) nondom.push_back(i);
        }
        std::vector<int> expected;
        for (int i : nondom) {
            bool below = false;
            for (int a : nondom) {
                for (int b : nondom) {
                    if (pts[a].first >= pts[b].first) continue;
                    if (pts[i].first < pts[a].first || pts[i].first > pts[b].first) continue;
                    const double t =
                        (pts[i].first - pts[a].first) / (pts[b].first - pts[a].first);
                    const double chord = pts[a].second + t * (pts[b].second - pts[a].second);
                    if (pts[i].second < chord - 1e-12) below = true;
                }
            }
            if (!below) expected.push_back(i);
        }
        std::vector<int> got = frontier;
        std::sort(got.begin(), got.end());
        std::sort(expected.begin(), expected.end());
        CHECK(got == expected);
    }
}

TEST_CASE("tradeoff_sweep: single point reduces to plain aggregation") {
    const auto scenarios = generate_scenarios(44, 4);
    SweepSpec spec;
    spec.model = RobotModel::ball2d();
    spec.algorithm = Algorithm::SSA;
    spec.dmin_grid = {1.0};
    spec.k_grid = {1.0};
    spec.param_grid = {-0.5};
    spec.estimation.perfect_sensing = true;

    const auto result = tradeoff_sweep(spec, scenarios);
    REQUIRE(result.points.size() == 1);
    REQUIRE(result.frontier.size() == 1);

    EpisodeConfig cfg;
    cfg.model = spec.model;
    cfg.controller.algorithm = Algorithm::SSA;
    cfg.controller.safety_params = {1.0, 1.0};
    cfg.controller.eta = -0.5;
    cfg.estimation.perfect_sensing = true;
    double eff = 0.0, safety = 0.0;
    bool any_collision = false;
    for (const auto& sc : scenarios) {
        const auto log = run_episode(cfg, sc);
        eff += efficiency_score(log);
        safety += safety_score(log, spec.d_s);
        any_collision = any_collision || log.collided;
    }
    CHECK(result.points[0].mean_efficiency == doctest::Approx(eff / 4.0));
    CHECK(result.points[0].mean_safety == doctest::Approx(safety / 4.0));
    CHECK(result.points[0].any_collision == any_collision);
    if (any_collision)
        CHECK(!result.hybrid.has_value());
    else
        CHECK(*result.hybrid == doctest::Approx(eff / 4.0));
}

TEST_CASE("phase_portrait: gate property and parallel corrections") {
    ControllerConfig cfg;
    cfg.safety_params = {1.5, 1.0};
    PhaseSliceSpec slice;
    slice.resolution_x = 21;
    slice.resolution_y = 21;

    for (Algorithm alg : {Algorithm::SSA, Algorithm::SSS}) {
        cfg.algorithm = alg;
        cfg.eta = -0.1;
        cfg.lambda = -1.0;
        const auto grid = phase_portrait(cfg, slice);
        REQUIRE(grid.size() == 21 * 21);
        for (const auto& p : grid) {
            if (p.phi < 0.0) CHECK((p.u - p.u0).norm() == 0.0);
        }
    }

    // BFM corrects somewhere inside the safe region
    cfg.algorithm = Algorithm::BFM;
    const auto bfm = phase_portrait(cfg, slice);
    bool safe_correction = false;
    for (const auto& p : bfm)
        if (p.phi < 0.0 && (p.u - p.u0).norm() > 1e-9) safe_correction = true;
    CHECK(safe_correction);

    // corrections are parallel to lg for the projection family
    const RobotModel ball = RobotModel::ball2d();
    for (const auto& p : bfm) {
        const Vec delta = (Vec(2) << p.u.x() - p.u0.x(), p.u.y() - p.u0.y()).finished();
        if (delta.norm() < 1e-12) continue;
        Vec x(4);
        x << p.x, p.y, slice.velocity.x(), slice.velocity.y();
        const auto eval = lie_derivatives(ball, x, ObstacleState::static_at(Vec::Zero(2)),
                                          cfg.safety_params);
        const Vec lg_unit = eval.lg_phi.transpose() / eval.lg_phi.norm();
        const Vec residual = delta - delta.dot(lg_unit) * lg_unit;
        CHECK(residual.norm() <= 1e-10 * std::max(1.0, delta.norm()));
    }
}

TEST_CASE("phase_portrait: 1x1 grid emits the slice centre") {
    ControllerConfig cfg;
    cfg.algorithm = Algorithm::SSA;
    PhaseSliceSpec slice;
    slice.resolution_x = 1;
    slice.resolution_y = 1;
    slice.obstacle_position = {2.0, 0.0};
    const auto grid = phase_portrait(cfg, slice);
    REQUIRE(grid.size() == 1);
    CHECK(grid[0].x == doctest::Approx(0.5 * (slice.xmin + slice.xmax)));
}

TEST_CASE("episode: every model runs a full deterministic episode") {
    const auto scenarios = generate_scenarios(111, 1);
    for (const auto& model : {RobotModel::ball2d(), RobotModel::unicycle(),
                              RobotModel::scara(), RobotModel::arm4dof()}) {
        EpisodeConfig cfg;
        cfg.model = model;
        cfg.controller.algorithm = Algorithm::SSS;
        cfg.controller.safety_params = {1.0, 1.0};
        cfg.estimation.perfect_sensing = false;
        const auto log = run_episode(cfg, scenarios[0]);
        CHECK(log.valid);
        CHECK(static_cast<int>(log.frames.size()) == scenarios[0].frame_count());
        const auto again = run_episode(cfg, scenarios[0]);
        CHECK(same_frames(log, again));
    }
}

TEST_CASE("episode: interactive human reacts to the robot") {
    const auto scenarios = generate_scenarios(131, 3);
    for (const auto& sc : scenarios) {
        auto passive_cfg = ball_episode_config(Algorithm::SSA);
        passive_cfg.human.kind = HumanKind::GoalSeeking;
        auto inter_cfg = ball_episode_config(Algorithm::SSA);
        inter_cfg.human.kind = HumanKind::Interactive;

        const auto a = run_episode(passive_cfg, sc);
        const auto b = run_episode(inter_cfg, sc);
        CHECK(!a.interactive);
        CHECK(b.interactive);
        double max_dev = 0.0;
        for (std::size_t k = 0; k < a.frames.size() && k < b.frames.size(); ++k)
            max_dev = std::max(max_dev,
                               (a.frames[k].human_state - b.frames[k].human_state).norm());
        CHECK(max_dev > 0.0);  // repulsion altered the trajectory somewhere
    }
}

TEST_CASE("reproducibility: metrics are a pure function of configs and seed") {
    const auto scenarios = generate_scenarios(202, 3);
    auto cfg = ball_episode_config(Algorithm::BFM);
    cfg.estimation.perfect_sensing = false;
    for (const auto& sc : scenarios) {
        const auto a = evaluate_episode(run_episode(cfg, sc));
        const auto b = evaluate_episode(run_episode(cfg, sc));
        CHECK(a.efficiency == b.efficiency);
        CHECK(a.safety == b.safety);
        CHECK(a.intervention_rate == b.intervention_rate);
        CHECK(a.collided == b.collided);
    }
}
