#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "safectrl/rng.hpp"
#include "safectrl/safety_index.hpp"

using namespace safectrl;

namespace {

Vec make_vec(std::initializer_list<double> vals) {
    Vec v(static_cast<int>(vals.size()));
    int i = 0;
    for (double x : vals) v(i++) = x;
    return v;
}

ObstacleState static_obstacle(std::initializer_list<double> p) {
    return ObstacleState::static_at(make_vec(p));
}

Vec random_state(const RobotModel& m, Rng& rng) {
    Vec x(m.nx());
    if (m.kind == ModelKind::Ball2D || m.kind == ModelKind::Unicycle) {
        x << rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-2, 2),
            m.kind == ModelKind::Unicycle ? rng.uniform(-M_PI, M_PI) : rng.uniform(-2, 2);
    } else {
        const int n = m.nu();
        for (int i = 0; i < n; ++i) x(i) = rng.uniform(-M_PI, M_PI);
        for (int i = n; i < 2 * n; ++i) x(i) = rng.uniform(-1.5, 1.5);
    }
    return x;
}

const std::vector<RobotModel> kAllModels = {RobotModel::ball2d(), RobotModel::unicycle(),
                                            RobotModel::scara(), RobotModel::arm4dof()};

}  // namespace

TEST_CASE("critical_pair: collinear and tangential ball motion") {
    const RobotModel ball = RobotModel::ball2d();

    auto head_on = critical_pair(ball, make_vec({0, 0, 1, 0}), static_obstacle({2, 0}));
    CHECK(head_on.d == doctest::Approx(2.0));
    CHECK(head_on.d_dot == doctest::Approx(-1.0));

    auto tangent = critical_pair(ball, make_vec({0, 0, 0, 1}), static_obstacle({2, 0}));
    CHECK(tangent.d == doctest::Approx(2.0));
    CHECK(tangent.d_dot == doctest::Approx(0.0));
}

TEST_CASE("critical_pair: scara rate cross-checked by a rollout") {
    const RobotModel sc = RobotModel::scara();
    const Vec x = make_vec({0, 0, 0, 1});
    const ObstacleState obs = static_obstacle({1.5, 1});
    auto pair = critical_pair(sc, x, obs);
    CHECK(pair.c_r.isApprox(make_vec({1.5, 0})));

    // finite-difference d(t) along a zero-control rollout
    const double dt = 1e-5;
    const Vec x1 = step(sc, x, Vec::Zero(2), {dt, 1});
    auto pair1 = critical_pair(sc, x1, obs);
    const double d_dot_fd = (pair1.d - pair.d) / dt;
    CHECK(std::abs(pair.d_dot - d_dot_fd) <= 1e-3);
}

TEST_CASE("critical_pair: coincident points are an error") {
    const RobotModel ball = RobotModel::ball2d();
    CHECK_THROWS_AS(critical_pair(ball, make_vec({1, 1, 0, 0}), static_obstacle({1, 1})),
                    CoincidentPointsError);
}

TEST_CASE("phi: direct substitutions") {
    CriticalPair pair;
    pair.d = 2.0;
    pair.d_dot = -1.0;
    CHECK(phi({1.0, 1.0}, pair) == doctest::Approx(-2.0));

    pair.d = 1.0;
    pair.d_dot = -1.0;
    CHECK(phi({1.5, 1.0}, pair) == doctest::Approx(2.25));

    pair.d = 1.5;
    pair.d_dot = 0.0;
    CHECK(phi({1.5, 1.0}, pair) == doctest::Approx(0.0));
}

TEST_CASE("grad_phi: hand-derived ball gradient") {
    const RobotModel ball = RobotModel::ball2d();
    const Vec x = make_vec({1, 0, -1, 0});
    const ObstacleState obs = static_obstacle({0, 0});
    const SafetyIndexParams prm{1.5, 1.0};

    const Vec g = grad_phi(ball, x, obs, prm);
    CHECK(g(0) == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(g(1) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(g(2) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(g(3) == doctest::Approx(0.0).epsilon(1e-6));

    const Vec ga = ball2d_grad_phi_analytic(x, obs, prm);
    CHECK((g - ga).norm() / ga.norm() <= 1e-5);
}

TEST_CASE("grad_phi: k = 0 removes the velocity block") {
    const RobotModel ball = RobotModel::ball2d();
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const Vec x = random_state(ball, rng);
        const ObstacleState obs = static_obstacle({4.5, 4.5});
        const Vec g = grad_phi(ball, x, obs, {1.0, 0.0});
        CHECK(g.tail(2).norm() <= 1e-9);
    }
}

TEST_CASE("grad_phi: odd symmetry for the ball") {
    const RobotModel ball = RobotModel::ball2d();
    const SafetyIndexParams prm{1.0, 0.7};
    const Vec x = make_vec({1.2, -0.4, 0.8, 0.3});
    const Vec x_flipped = make_vec({-1.2, 0.4, -0.8, -0.3});
    const Vec g = grad_phi(ball, x, static_obstacle({0, 0}), prm);
    const Vec gf = grad_phi(ball, x_flipped, static_obstacle({0, 0}), prm);
    CHECK((g + gf).norm() <= 1e-6 * std::max(1.0, g.norm()));
}

TEST_CASE("grad_phi: ill conditioned near contact") {
    const RobotModel ball = RobotModel::ball2d();
    CHECK_THROWS_AS(grad_phi(ball, make_vec({1e-8, 0, 0, 0}), static_obstacle({0, 0}),
                             {1.0, 1.0}),
                    IllConditionedGradientError);
}

TEST_CASE("grad_phi: analytic agreement over random ball states") {
    const RobotModel ball = RobotModel::ball2d();
    Rng rng(7);
    int done = 0;
    while (done < 1000) {
        const Vec x = random_state(ball, rng);
        const Vec o = make_vec({rng.uniform(-4, 4), rng.uniform(-4, 4)});
        ObstacleState obs{o, make_vec({rng.uniform(-1, 1), rng.uniform(-1, 1)})};
        if ((x.head(2) - o).norm() <= 0.1) continue;
        const SafetyIndexParams prm{rng.uniform(0.5, 3.0), rng.uniform(0.0, 2.0)};
        const Vec g = grad_phi(ball, x, obs, prm);
        const Vec ga = ball2d_grad_phi_analytic(x, obs, prm);
        CHECK((g - ga).norm() / std::max(1e-9, ga.norm()) <= 1e-5);
        ++done;
    }
}

TEST_CASE("lie_derivatives: worked ball state") {
    const RobotModel ball = RobotModel::ball2d();
    const auto eval = lie_derivatives(ball, make_vec({1, 0, -1, 0}), static_obstacle({0, 0}),
                                      {1.5, 1.0});
    CHECK(eval.phi == doctest::Approx(2.25));
    CHECK(eval.lf_phi == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(eval.lg_phi(0) == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(eval.lg_phi(1) == doctest::Approx(0.0).epsilon(1e-6));
    // decomposition consistency with the gradient
    CHECK(eval.lf_phi ==
          doctest::Approx(eval.grad_phi.dot(f_drift(ball, make_vec({1, 0, -1, 0})))));
}

TEST_CASE("lie_derivatives: k = 0 gives zero control authority") {
    const RobotModel ball = RobotModel::ball2d();
    Rng rng(13);
    for (int i = 0; i < 20; ++i) {
        const Vec x = random_state(ball, rng);
        const auto eval = lie_derivatives(ball, x, static_obstacle({4.8, 4.8}), {1.0, 0.0});
        CHECK(eval.lg_phi.norm() <= 1e-9);
    }
}

TEST_CASE("lie_derivatives: static robot and obstacle give zero drift term") {
    const RobotModel ball = RobotModel::ball2d();
    const auto eval = lie_derivatives(ball, make_vec({1, 1, 0, 0}), static_obstacle({3, 3}),
                                      {1.0, 1.0});
    CHECK(std::abs(eval.lf_phi) <= 1e-9);
}

TEST_CASE("phi-dot consistency along rollouts, all models") {
    Rng rng(19);
    int done = 0;
    while (done < 200) {
        const RobotModel& m = kAllModels[done % kAllModels.size()];
        const Vec x = random_state(m, rng);
        Vec u(m.nu());
        for (int i = 0; i < u.size(); ++i) u(i) = rng.uniform(-3, 3);
        Vec o(m.workspace_dim());
        for (int i = 0; i < o.size(); ++i) o(i) = rng.uniform(-3, 3);
        const ObstacleState obs = ObstacleState::static_at(o);

        CriticalPair pair;
        try {
            pair = critical_pair(m, x, obs);
        } catch (const CoincidentPointsError&) {
            continue;
        }
        if (pair.d < 0.3) continue;

        const SafetyIndexParams prm{1.0, 1.0};
        const auto eval = lie_derivatives(m, x, obs, prm);
        const double predicted = eval.lf_phi + eval.lg_phi.dot(u);

        const double delta = 1e-4;
        const Vec x1 = x + delta * eval_dynamics(m, x, u);
        const double observed = (phi_at(m, x1, obs, prm) - phi_at(m, x, obs, prm)) / delta;
        CHECK(std::abs(predicted - observed) <= 1e-2 * std::max(1.0, std::abs(predicted)));
        ++done;
    }
}

TEST_CASE("sign sanity: with k = 0 a farther obstacle never raises phi") {
    const RobotModel ball = RobotModel::ball2d();
    Rng rng(29);
    for (int i = 0; i < 100; ++i) {
        const Vec x = random_state(ball, rng);
        const double d1 = rng.uniform(0.3, 2.0);
        const double d2 = d1 + rng.uniform(0.1, 3.0);
        const double angle = rng.uniform(-M_PI, M_PI);
        const Vec dir = make_vec({std::cos(angle), std::sin(angle)});
        const SafetyIndexParams prm{1.5, 0.0};
        const double phi_near =
            phi_at(ball, x, ObstacleState::static_at(Vec(x.head(2) + d1 * dir)), prm);
        const double phi_far =
            phi_at(ball, x, ObstacleState::static_at(Vec(x.head(2) + d2 * dir)), prm);
        CHECK(phi_far <= phi_near + 1e-12);
    }
}

TEST_CASE("d_dot antisymmetry under velocity swap") {
    const RobotModel ball = RobotModel::ball2d();
    Rng rng(41);
    for (int i = 0; i < 100; ++i) {
        const Vec p = make_vec({rng.uniform(-3, 3), rng.uniform(-3, 3)});
        const Vec po = make_vec({rng.uniform(-3, 3), rng.uniform(-3, 3)});
        if ((p - po).norm() < 0.2) continue;
        const Vec vr = make_vec({rng.uniform(-2, 2), rng.uniform(-2, 2)});
        const Vec vo = make_vec({rng.uniform(-2, 2), rng.uniform(-2, 2)});

        Vec x1(4), x2(4);
        x1 << p(0), p(1), vr(0), vr(1);
        x2 << p(0), p(1), vo(0), vo(1);
        const auto a = critical_pair(ball, x1, {po, vo});
        const auto b = critical_pair(ball, x2, {po, vr});
        CHECK(a.d_dot == doctest::Approx(-b.d_dot).epsilon(1e-9));
    }
}
