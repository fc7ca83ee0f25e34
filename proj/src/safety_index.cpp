#include "safectrl/safety_index.hpp"

#include <cmath>

namespace safectrl {

CriticalPair critical_pair(const RobotModel& model, const Vec& x, const ObstacleState& obstacle) {
    if (obstacle.position.size() != model.workspace_dim() ||
        obstacle.velocity.size() != model.workspace_dim())
        throw RejectedInputError("obstacle state dimension mismatch");

    CriticalPair pair;
    auto [c_r, arc] = critical_point(model, x, obstacle.position);
    pair.c_r = c_r;
    pair.c_o = obstacle.position;
    pair.arc = arc;
    pair.jacobian = critical_jacobian(model, x, arc);

    const Vec rel = pair.c_r - pair.c_o;
    pair.d = rel.norm();
    if (pair.d <= 0.0)
        throw CoincidentPointsError("robot and obstacle critical points coincide");

    const Vec c_r_dot = pair.jacobian * f_drift(model, x);
    pair.d_dot = rel.dot(c_r_dot - obstacle.velocity) / pair.d;
    return pair;
}

double phi(const SafetyIndexParams& params, const CriticalPair& pair) {
    return params.d_min * params.d_min - pair.d * pair.d - params.k * pair.d_dot;
}

double phi_at(const RobotModel& model, const Vec& x, const ObstacleState& obstacle,
              const SafetyIndexParams& params) {
    return phi(params, critical_pair(model, x, obstacle));
}

Vec grad_phi(const RobotModel& model, const Vec& x, const ObstacleState& obstacle,
             const SafetyIndexParams& params) {
    params.validate();
    const CriticalPair base = critical_pair(model, x, obstacle);
    // Only configuration components move the critical point, so they set the
    // step size that competes with d. Velocity components enter phi linearly
    // through d_dot and difference exactly at any step.
    double h_max = 1e-6;
    for (int i = 0; i < x.size() - model.nu(); ++i)
        h_max = std::max(h_max, 1e-6 * std::abs(x(i)));
    if (base.d <= h_max)
        throw IllConditionedGradientError("distance comparable to finite-difference step");

    Vec grad(x.size());
    Vec xp = x, xm = x;
    for (int i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(i)));
        xp(i) = x(i) + h;
        xm(i) = x(i) - h;
        grad(i) = (phi_at(model, xp, obstacle, params) - phi_at(model, xm, obstacle, params)) /
                  (2.0 * h);
        xp(i) = x(i);
        xm(i) = x(i);
    }
    return grad;
}

Vec ball2d_grad_phi_analytic(const Vec& x, const ObstacleState& obstacle,
                             const SafetyIndexParams& params) {
    const Eigen::Vector2d p = x.head<2>();
    const Eigen::Vector2d v = x.tail<2>();
    const Eigen::Vector2d rel = p - Eigen::Vector2d(obstacle.position.head<2>());
    const Eigen::Vector2d v_rel = v - Eigen::Vector2d(obstacle.velocity.head<2>());
    const double d = rel.norm();
    if (d <= 0.0) throw CoincidentPointsError("analytic gradient undefined at d = 0");
    const double d_dot = rel.dot(v_rel) / d;

    Vec grad(4);
    grad.head<2>() = -2.0 * rel - params.k * (v_rel - d_dot * rel / d) / d;
    grad.tail<2>() = -params.k * rel / d;
    return grad;
}

SafetyEvaluation lie_derivatives(const RobotModel& model, const Vec& x,
                                 const ObstacleState& obstacle, const SafetyIndexParams& params) {
    SafetyEvaluation eval;
    eval.phi = phi_at(model, x, obstacle, params);
    eval.grad_phi = grad_phi(model, x, obstacle, params);
    eval.lf_phi = eval.grad_phi.dot(f_drift(model, x));
    eval.lg_phi = eval.grad_phi.transpose() * g_input(model);
    return eval;
}

}  // namespace safectrl
