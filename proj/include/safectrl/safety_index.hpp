#pragma once

#include "safectrl/dynamics.hpp"

namespace safectrl {

// Parameters of the safety index phi = d_min^2 - d^2 - k * d_dot.
struct SafetyIndexParams {
    double d_min = 1.0;  // minimum required safe distance, meters
    double k = 1.0;      // approach-rate weight, seconds

    void validate() const {
        if (!(d_min > 0.0)) throw RejectedInputError("d_min must be > 0");
        if (!(k >= 0.0)) throw RejectedInputError("k must be >= 0");
    }
};

// Obstacle treated as a point with a velocity, in the model's workspace frame.
struct ObstacleState {
    Vec position;
    Vec velocity;

    static ObstacleState static_at(const Vec& p) { return {p, Vec::Zero(p.size())}; }
};

// Closest points on robot and obstacle with their relative distance/rate and
// the critical-point Jacobian. c_r_dot = J * f(x): positions rates are pure
// state functions in all four models, so phi is a state function.
struct CriticalPair {
    Vec c_r, c_o;
    double d = 0.0;
    double d_dot = 0.0;
    Mat jacobian;  // workspace_dim x nx
    ArcParam arc;
};

struct SafetyEvaluation {
    double phi = 0.0;
    Vec grad_phi;    // length nx
    double lf_phi = 0.0;
    RowVec lg_phi;   // length nu
};

// Throws CoincidentPointsError when d = 0.
CriticalPair critical_pair(const RobotModel& model, const Vec& x, const ObstacleState& obstacle);

double phi(const SafetyIndexParams& params, const CriticalPair& pair);

// phi evaluated directly from a state (obstacle frozen).
double phi_at(const RobotModel& model, const Vec& x, const ObstacleState& obstacle,
              const SafetyIndexParams& params);

// Central finite differences of x -> phi with relative step 1e-6.
// Throws IllConditionedGradientError when d is comparable to the step.
Vec grad_phi(const RobotModel& model, const Vec& x, const ObstacleState& obstacle,
             const SafetyIndexParams& params);

// Closed-form gradient for the ball model; cross-checked against grad_phi.
Vec ball2d_grad_phi_analytic(const Vec& x, const ObstacleState& obstacle,
                             const SafetyIndexParams& params);

SafetyEvaluation lie_derivatives(const RobotModel& model, const Vec& x,
                                 const ObstacleState& obstacle, const SafetyIndexParams& params);

}  // namespace safectrl
