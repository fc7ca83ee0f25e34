#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "safectrl/errors.hpp"

namespace safectrl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

enum class ModelKind { Ball2D, Unicycle, Scara, Arm4Dof };

// Control-affine robot model: xdot = f(x) + g u, with a kinematic map from
// the state to the line-segment skeleton the robot occupies.
//
// States and inputs per model:
//   Ball2D    x = [px py vx vy],        u = [ax ay]
//   Unicycle  x = [px py v theta],      u = [vdot thetadot]
//   Scara     x = [th1 th2 w1 w2],      u = [a1 a2]        (planar 2-link arm)
//   Arm4Dof   x = [th(4); w(4)],        u = [a(4)]         (yaw + 3 pitch joints)
struct RobotModel {
    ModelKind kind = ModelKind::Ball2D;
    std::vector<double> link_lengths;  // arms only, meters

    int nx() const;
    int nu() const;
    int workspace_dim() const;  // 2 for planar models, 3 for the spatial arm
    int num_links() const;      // segments in the skeleton (1 degenerate for balls)
    const char* name() const;

    static RobotModel ball2d();
    static RobotModel unicycle();
    static RobotModel scara(double l1 = 1.0, double l2 = 1.0);
    static RobotModel arm4dof();
    static RobotModel from_name(const std::string& name);
};

struct Segment {
    Vec a, b;
};

struct LinkGeometry {
    std::vector<Segment> segments;
};

// Location of the critical point on the skeleton: link index plus the
// fraction along that link, both held fixed when differentiating.
struct ArcParam {
    int link = 0;
    double fraction = 0.0;
};

struct IntegratorConfig {
    double control_dt = 0.05;  // 20 fps
    int substeps = 10;
};

// Wraps an angle into (-pi, pi].
double wrap_angle(double theta);

Vec f_drift(const RobotModel& model, const Vec& x);
Mat g_input(const RobotModel& model);

// xdot = f(x) + g u. Throws RejectedInputError on dimension mismatch.
Vec eval_dynamics(const RobotModel& model, const Vec& x, const Vec& u);

// Advances x over one control period (u held constant, `substeps` fixed-size
// physics steps). Throws NumericalBlowupError if the result is non-finite.
Vec step(const RobotModel& model, const Vec& x, const Vec& u, const IntegratorConfig& cfg);

// Forward kinematics of the occupied skeleton.
LinkGeometry link_geometry(const RobotModel& model, const Vec& x);

// Closest point on the skeleton to the obstacle center, with its arc location.
std::pair<Vec, ArcParam> critical_point(const RobotModel& model, const Vec& x,
                                        const Vec& obstacle_center);

// d(critical point)/dx with the arc location frozen. Rows = workspace_dim.
Mat critical_jacobian(const RobotModel& model, const Vec& x, const ArcParam& arc);

// End effector (tip of the last link; the point itself for ball/unicycle).
Vec end_effector(const RobotModel& model, const Vec& x);
Mat end_effector_jacobian(const RobotModel& model, const Vec& x);

}  // namespace safectrl
