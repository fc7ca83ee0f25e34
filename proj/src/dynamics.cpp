#include "safectrl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace safectrl {

namespace {

void check_state_dim(const RobotModel& m, const Vec& x) {
    if (x.size() != m.nx())
        throw RejectedInputError("state dimension mismatch for model " + std::string(m.name()));
}

void check_control_dim(const RobotModel& m, const Vec& u) {
    if (u.size() != m.nu())
        throw RejectedInputError("control dimension mismatch for model " + std::string(m.name()));
}

}  // namespace

int RobotModel::nx() const {
    return kind == ModelKind::Arm4Dof ? 8 : 4;
}

int RobotModel::nu() const {
    return kind == ModelKind::Arm4Dof ? 4 : 2;
}

int RobotModel::workspace_dim() const {
    return kind == ModelKind::Arm4Dof ? 3 : 2;
}

int RobotModel::num_links() const {
    switch (kind) {
        case ModelKind::Ball2D:
        case ModelKind::Unicycle:
            return 1;  // degenerate point segment
        case ModelKind::Scara:
            return 2;
        case ModelKind::Arm4Dof:
            return 4;
    }
    return 0;
}

const char* RobotModel::name() const {
    switch (kind) {
        case ModelKind::Ball2D: return "ball";
        case ModelKind::Unicycle: return "unicycle";
        case ModelKind::Scara: return "scara";
        case ModelKind::Arm4Dof: return "arm4dof";
    }
    return "?";
}

RobotModel RobotModel::ball2d() { return {ModelKind::Ball2D, {}}; }
RobotModel RobotModel::unicycle() { return {ModelKind::Unicycle, {}}; }
RobotModel RobotModel::scara(double l1, double l2) { return {ModelKind::Scara, {l1, l2}}; }
RobotModel RobotModel::arm4dof() { return {ModelKind::Arm4Dof, {1.0, 1.0, 1.0, 1.0}}; }

RobotModel RobotModel::from_name(const std::string& name) {
    if (name == "ball" || name == "ball2d") return ball2d();
    if (name == "unicycle") return unicycle();
    if (name == "scara") return scara();
    if (name == "arm4dof" || name == "arm") return arm4dof();
    throw RejectedInputError("unknown robot model: " + name);
}

double wrap_angle(double theta) {
    double t = std::fmod(theta + M_PI, 2.0 * M_PI);
    if (t <= 0.0) t += 2.0 * M_PI;
    return t - M_PI;
}

Vec f_drift(const RobotModel& m, const Vec& x) {
    check_state_dim(m, x);
    Vec f = Vec::Zero(m.nx());
    switch (m.kind) {
        case ModelKind::Ball2D:
            f(0) = x(2);
            f(1) = x(3);
            break;
        case ModelKind::Unicycle:
            f(0) = x(2) * std::cos(x(3));
            f(1) = x(2) * std::sin(x(3));
            break;
        case ModelKind::Scara:
            f(0) = x(2);
            f(1) = x(3);
            break;
        case ModelKind::Arm4Dof:
            f.head(4) = x.tail(4);
            break;
    }
    return f;
}

Mat g_input(const RobotModel& m) {
    // All four models drive the last nu state rows directly.
    Mat g = Mat::Zero(m.nx(), m.nu());
    g.bottomRows(m.nu()).setIdentity();
    return g;
}

Vec eval_dynamics(const RobotModel& m, const Vec& x, const Vec& u) {
    check_state_dim(m, x);
    check_control_dim(m, u);
    Vec xdot = f_drift(m, x);
    xdot.tail(m.nu()) += u;
    return xdot;
}

Vec step(const RobotModel& m, const Vec& x0, const Vec& u, const IntegratorConfig& cfg) {
    check_state_dim(m, x0);
    check_control_dim(m, u);
    if (cfg.control_dt <= 0.0 || cfg.substeps < 1)
        throw RejectedInputError("integrator config requires control_dt > 0 and substeps >= 1");

    const double dt = cfg.control_dt / cfg.substeps;
    Vec x = x0;
    for (int s = 0; s < cfg.substeps; ++s) {
        switch (m.kind) {
            case ModelKind::Ball2D:
            case ModelKind::Scara:
            case ModelKind::Arm4Dof: {
                // Constant-acceleration substep (exact under zero-order hold).
                const int n = m.nu();
                x.head(n) += dt * x.tail(n) + 0.5 * dt * dt * u;
                x.tail(n) += dt * u;
                break;
            }
            case ModelKind::Unicycle: {
                const double v = x(2);
                const double th = x(3);
                const double v_mid = v + 0.5 * dt * u(0);
                const double th_mid = th + 0.5 * dt * u(1);
                x(0) += dt * v_mid * std::cos(th_mid);
                x(1) += dt * v_mid * std::sin(th_mid);
                x(2) = v + dt * u(0);
                x(3) = wrap_angle(th + dt * u(1));
                break;
            }
        }
    }
    if (!x.allFinite()) throw NumericalBlowupError("integration produced non-finite state", x);
    return x;
}

namespace {

// Chain of joint positions, base first. Ball/unicycle yield the single point.
std::vector<Vec> joint_chain(const RobotModel& m, const Vec& x) {
    std::vector<Vec> pts;
    switch (m.kind) {
        case ModelKind::Ball2D:
        case ModelKind::Unicycle: {
            Vec p(2);
            p << x(0), x(1);
            pts.push_back(p);
            break;
        }
        case ModelKind::Scara: {
            pts.push_back(Vec::Zero(2));
            double angle = 0.0, px = 0.0, py = 0.0;
            for (int j = 0; j < 2; ++j) {
                angle += x(j);
                px += m.link_lengths[j] * std::cos(angle);
                py += m.link_lengths[j] * std::sin(angle);
                Vec p(2);
                p << px, py;
                pts.push_back(p);
            }
            break;
        }
        case ModelKind::Arm4Dof: {
            // Joint 0 yaws about the world vertical; joints 1-3 pitch in the
            // vertical plane selected by the yaw.
            const double c1 = std::cos(x(0)), s1 = std::sin(x(0));
            pts.push_back(Vec::Zero(3));
            double rho = m.link_lengths[0];  // radial coordinate in the arm plane
            double z = 0.0;
            double pitch = 0.0;
            Vec p(3);
            p << rho * c1, rho * s1, z;
            pts.push_back(p);
            for (int j = 1; j < 4; ++j) {
                pitch += x(j);
                rho += m.link_lengths[j] * std::cos(pitch);
                z += m.link_lengths[j] * std::sin(pitch);
                Vec q(3);
                q << rho * c1, rho * s1, z;
                pts.push_back(q);
            }
            break;
        }
    }
    return pts;
}

// d(chain point k)/dx, rows = workspace_dim. Velocity columns are zero.
Mat joint_jacobian(const RobotModel& m, const Vec& x, int k) {
    Mat J = Mat::Zero(m.workspace_dim(), m.nx());
    switch (m.kind) {
        case ModelKind::Ball2D:
        case ModelKind::Unicycle:
            J(0, 0) = 1.0;
            J(1, 1) = 1.0;
            break;
        case ModelKind::Scara: {
            double angle = 0.0;
            for (int j = 0; j < k; ++j) {
                angle += x(j);
                const double dx = -m.link_lengths[j] * std::sin(angle);
                const double dy = m.link_lengths[j] * std::cos(angle);
                for (int col = 0; col <= j; ++col) {
                    J(0, col) += dx;
                    J(1, col) += dy;
                }
            }
            break;
        }
        case ModelKind::Arm4Dof: {
            if (k == 0) break;
            const double c1 = std::cos(x(0)), s1 = std::sin(x(0));
            double rho = m.link_lengths[0];
            double pitch = 0.0;
            for (int j = 1; j < k; ++j) {
                pitch += x(j);
                rho += m.link_lengths[j] * std::cos(pitch);
                const double dr = -m.link_lengths[j] * std::sin(pitch);
                const double dz = m.link_lengths[j] * std::cos(pitch);
                for (int col = 1; col <= j; ++col) {
                    J(0, col) += dr * c1;
                    J(1, col) += dr * s1;
                    J(2, col) += dz;
                }
            }
            J(0, 0) = -rho * s1;
            J(1, 0) = rho * c1;
            break;
        }
    }
    return J;
}

}  // namespace

LinkGeometry link_geometry(const RobotModel& m, const Vec& x) {
    check_state_dim(m, x);
    const auto pts = joint_chain(m, x);
    LinkGeometry geom;
    if (pts.size() == 1) {
        geom.segments.push_back({pts[0], pts[0]});
    } else {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            geom.segments.push_back({pts[i], pts[i + 1]});
    }
    return geom;
}

std::pair<Vec, ArcParam> critical_point(const RobotModel& m, const Vec& x,
                                        const Vec& obstacle_center) {
    check_state_dim(m, x);
    if (obstacle_center.size() != m.workspace_dim())
        throw RejectedInputError("obstacle point dimension mismatch");

    const auto geom = link_geometry(m, x);
    double best_d2 = std::numeric_limits<double>::infinity();
    Vec best_c;
    ArcParam best;
    for (int i = 0; i < static_cast<int>(geom.segments.size()); ++i) {
        const auto& seg = geom.segments[i];
        const Vec ab = seg.b - seg.a;
        const double len2 = ab.squaredNorm();
        double t = 0.0;
        if (len2 > 0.0) t = std::clamp((obstacle_center - seg.a).dot(ab) / len2, 0.0, 1.0);
        const Vec c = seg.a + t * ab;
        const double d2 = (c - obstacle_center).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best_c = c;
            best = {i, t};
        }
    }
    return {best_c, best};
}

Mat critical_jacobian(const RobotModel& m, const Vec& x, const ArcParam& arc) {
    check_state_dim(m, x);
    if (arc.link < 0 || arc.link >= m.num_links())
        throw RejectedInputError("arc link index out of range");
    if (m.kind == ModelKind::Ball2D || m.kind == ModelKind::Unicycle)
        return joint_jacobian(m, x, 0);
    const Mat Ja = joint_jacobian(m, x, arc.link);
    const Mat Jb = joint_jacobian(m, x, arc.link + 1);
    return (1.0 - arc.fraction) * Ja + arc.fraction * Jb;
}

Vec end_effector(const RobotModel& m, const Vec& x) {
    const auto pts = joint_chain(m, x);
    return pts.back();
}

Mat end_effector_jacobian(const RobotModel& m, const Vec& x) {
    check_state_dim(m, x);
    if (m.kind == ModelKind::Ball2D || m.kind == ModelKind::Unicycle)
        return joint_jacobian(m, x, 0);
    return joint_jacobian(m, x, m.num_links());
}

}  // namespace safectrl
