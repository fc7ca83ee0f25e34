#include "safectrl/controllers.hpp"

#include <cmath>

namespace safectrl {

const char* algorithm_name(Algorithm alg) {
    switch (alg) {
        case Algorithm::PFM: return "pfm";
        case Algorithm::SMA: return "sma";
        case Algorithm::SSA: return "ssa";
        case Algorithm::BFM: return "bfm";
        case Algorithm::SSS: return "sss";
    }
    return "?";
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "pfm") return Algorithm::PFM;
    if (name == "sma") return Algorithm::SMA;
    if (name == "ssa") return Algorithm::SSA;
    if (name == "bfm") return Algorithm::BFM;
    if (name == "sss") return Algorithm::SSS;
    throw RejectedInputError("unknown algorithm: " + name);
}

void ControllerConfig::validate() const {
    safety_params.validate();
    if (!(c1 > 0.0)) throw RejectedInputError("c1 must be > 0");
    if (!(c2 > 0.0)) throw RejectedInputError("c2 must be > 0");
    if (!(eta <= 0.0)) throw RejectedInputError("eta must be <= 0");
    if (!(lambda < 0.0)) throw RejectedInputError("lambda must be < 0");
}

double ControllerConfig::algorithm_param() const {
    switch (algorithm) {
        case Algorithm::PFM: return c1;
        case Algorithm::SMA: return c2;
        case Algorithm::SSA: return eta;
        case Algorithm::BFM:
        case Algorithm::SSS: return lambda;
    }
    return 0.0;
}

ControllerConfig ControllerConfig::with_param(double value) const {
    ControllerConfig out = *this;
    switch (algorithm) {
        case Algorithm::PFM: out.c1 = value; break;
        case Algorithm::SMA: out.c2 = value; break;
        case Algorithm::SSA: out.eta = value; break;
        case Algorithm::BFM:
        case Algorithm::SSS: out.lambda = value; break;
    }
    return out;
}

Decomposition decompose(const Vec& u0, const RowVec& lg_phi) {
    Decomposition dec;
    const double lg2 = lg_phi.squaredNorm();
    if (lg2 > 0.0) {
        dec.mu = lg_phi.dot(u0) / lg2;
        dec.mu_defined = true;
        dec.u0_s = dec.mu * lg_phi.transpose();
        dec.u0_e = u0 - dec.u0_s;
    } else {
        dec.mu = 0.0;
        dec.mu_defined = false;
        dec.u0_s = Vec::Zero(u0.size());
        dec.u0_e = u0;
    }
    return dec;
}

double gamma_coefficient(double xi, double lf_phi, const RowVec& lg_phi) {
    const double lg2 = lg_phi.squaredNorm();
    if (!(lg2 > 0.0))
        throw RejectedInputError("gamma undefined for ||lg_phi|| = 0");
    return (xi - lf_phi) / lg2;
}

namespace {

SafeControlOutput make_output(const Vec& u, bool intervened, Decomposition dec,
                              const SafetyEvaluation& eval) {
    SafeControlOutput out;
    out.u = u;
    out.intervened = intervened;
    out.decomposition = std::move(dec);
    out.diagnostics.phi = eval.phi;
    out.diagnostics.lf_phi = eval.lf_phi;
    out.diagnostics.lg_phi_norm = eval.lg_phi.norm();
    out.diagnostics.predicted_phi_dot = eval.lf_phi + eval.lg_phi.dot(u);
    out.diagnostics.degenerate = !(eval.lg_phi.squaredNorm() > 0.0);
    return out;
}

}  // namespace

SafeControlOutput unified_control(const ControllerConfig& cfg, const Vec& u0,
                                  const SafetyEvaluation& eval) {
    Decomposition dec = decompose(u0, eval.lg_phi);
    dec.ind_b = eval.phi >= 0.0;
    const double lg2 = eval.lg_phi.squaredNorm();

    if (!(lg2 > 0.0)) {
        // No control direction affects phi-dot; pass the reference through.
        dec.alpha = 0.0;
        return make_output(u0, false, std::move(dec), eval);
    }

    bool intervene = false;
    switch (cfg.algorithm) {
        case Algorithm::PFM:
        case Algorithm::SMA: {
            const double c = cfg.algorithm == Algorithm::PFM ? cfg.c1 : cfg.c2;
            dec.alpha = dec.mu - (dec.ind_b ? c : 0.0);
            intervene = dec.ind_b && c != 0.0;
            break;
        }
        case Algorithm::SSA:
        case Algorithm::BFM:
        case Algorithm::SSS: {
            const double xi = cfg.algorithm == Algorithm::SSA ? cfg.eta : cfg.lambda * eval.phi;
            const bool gated = cfg.algorithm != Algorithm::BFM;
            dec.gamma = gamma_coefficient(xi, eval.lf_phi, eval.lg_phi);
            dec.gamma_defined = true;
            dec.ind_a = dec.mu > dec.gamma;
            const bool active = dec.ind_a && (!gated || dec.ind_b);
            dec.alpha = active ? dec.gamma : dec.mu;
            intervene = active;
            break;
        }
    }

    Vec u = intervene ? Vec(dec.alpha * eval.lg_phi.transpose() + dec.u0_e) : u0;
    SafeControlOutput out = make_output(u, intervene, std::move(dec), eval);
    if (cfg.algorithm == Algorithm::SMA && intervene && out.diagnostics.predicted_phi_dot > 0.0)
        out.diagnostics.sma_rate_warning = true;
    return out;
}

SafeControlOutput direct_pfm(const ControllerConfig& cfg, const Vec& u0,
                             const SafetyEvaluation& eval) {
    Decomposition dec = decompose(u0, eval.lg_phi);
    dec.ind_b = eval.phi >= 0.0;
    const bool intervene = dec.ind_b && eval.lg_phi.squaredNorm() > 0.0 && cfg.c1 != 0.0;
    Vec u = intervene ? Vec(u0 - cfg.c1 * eval.lg_phi.transpose()) : u0;
    dec.alpha = dec.mu - (dec.ind_b ? cfg.c1 : 0.0);
    return make_output(u, intervene, std::move(dec), eval);
}

SafeControlOutput direct_sma(const ControllerConfig& cfg, const Vec& u0,
                             const SafetyEvaluation& eval) {
    Decomposition dec = decompose(u0, eval.lg_phi);
    dec.ind_b = eval.phi >= 0.0;
    const bool intervene = dec.ind_b && eval.lg_phi.squaredNorm() > 0.0 && cfg.c2 != 0.0;
    Vec u = intervene ? Vec(u0 - cfg.c2 * eval.lg_phi.transpose()) : u0;
    dec.alpha = dec.mu - (dec.ind_b ? cfg.c2 : 0.0);
    SafeControlOutput out = make_output(u, intervene, std::move(dec), eval);
    if (intervene && out.diagnostics.predicted_phi_dot > 0.0)
        out.diagnostics.sma_rate_warning = true;
    return out;
}

SafeControlOutput direct_projection(const Vec& u0, const SafetyEvaluation& eval, double xi,
                                    bool gate_on_phi) {
    Decomposition dec = decompose(u0, eval.lg_phi);
    dec.ind_b = eval.phi >= 0.0;
    const double lg2 = eval.lg_phi.squaredNorm();
    if (!(lg2 > 0.0)) {
        dec.alpha = 0.0;
        return make_output(u0, false, std::move(dec), eval);
    }
    dec.gamma = gamma_coefficient(xi, eval.lf_phi, eval.lg_phi);
    dec.gamma_defined = true;
    dec.ind_a = dec.mu > dec.gamma;

    if ((gate_on_phi && !dec.ind_b) || !dec.ind_a) {
        dec.alpha = dec.mu;
        return make_output(u0, false, std::move(dec), eval);
    }
    dec.alpha = dec.gamma;
    Vec u = dec.gamma * eval.lg_phi.transpose() + dec.u0_e;
    return make_output(u, true, std::move(dec), eval);
}

Vec reference_controller(const RobotModel& model, const Vec& x, const Vec& goal,
                         const ReferenceGains& gains) {
    if (goal.size() != model.workspace_dim())
        throw RejectedInputError("goal dimension mismatch");

    Vec u(model.nu());
    switch (model.kind) {
        case ModelKind::Ball2D:
            u = gains.kp * (goal - x.head(2)) - gains.kd * x.tail(2);
            break;
        case ModelKind::Unicycle: {
            const Vec to_goal = goal - x.head(2);
            const double dist = to_goal.norm();
            double heading_err = 0.0;
            if (dist > 1e-9)
                heading_err = wrap_angle(std::atan2(to_goal(1), to_goal(0)) - x(3));
            u(0) = gains.kp * dist * std::cos(heading_err) - gains.kd * x(2);
            u(1) = gains.k_theta * heading_err;
            break;
        }
        case ModelKind::Scara:
        case ModelKind::Arm4Dof: {
            const Mat J = end_effector_jacobian(model, x);
            const Vec ee = end_effector(model, x);
            const Vec ee_vel = J * f_drift(model, x);
            const Vec a_task = gains.kp * (goal - ee) - gains.kd * ee_vel;
            u = J.middleCols(0, model.nu()).transpose() * a_task;
            break;
        }
    }
    const double norm = u.norm();
    if (norm > gains.u_max) u *= gains.u_max / norm;
    return u;
}

}  // namespace safectrl
