#pragma once

#include <string>

#include "safectrl/safety_index.hpp"

namespace safectrl {

enum class Algorithm { PFM, SMA, SSA, BFM, SSS };

const char* algorithm_name(Algorithm alg);
Algorithm algorithm_from_name(const std::string& name);

// Per-algorithm parameters beside the shared safety-index pair:
//   PFM: c1 gain; SMA: c2 gain; SSA: slack eta (<= 0);
//   BFM and SSS: decay rate lambda (< 0).
struct ControllerConfig {
    Algorithm algorithm = Algorithm::SSA;
    double c1 = 1.0;
    double c2 = 3.0;
    double eta = -0.1;
    double lambda = -1.0;
    SafetyIndexParams safety_params;

    void validate() const;
    // The knob a sweep varies for this algorithm.
    double algorithm_param() const;
    ControllerConfig with_param(double value) const;
};

// Reference control split along (u0_s) and orthogonal to (u0_e) lg_phi,
// plus the unified-framework coefficients.
struct Decomposition {
    Vec u0_s, u0_e;
    double mu = 0.0;
    bool mu_defined = false;
    double gamma = 0.0;
    bool gamma_defined = false;
    bool ind_a = false;  // reference violates the phi-dot constraint
    bool ind_b = false;  // phi >= 0
    double alpha = 0.0;
    double beta = 0.0;   // identically zero in all five laws
};

struct ControlDiagnostics {
    double phi = 0.0;
    double lf_phi = 0.0;
    double lg_phi_norm = 0.0;
    double predicted_phi_dot = 0.0;
    bool degenerate = false;         // ||lg_phi|| = 0, constraint unenforceable
    bool sma_rate_warning = false;   // SMA correction left phi-dot positive
};

struct SafeControlOutput {
    Vec u;
    bool intervened = false;
    Decomposition decomposition;
    ControlDiagnostics diagnostics;
};

// mu = (lg . u0) / ||lg||^2, u0_s = mu lg^T, u0_e = u0 - u0_s.
// With ||lg|| = 0: mu undefined, u0_s = 0, u0_e = u0.
Decomposition decompose(const Vec& u0, const RowVec& lg_phi);

// gamma = (xi - lf) / ||lg||^2. Caller must ensure ||lg|| > 0.
double gamma_coefficient(double xi, double lf_phi, const RowVec& lg_phi);

// The unified law u = alpha lg^T + u0_e with alpha chosen per algorithm.
// Returns u0 verbatim when the algorithm does not intervene.
SafeControlOutput unified_control(const ControllerConfig& cfg, const Vec& u0,
                                  const SafetyEvaluation& eval);

// Direct forms, used to cross-validate the unified law.
SafeControlOutput direct_pfm(const ControllerConfig& cfg, const Vec& u0,
                             const SafetyEvaluation& eval);
SafeControlOutput direct_sma(const ControllerConfig& cfg, const Vec& u0,
                             const SafetyEvaluation& eval);
// Closed-form minimum-norm projection onto {u : lf + lg u <= xi}; with
// gate_on_phi the constraint is only enforced when phi >= 0.
SafeControlOutput direct_projection(const Vec& u0, const SafetyEvaluation& eval, double xi,
                                    bool gate_on_phi);

struct ReferenceGains {
    double kp = 4.0;
    double kd = 4.0;
    double k_theta = 3.0;  // unicycle heading gain
    double u_max = 5.0;
};

// Goal-seeking reference control: task-space PD mapped through the
// end-effector Jacobian transpose for arms, direct PD for the ball,
// heading-alignment PD for the unicycle. Clamped to ||u|| <= u_max.
Vec reference_controller(const RobotModel& model, const Vec& x, const Vec& goal,
                         const ReferenceGains& gains = {});

}  // namespace safectrl
