#pragma once

#include "safectrl/dynamics.hpp"

namespace safectrl {

struct GaussianBelief {
    Vec mean;
    Mat covariance;
};

// Linear-Gaussian filter model: x' = A x + B u + w, z = C x + v,
// w ~ N(0, Q), v ~ N(0, R).
struct KalmanConfig {
    Mat A, B, C, Q, R;
    void validate() const;
};

GaussianBelief kf_predict(const KalmanConfig& cfg, const GaussianBelief& belief, const Vec& u);

// Measurement update with Joseph-form covariance so the posterior stays PSD.
// Throws SingularInnovationError when the innovation covariance is singular.
GaussianBelief kf_update(const KalmanConfig& cfg, const GaussianBelief& belief, const Vec& z);

}  // namespace safectrl
