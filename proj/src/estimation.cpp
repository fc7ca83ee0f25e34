#include "safectrl/estimation.hpp"

#include <Eigen/Dense>

namespace safectrl {

void KalmanConfig::validate() const {
    const auto n = A.rows();
    if (A.cols() != n) throw RejectedInputError("A must be square");
    if (B.rows() != n) throw RejectedInputError("B row count must match A");
    if (C.cols() != n) throw RejectedInputError("C column count must match A");
    if (Q.rows() != n || Q.cols() != n) throw RejectedInputError("Q must match the state size");
    if (R.rows() != C.rows() || R.cols() != C.rows())
        throw RejectedInputError("R must match the measurement size");
}

GaussianBelief kf_predict(const KalmanConfig& cfg, const GaussianBelief& belief, const Vec& u) {
    GaussianBelief out;
    out.mean = cfg.A * belief.mean + cfg.B * u;
    out.covariance = cfg.A * belief.covariance * cfg.A.transpose() + cfg.Q;
    return out;
}

GaussianBelief kf_update(const KalmanConfig& cfg, const GaussianBelief& belief, const Vec& z) {
    const Mat S = cfg.C * belief.covariance * cfg.C.transpose() + cfg.R;
    Eigen::FullPivLU<Mat> lu(S);
    if (!lu.isInvertible())
        throw SingularInnovationError("innovation covariance is singular");

    const Mat K = (lu.solve(cfg.C * belief.covariance.transpose())).transpose();
    const Vec innovation = z - cfg.C * belief.mean;

    GaussianBelief out;
    out.mean = belief.mean + K * innovation;
    const Mat I = Mat::Identity(belief.mean.size(), belief.mean.size());
    const Mat IKC = I - K * cfg.C;
    out.covariance = IKC * belief.covariance * IKC.transpose() + K * cfg.R * K.transpose();
    return out;
}

}  // namespace safectrl
