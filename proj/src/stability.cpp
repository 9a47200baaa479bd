#include "zonofuse/stability.hpp"

#include <cmath>
#include <limits>

namespace zonofuse {

double compute_mu(double lambda_min, double lambda_max, int d, int n) {
    const double dn = static_cast<double>(d + n);
    return ((lambda_max / lambda_min) * dn - 1.0) * dn;
}

double estimate_gamma(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                      const Eigen::MatrixXd& K, const WeightMatrix& W) {
    const Eigen::Index n = A.rows();
    if (A.cols() != n || C.cols() != n || K.rows() != n || K.cols() != C.rows() || W.dim() != n)
        throw DimensionError("estimate_gamma: dimension mismatch");
    const Eigen::MatrixXd Acl = (Eigen::MatrixXd::Identity(n, n) - K * C) * A;
    const Eigen::MatrixXd S = Acl.transpose() * W.matrix() * Acl;
    // F^{-T} S F^{-1} with F upper triangular, W = F^T F
    const Eigen::MatrixXd& F = W.factor();
    const Eigen::MatrixXd T1 = F.transpose().triangularView<Eigen::Lower>().solve(S);
    const Eigen::MatrixXd M =
        F.transpose().triangularView<Eigen::Lower>().solve(T1.transpose()).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (M + M.transpose()));
    return eig.eigenvalues().maxCoeff();
}

Eigen::MatrixXd steady_state_gain(const PlantModel& plant, const SensorModel& sensor,
                                  const WeightMatrix& W, Eigen::Index r) {
    LocalEstimate est{sensor.id, 0, plant.initial};
    Eigen::MatrixXd K_prev;
    for (int it = 1; it <= 10000; ++it) {
        const Zonotope pred = predict(est, plant, it);
        const Eigen::MatrixXd K = optimal_gain(pred, sensor, it);
        const Zonotope obs = observe(pred, sensor, it,
                                     Eigen::VectorXd::Zero(sensor.C(it).rows()), K);
        est = LocalEstimate{sensor.id, it, reduce(obs, r, W)};
        if (K_prev.size() &&
            (K - K_prev).norm() <= 1e-10 * std::max(1.0, K.norm()))
            return K;
        K_prev = K;
    }
    return K_prev;
}

StabilityReport check_ultimate_boundedness(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                           const Eigen::MatrixXd& C, const Eigen::MatrixXd& D,
                                           const Eigen::MatrixXd& K, const WeightMatrix& W,
                                           Eigen::Index r, int sensor_id) {
    const Eigen::Index n = A.rows();
    StabilityReport rep;
    rep.sensor_id = sensor_id;
    rep.order = r;
    rep.d = static_cast<int>(B.cols() + C.rows());  // column growth per step
    rep.gamma = estimate_gamma(A, C, K, W);
    rep.mu = compute_mu(W.lambda_min(), W.lambda_max(), rep.d, static_cast<int>(n));
    rep.contraction = rep.gamma * (1.0 + rep.mu / static_cast<double>(rep.d + r));

    const Eigen::MatrixXd IKC = Eigen::MatrixXd::Identity(n, n) - K * C;
    rep.phi = weighted_norm_sq(IKC * A * B, W) + weighted_norm_sq(K * D, W);

    rep.bounded = rep.contraction < 1.0;
    rep.ultimate_bound = rep.bounded ? rep.phi / (1.0 - rep.contraction)
                                     : std::numeric_limits<double>::infinity();
    if (rep.gamma < 1.0) {
        const double rmin = rep.gamma * rep.mu / (1.0 - rep.gamma) - rep.d;
        rep.min_bounded_order =
            std::max<Eigen::Index>(n, static_cast<Eigen::Index>(std::floor(rmin)) + 1);
    }
    return rep;
}

} // namespace zonofuse
