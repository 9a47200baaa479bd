#include "zonofuse/estimator.hpp"

#include <utility>

namespace zonofuse {

PlantModel PlantModel::time_invariant(Eigen::MatrixXd A, Eigen::MatrixXd B, Zonotope initial) {
    if (A.rows() != A.cols() || A.rows() != initial.dim() || B.rows() != A.rows())
        throw DimensionError("PlantModel: inconsistent dimensions");
    PlantModel m;
    m.A = [A = std::move(A)](int) { return A; };
    m.B = [B = std::move(B)](int) { return B; };
    m.initial = std::move(initial);
    return m;
}

SensorModel SensorModel::time_invariant(int id, Eigen::MatrixXd C, Eigen::MatrixXd D) {
    if (C.rows() != D.rows())
        throw DimensionError("SensorModel: C and D row counts differ");
    SensorModel s;
    s.id = id;
    s.C = [C = std::move(C)](int) { return C; };
    s.D = [D = std::move(D)](int) { return D; };
    return s;
}

Zonotope predict(const LocalEstimate& prev, const PlantModel& plant, int k) {
    const Eigen::MatrixXd A = plant.A(k - 1);
    const Eigen::MatrixXd B = plant.B(k - 1);
    if (A.cols() != prev.set.dim() || B.rows() != A.rows())
        throw DimensionError("predict: plant dimensions do not match the estimate");
    Eigen::MatrixXd R(A.rows(), prev.set.order() + B.cols());
    R << A * prev.set.generators(), B;
    return Zonotope(A * prev.set.center(), std::move(R));
}

Eigen::MatrixXd optimal_gain(const Zonotope& pred, const SensorModel& sensor, int k) {
    const Eigen::MatrixXd C = sensor.C(k);
    const Eigen::MatrixXd D = sensor.D(k);
    if (C.cols() != pred.dim())
        throw DimensionError("optimal_gain: sensor dimensions do not match the prediction");
    const Eigen::MatrixXd P = pred.generators() * pred.generators().transpose();
    const Eigen::MatrixXd S = C * P * C.transpose() + D * D.transpose();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (lmin <= 0.0 || lmax / lmin > 1e12)
        throw SingularInnovationError("optimal_gain: innovation matrix is singular");

    // K = P C^T S^{-1}; solve on the symmetric factorization, no explicit inverse
    return S.ldlt().solve(C * P).transpose();
}

Zonotope observe(const Zonotope& pred, const SensorModel& sensor, int k,
                 const Eigen::VectorXd& y, const Eigen::MatrixXd& K) {
    const Eigen::MatrixXd C = sensor.C(k);
    const Eigen::MatrixXd D = sensor.D(k);
    const Eigen::Index n = pred.dim();
    if (C.cols() != n || y.size() != C.rows() || K.rows() != n || K.cols() != C.rows())
        throw DimensionError("observe: dimension mismatch");
    Eigen::MatrixXd R(n, pred.order() + D.cols());
    R << (Eigen::MatrixXd::Identity(n, n) - K * C) * pred.generators(), -K * D;
    return Zonotope(pred.center() + K * (y - C * pred.center()), std::move(R));
}

LocalEstimate step(const LocalEstimate& prev, const PlantModel& plant,
                   const SensorModel& sensor, const Eigen::VectorXd& y,
                   const WeightMatrix& W, Eigen::Index r) {
    const int k = prev.step + 1;
    const Zonotope pred = predict(prev, plant, k);
    const Eigen::MatrixXd K = optimal_gain(pred, sensor, k);
    const Zonotope obs = observe(pred, sensor, k, y, K);
    return LocalEstimate{sensor.id, k, reduce(obs, r, W)};
}

} // namespace zonofuse
