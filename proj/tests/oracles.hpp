#ifndef ZONOFUSE_TESTS_ORACLES_HPP_
#define ZONOFUSE_TESTS_ORACLES_HPP_

// Test-only oracles, independent of the library's implementation paths:
// a derivative-free minimizer, Monte-Carlo sampling helpers, a dense-grid
// set-membership oracle for planar instances, and seeded random fusion
// instances.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "zonofuse/rng.hpp"
#include "zonofuse/zonotope.hpp"

namespace oracles {

// Cyclic coordinate descent with exact parabolic line minimization. On the
// convex quadratics checked here it converges to the global optimum.
inline Eigen::VectorXd coordinate_descent(const std::function<double(const Eigen::VectorXd&)>& f,
                                          Eigen::VectorXd x, int max_cycles = 4000,
                                          double h = 0.5, double rel_tol = 1e-13) {
    double fx = f(x);
    for (int c = 0; c < max_cycles; ++c) {
        const double f_before = fx;
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp(j) += h;
            xm(j) -= h;
            const double fp = f(xp), fm = f(xm);
            const double curv = fp - 2.0 * fx + fm;
            if (curv <= 1e-300) {
                if (fp < fx) { x = xp; fx = fp; }
                else if (fm < fx) { x = xm; fx = fm; }
                continue;
            }
            Eigen::VectorXd xn = x;
            xn(j) += 0.5 * (fm - fp) / curv * h;
            const double fn = f(xn);
            if (fn < fx) { x = xn; fx = fn; }
        }
        if (f_before - fx <= rel_tol * std::max(1.0, std::abs(fx))) break;
    }
    return x;
}

// Random point of <c, R> through a sampled hypercube point.
inline Eigen::VectorXd sample_point(const zonofuse::Zonotope& z, zonofuse::NoiseStream& s) {
    return z.center() + z.generators() * s.uniform_vec(z.order());
}

// Fraction of a dense grid over `box` where the two membership predicates
// disagree, in absolute area units (cell area times mismatch count).
inline double grid_mismatch_area(const std::function<bool(const Eigen::Vector2d&)>& in_a,
                                 const std::function<bool(const Eigen::Vector2d&)>& in_b,
                                 const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                                 double pitch = 1e-2) {
    long long mism = 0;
    for (double xx = lo(0) + pitch / 2; xx < hi(0); xx += pitch)
        for (double yy = lo(1) + pitch / 2; yy < hi(1); yy += pitch) {
            const Eigen::Vector2d p(xx, yy);
            if (in_a(p) != in_b(p)) ++mism;
        }
    return static_cast<double>(mism) * pitch * pitch;
}

// Shoelace area of a planar point set in angular order about its mean.
inline double polygon_area(const Eigen::MatrixXd& V) {
    const Eigen::Vector2d c = V.rowwise().mean();
    std::vector<int> order(static_cast<std::size_t>(V.cols()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::atan2(V(1, a) - c(1), V(0, a) - c(0)) <
               std::atan2(V(1, b) - c(1), V(0, b) - c(0));
    });
    double area = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& p = V.col(order[i]);
        const auto& q = V.col(order[(i + 1) % order.size()]);
        area += p(0) * q(1) - q(0) * p(1);
    }
    return 0.5 * std::abs(area);
}

// Random full-rank zonotope with entries in [-1,1] and a conditioning floor.
inline zonofuse::Zonotope random_zonotope(zonofuse::NoiseStream& s, Eigen::Index n,
                                          Eigen::Index r, double sigma_floor = 0.15) {
    for (;;) {
        Eigen::MatrixXd R(n, r);
        for (Eigen::Index j = 0; j < r; ++j)
            for (Eigen::Index i = 0; i < n; ++i) R(i, j) = s.uniform();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
        if (svd.singularValues()(n - 1) > sigma_floor * svd.singularValues()(0))
            return zonofuse::Zonotope(s.uniform_vec(n), R);
    }
}

// L zonotopes sharing an interior anchor point (nonempty intersection).
inline std::vector<zonofuse::Zonotope> random_overlapping(zonofuse::NoiseStream& s,
                                                          Eigen::Index n, int L,
                                                          Eigen::Index r_lo, Eigen::Index r_hi) {
    const Eigen::VectorXd anchor = s.uniform_vec(n);
    std::vector<zonofuse::Zonotope> zs;
    for (int i = 0; i < L; ++i) {
        const Eigen::Index r =
            r_lo + static_cast<Eigen::Index>(s.next_u64() % static_cast<std::uint64_t>(r_hi - r_lo + 1));
        for (;;) {
            Eigen::MatrixXd R(n, r);
            for (Eigen::Index j = 0; j < r; ++j)
                for (Eigen::Index q = 0; q < n; ++q) R(q, j) = s.uniform();
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
            if (svd.singularValues()(n - 1) <= 0.15 * svd.singularValues()(0)) continue;
            Eigen::VectorXd u(r);
            for (Eigen::Index j = 0; j < r; ++j) u(j) = 0.5 * s.uniform();
            zs.emplace_back(anchor - R * u, R);
            break;
        }
    }
    return zs;
}

} // namespace oracles

#endif
