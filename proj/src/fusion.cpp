#include "zonofuse/fusion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace zonofuse {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void validate(const FusionProblem& p) {
    if (p.estimates.size() < 2)
        throw DimensionError("fusion: at least two local estimates required");
    const Eigen::Index n = p.estimates.front().set.dim();
    const int k = p.estimates.front().step;
    for (const auto& e : p.estimates) {
        if (e.set.dim() != n) throw DimensionError("fusion: mixed dimensions");
        if (e.step != k) throw DimensionError("fusion: mixed step indices");
    }
    if (p.W.dim() != n) throw DimensionError("fusion: weight dimension mismatch");
}

std::vector<int> arrival_order(const FusionProblem& p) {
    const int L = static_cast<int>(p.estimates.size());
    if (p.arrival.empty()) {
        std::vector<int> id(static_cast<std::size_t>(L));
        std::iota(id.begin(), id.end(), 0);
        return id;
    }
    std::vector<int> seen(static_cast<std::size_t>(L), 0);
    for (int i : p.arrival) {
        if (i < 0 || i >= L || seen[static_cast<std::size_t>(i)]++)
            throw DimensionError("fusion: arrival order is not a permutation");
    }
    return p.arrival;
}

double min_local_norm(const FusionProblem& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : p.estimates)
        best = std::min(best, weighted_norm_sq(e.set, p.W));
    return best;
}

// Uniform column splitting: <c, [R/m ... m copies]> is the same set with
// norm^2 divided by m. Returns the smallest m certifying norm <= target.
Zonotope balance_to_norm(const Zonotope& z, double target, const WeightMatrix& W, int& splits) {
    splits = 1;
    const double norm = weighted_norm_sq(z, W);
    if (target <= 0.0 || norm <= target || z.order() == 0) return z;
    int m = static_cast<int>(std::ceil(norm / target - 1e-12));
    m = std::clamp(m, 2, 64);
    Eigen::MatrixXd R(z.dim(), z.order() * m);
    for (int t = 0; t < m; ++t) R.middleCols(t * z.order(), z.order()) = z.generators() / m;
    splits = m;
    return Zonotope(z.center(), std::move(R));
}

void fill_metrics(FusionResult& r, const WeightMatrix& W, Exec exec) {
    r.weighted_norm_sq = weighted_norm_sq(r.fused, W);
    r.volume = volume(r.fused, exec);
    r.generator_order = r.fused.order();
}

// Tight-strip improvement of `base` against the vertices of O, shared by the
// improved and sequential criteria.
Zonotope improve_against(const Zonotope& base, const VertexSet& overts,
                         const FusionProblem& p, Exec exec, int& splits) {
    const HalfspaceRep rep = halfspace_rep(base, exec);
    const std::vector<Strip> strips = tight_strips(base.center(), rep, overts);
    const Zonotope realized = realize_strip_intersection(base.center(), strips, exec);
    return balance_to_norm(realized, min_local_norm(p), p.W, splits);
}

// Derivative-free simplex search (Nelder-Mead), deterministic, bounded by a
// fixed evaluation budget. Returns best-found x; `converged` reports whether
// the simplex collapsed before the budget ran out.
struct SimplexResult {
    Eigen::VectorXd x;
    double f = 0.0;
    bool converged = false;
};

template <typename F>
SimplexResult simplex_search(F&& f, const Eigen::VectorXd& x0, int budget) {
    const int dim = static_cast<int>(x0.size());
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) { ++evals; return f(x); };

    std::vector<Eigen::VectorXd> xs;
    std::vector<double> fs;
    xs.push_back(x0);
    fs.push_back(eval(x0));
    for (int i = 0; i < dim; ++i) {
        Eigen::VectorXd xi = x0;
        xi(i) += (xi(i) != 0.0) ? 0.05 * std::abs(xi(i)) : 0.00025;
        xs.push_back(xi);
        fs.push_back(eval(xi));
    }
    std::vector<int> ord(xs.size());

    SimplexResult best;
    best.x = xs[0];
    best.f = fs[0];
    while (evals < budget) {
        std::iota(ord.begin(), ord.end(), 0);
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return fs[static_cast<std::size_t>(a)] < fs[static_cast<std::size_t>(b)]; });
        const int lo = ord.front(), hi = ord.back(), next_hi = ord[ord.size() - 2];
        if (fs[static_cast<std::size_t>(lo)] < best.f) { best.f = fs[static_cast<std::size_t>(lo)]; best.x = xs[static_cast<std::size_t>(lo)]; }
        if (std::abs(fs[static_cast<std::size_t>(hi)] - fs[static_cast<std::size_t>(lo)]) <=
            1e-12 * (1.0 + std::abs(fs[static_cast<std::size_t>(lo)]))) {
            best.converged = true;
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (int i : ord)
            if (i != hi) centroid += xs[static_cast<std::size_t>(i)];
        centroid /= dim;

        const Eigen::VectorXd refl = centroid + (centroid - xs[static_cast<std::size_t>(hi)]);
        const double fr = eval(refl);
        if (fr < fs[static_cast<std::size_t>(lo)]) {
            const Eigen::VectorXd expa = centroid + 2.0 * (centroid - xs[static_cast<std::size_t>(hi)]);
            const double fe = eval(expa);
            if (fe < fr) { xs[static_cast<std::size_t>(hi)] = expa; fs[static_cast<std::size_t>(hi)] = fe; }
            else { xs[static_cast<std::size_t>(hi)] = refl; fs[static_cast<std::size_t>(hi)] = fr; }
        } else if (fr < fs[static_cast<std::size_t>(next_hi)]) {
            xs[static_cast<std::size_t>(hi)] = refl;
            fs[static_cast<std::size_t>(hi)] = fr;
        } else {
            const Eigen::VectorXd contr = centroid + 0.5 * (xs[static_cast<std::size_t>(hi)] - centroid);
            const double fc = eval(contr);
            if (fc < fs[static_cast<std::size_t>(hi)]) {
                xs[static_cast<std::size_t>(hi)] = contr;
                fs[static_cast<std::size_t>(hi)] = fc;
            } else {
                for (std::size_t i = 0; i < xs.size(); ++i) {
                    if (static_cast<int>(i) == lo) continue;
                    xs[i] = xs[static_cast<std::size_t>(lo)] + 0.5 * (xs[i] - xs[static_cast<std::size_t>(lo)]);
                    fs[i] = eval(xs[i]);
                    if (evals >= budget) break;
                }
            }
        }
    }
    std::size_t arg = 0;
    for (std::size_t i = 1; i < fs.size(); ++i)
        if (fs[i] < fs[arg]) arg = i;
    if (fs[arg] < best.f) { best.f = fs[arg]; best.x = xs[arg]; }
    return best;
}

} // namespace

std::string to_string(FusionMethod m) {
    switch (m) {
        case FusionMethod::batch_opt: return "batch_opt";
        case FusionMethod::improved: return "improved";
        case FusionMethod::sequential: return "sequential";
        case FusionMethod::volume_opt: return "volume_opt";
        case FusionMethod::box: return "box";
    }
    return "?";
}

FusionMethod fusion_method_from_string(const std::string& name) {
    if (name == "batch_opt") return FusionMethod::batch_opt;
    if (name == "improved") return FusionMethod::improved;
    if (name == "sequential") return FusionMethod::sequential;
    if (name == "volume_opt") return FusionMethod::volume_opt;
    if (name == "box") return FusionMethod::box;
    throw ParseError("unknown fusion method: " + name);
}

FusionProblem make_problem(const std::vector<Zonotope>& zs, const WeightMatrix& W) {
    FusionProblem p;
    p.W = W;
    for (std::size_t i = 0; i < zs.size(); ++i)
        p.estimates.push_back(LocalEstimate{static_cast<int>(i), 0, zs[i]});
    validate(p);
    return p;
}

void batch_objective_matrices(const FusionProblem& p, Eigen::MatrixXd& N1, Eigen::MatrixXd& N2) {
    validate(p);
    const Eigen::Index n = p.dim();
    const Eigen::Index L = static_cast<Eigen::Index>(p.count());
    Eigen::Index rtot = 0;
    for (const auto& e : p.estimates) rtot += e.set.order();
    N1 = Eigen::MatrixXd::Zero(n, rtot);
    N1.leftCols(p.estimates[0].set.order()) = p.estimates[0].set.generators();
    N2 = Eigen::MatrixXd::Zero((L - 1) * n, rtot);
    Eigen::Index col = p.estimates[0].set.order();
    for (Eigen::Index i = 1; i < L; ++i) {
        const auto& Ri = p.estimates[static_cast<std::size_t>(i)].set.generators();
        N2.block((i - 1) * n, 0, n, p.estimates[0].set.order()) = -p.estimates[0].set.generators();
        N2.block((i - 1) * n, col, n, Ri.cols()) = Ri;
        col += Ri.cols();
    }
}

FusionResult fuse_batch(const FusionProblem& p, const std::vector<Eigen::MatrixXd>& M,
                        Exec exec) {
    validate(p);
    const Eigen::Index n = p.dim();
    const Eigen::Index L = static_cast<Eigen::Index>(p.count());
    if (static_cast<Eigen::Index>(M.size()) != L - 1)
        throw DimensionError("fuse_batch: expected L-1 weight matrices");
    for (const auto& Mi : M)
        if (Mi.rows() != n || Mi.cols() != n)
            throw DimensionError("fuse_batch: weight matrices must be n x n");

    const auto t0 = Clock::now();
    const auto& first = p.estimates[0].set;
    Eigen::MatrixXd Msum = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd center = first.center();
    for (Eigen::Index i = 1; i < L; ++i) {
        Msum += M[static_cast<std::size_t>(i - 1)];
        center += M[static_cast<std::size_t>(i - 1)] *
                  (p.estimates[static_cast<std::size_t>(i)].set.center() - first.center());
    }
    Eigen::Index rtot = first.order();
    for (Eigen::Index i = 1; i < L; ++i) rtot += p.estimates[static_cast<std::size_t>(i)].set.order();
    Eigen::MatrixXd R(n, rtot);
    R.leftCols(first.order()) = (Eigen::MatrixXd::Identity(n, n) - Msum) * first.generators();
    Eigen::Index col = first.order();
    for (Eigen::Index i = 1; i < L; ++i) {
        const auto& Ri = p.estimates[static_cast<std::size_t>(i)].set.generators();
        R.middleCols(col, Ri.cols()) = M[static_cast<std::size_t>(i - 1)] * Ri;
        col += Ri.cols();
    }

    FusionResult out;
    out.fused = Zonotope(std::move(center), std::move(R));
    out.method = FusionMethod::batch_opt;
    out.params = M;
    out.wall_time_ms = ms_since(t0);
    fill_metrics(out, p.W, exec);
    return out;
}

std::vector<Eigen::MatrixXd> optimal_batch_weights(const FusionProblem& p) {
    validate(p);
    const Eigen::Index n = p.dim();
    const Eigen::Index L = static_cast<Eigen::Index>(p.count());
    for (const auto& e : p.estimates)
        if (e.set.rank() < n)
            throw RankDeficiencyError("optimal_batch_weights: local estimate without full row rank");
    Eigen::MatrixXd N1, N2;
    batch_objective_matrices(p, N1, N2);
    const Eigen::MatrixXd G = N2 * N2.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (lmin <= 0.0 || lmax / lmin > 1e12)
        throw RankDeficiencyError("optimal_batch_weights: N2 N2^T is singular (degenerate local estimate)");
    const Eigen::MatrixXd M = -G.ldlt().solve(N2 * N1.transpose()).transpose();
    std::vector<Eigen::MatrixXd> out;
    for (Eigen::Index i = 0; i + 1 < L; ++i) out.push_back(M.middleCols(i * n, n));
    return out;
}

FusionResult fuse_batch_optimal(const FusionProblem& p, Exec exec) {
    return fuse_batch(p, optimal_batch_weights(p), exec);
}

FusionResult fuse_improved(const FusionProblem& p, const VertexSet* o_vertices, Exec exec) {
    validate(p);
    const auto t0 = Clock::now();
    const std::vector<Eigen::MatrixXd> M = optimal_batch_weights(p);
    FusionResult base = fuse_batch(p, M, exec);
    VertexSet overts;
    if (o_vertices == nullptr) {
        std::vector<Zonotope> zs;
        for (const auto& e : p.estimates) zs.push_back(e.set);
        overts = intersection_vertices(zs, exec);
    } else {
        overts = *o_vertices;
    }
    FusionResult out;
    out.method = FusionMethod::improved;
    out.params = M;
    out.fused = improve_against(base.fused, overts, p, exec, out.balance_splits);
    out.wall_time_ms = ms_since(t0);
    out.prefusion = std::move(base.fused);
    fill_metrics(out, p.W, exec);
    return out;
}

std::pair<Zonotope, Eigen::MatrixXd> fuse_sequential_stage(const Zonotope& acc,
                                                           const Zonotope& next,
                                                           const WeightMatrix& W) {
    if (acc.dim() != next.dim() || W.dim() != acc.dim())
        throw DimensionError("fuse_sequential_stage: dimension mismatch");
    const Eigen::Index n = acc.dim();
    const Eigen::MatrixXd Pf = acc.generators() * acc.generators().transpose();
    const Eigen::MatrixXd Pn = next.generators() * next.generators().transpose();
    const Eigen::MatrixXd S = Pf + Pn;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (lmin <= 0.0 || lmax / lmin > 1e12)
        throw SingularSumError("fuse_sequential_stage: generator sum matrix is singular");
    const Eigen::MatrixXd Mi = S.ldlt().solve(Pf).transpose();
    Eigen::MatrixXd R(n, acc.order() + next.order());
    R << (Eigen::MatrixXd::Identity(n, n) - Mi) * acc.generators(), Mi * next.generators();
    Zonotope fused(acc.center() + Mi * (next.center() - acc.center()), std::move(R));
    return {std::move(fused), Mi};
}

FusionResult fuse_sequential(const FusionProblem& p, const VertexSet* o_vertices, Exec exec) {
    validate(p);
    const std::vector<int> order = arrival_order(p);
    const auto t0 = Clock::now();
    Zonotope acc = p.estimates[static_cast<std::size_t>(order[0])].set;
    std::vector<Eigen::MatrixXd> Ms;
    for (std::size_t i = 1; i < order.size(); ++i) {
        auto [fused, Mi] =
            fuse_sequential_stage(acc, p.estimates[static_cast<std::size_t>(order[i])].set, p.W);
        acc = std::move(fused);
        Ms.push_back(std::move(Mi));
    }
    VertexSet overts;
    if (o_vertices == nullptr) {
        std::vector<Zonotope> zs;
        for (const auto& e : p.estimates) zs.push_back(e.set);
        overts = intersection_vertices(zs, exec);
    } else {
        overts = *o_vertices;
    }
    FusionResult out;
    out.method = FusionMethod::sequential;
    out.params = std::move(Ms);
    out.fused = improve_against(acc, overts, p, exec, out.balance_splits);
    out.wall_time_ms = ms_since(t0);
    out.prefusion = std::move(acc);
    fill_metrics(out, p.W, exec);
    return out;
}

FusionResult fuse_volume_optimal(const FusionProblem& p, Exec exec) {
    validate(p);
    const Eigen::Index n = p.dim();
    const Eigen::Index L = static_cast<Eigen::Index>(p.count());
    if (n > 4 || L > 4)
        throw DimensionError("fuse_volume_optimal: desk scale only (n <= 4, L <= 4)");

    const auto t0 = Clock::now();
    const std::vector<Eigen::MatrixXd> M0 = optimal_batch_weights(p);
    const Eigen::Index mdim = n * (L - 1) * n;
    Eigen::VectorXd x0(mdim);
    for (Eigen::Index i = 0; i + 1 < L; ++i)
        x0.segment(i * n * n, n * n) =
            Eigen::Map<const Eigen::VectorXd>(M0[static_cast<std::size_t>(i)].data(), n * n);

    const auto& first = p.estimates[0].set;
    auto unpack = [&](const Eigen::VectorXd& x) {
        std::vector<Eigen::MatrixXd> M;
        for (Eigen::Index i = 0; i + 1 < L; ++i)
            M.push_back(Eigen::Map<const Eigen::MatrixXd>(x.data() + i * n * n, n, n));
        return M;
    };
    Eigen::Index rtot = first.order();
    for (Eigen::Index i = 1; i < L; ++i) rtot += p.estimates[static_cast<std::size_t>(i)].set.order();
    Eigen::MatrixXd Rbuf(n, rtot);
    Eigen::MatrixXd Msum(n, n);
    auto objective = [&](const Eigen::VectorXd& x) {
        Msum.setZero();
        for (Eigen::Index i = 0; i + 1 < L; ++i)
            Msum += Eigen::Map<const Eigen::MatrixXd>(x.data() + i * n * n, n, n);
        Rbuf.leftCols(first.order()).noalias() =
            (Eigen::MatrixXd::Identity(n, n) - Msum) * first.generators();
        Eigen::Index col = first.order();
        for (Eigen::Index i = 1; i < L; ++i) {
            const auto& Ri = p.estimates[static_cast<std::size_t>(i)].set.generators();
            Rbuf.middleCols(col, Ri.cols()).noalias() =
                Eigen::Map<const Eigen::MatrixXd>(x.data() + (i - 1) * n * n, n, n) * Ri;
            col += Ri.cols();
        }
        return kernels::volume_subset_sum(Rbuf, Exec::serial);
    };

    const SimplexResult best = simplex_search(objective, x0, 2000);
    FusionResult out = fuse_batch(p, unpack(best.x), exec);
    out.method = FusionMethod::volume_opt;
    out.converged = best.converged;
    out.wall_time_ms = ms_since(t0);
    return out;
}

FusionResult box_baseline(const FusionProblem& p, const VertexSet* o_vertices, Exec exec) {
    validate(p);
    const auto t0 = Clock::now();
    VertexSet overts;
    if (o_vertices == nullptr) {
        std::vector<Zonotope> zs;
        for (const auto& e : p.estimates) zs.push_back(e.set);
        overts = intersection_vertices(zs, exec);
    } else {
        overts = *o_vertices;
    }
    FusionResult out;
    out.method = FusionMethod::box;
    out.fused = interval_hull(overts.vertices);
    out.wall_time_ms = ms_since(t0);
    fill_metrics(out, p.W, exec);
    return out;
}

} // namespace zonofuse
