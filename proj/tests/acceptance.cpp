// Acceptance suite: one check per numbered criterion, each printing a single
// PASS/FAIL line. Run with no arguments for all criteria or with a criterion
// number. Exit code 0 iff every executed criterion passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zonofuse/config.hpp"
#include "zonofuse/fusion.hpp"
#include "zonofuse/rng.hpp"
#include "zonofuse/sim.hpp"
#include "zonofuse/stability.hpp"

using namespace zonofuse;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double min_local_norm(const FusionProblem& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : p.estimates) best = std::min(best, weighted_norm_sq(e.set, p.W));
    return best;
}

// ---- 1. state inclusion over 20 seeds x 200 steps, <= 2 min ----
bool crit1(std::string& detail) {
    const auto t0 = Clock::now();
    long long steps = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ScenarioConfig cfg = tracking_preset(1.0);
        cfg.seed = seed;
        cfg.horizon = 200;
        cfg.methods = {FusionMethod::batch_opt, FusionMethod::improved,
                       FusionMethod::sequential, FusionMethod::box};
        const ScenarioResult res = run_scenario(cfg);
        if (res.exit_code != 0) {
            detail = "seed " + std::to_string(seed) + ": " + res.violation;
            return false;
        }
        for (const auto& st : res.steps) {
            ++steps;
            for (const auto& s : st.sensors)
                if (!s.inclusion) { detail = "local inclusion flag false"; return false; }
            for (const auto& m : st.methods)
                if (!m.inclusion) { detail = "fused inclusion flag false"; return false; }
        }
    }
    const double el = seconds_since(t0);
    detail = std::to_string(steps) + " steps, " + std::to_string(el) + " s";
    return steps == 20 * 200 && el <= 120.0;
}

// ---- 2. performance superiority, simulated steps + 1000 random instances ----
bool crit2(std::string& detail) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ScenarioConfig cfg = tracking_preset(1.0);
        cfg.seed = seed;
        cfg.horizon = 200;
        cfg.methods = {FusionMethod::batch_opt, FusionMethod::improved,
                       FusionMethod::sequential};
        const ScenarioResult res = run_scenario(cfg);
        if (res.exit_code != 0) { detail = res.violation; return false; }
        for (const auto& st : res.steps)
            for (const auto& m : st.methods)
                if (!m.superiority) {
                    detail = "superiority flag false at simulated step " + std::to_string(st.k) +
                             " (seed " + std::to_string(seed) + ")";
                    return false;
                }
    }
    NoiseStream s(2025, "crit2-instances");
    for (int t = 0; t < 1000; ++t) {
        const int L = 2 + static_cast<int>(s.next_u64() % 2);
        const auto zs = oracles::random_overlapping(s, 2, L, 3, 5);
        const FusionProblem p = make_problem(zs, WeightMatrix::identity(2));
        const double bound = min_local_norm(p) + 1e-8 * std::max(1.0, min_local_norm(p));
        if (fuse_batch_optimal(p).weighted_norm_sq > bound ||
            fuse_improved(p).weighted_norm_sq > bound ||
            fuse_sequential(p).weighted_norm_sq > bound) {
            detail = "random instance " + std::to_string(t);
            return false;
        }
    }
    detail = "4000 simulated steps x 3 methods + 1000 instances";
    return true;
}

// ---- 3. analytical optimum vs derivative-free minimizer, <= 5 min ----
bool crit3(std::string& detail) {
    const auto t0 = Clock::now();
    NoiseStream s(33, "crit3-instances");
    double worst_gap = 0.0, worst_grad = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(s.next_u64() % 3);
        const int L = 2 + static_cast<int>(s.next_u64() % 2);
        const auto zs = oracles::random_overlapping(s, n, L, n + 1, n + 3);
        const FusionProblem p = make_problem(zs, WeightMatrix::identity(n));

        MatrixXd N1, N2;
        batch_objective_matrices(p, N1, N2);
        const Eigen::Index md = n * (L - 1) * n;
        auto f = [&](const VectorXd& x) {
            const auto M = Eigen::Map<const MatrixXd>(x.data(), n, (L - 1) * n);
            return weighted_norm_sq(MatrixXd(N1 + M * N2), p.W);
        };
        const auto Mopt = optimal_batch_weights(p);
        MatrixXd Mrow(n, (L - 1) * n);
        for (int i = 0; i + 1 < L; ++i) Mrow.middleCols(i * n, n) = Mopt[static_cast<std::size_t>(i)];
        const double fstar = f(Eigen::Map<const VectorXd>(Mrow.data(), md));
        const VectorXd xo = oracles::coordinate_descent(f, VectorXd::Zero(md));
        const double gap = std::abs(fstar - f(xo)) / std::max(1.0, std::abs(fstar));
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-6) { detail = "objective gap " + std::to_string(gap); return false; }

        // batch gradient at the closed form
        const MatrixXd g1 = 2 * p.W.matrix() * (Mrow * N2 * N2.transpose() + N1 * N2.transpose());
        const double s1 = std::max(1.0, (2 * p.W.matrix() * N1 * N2.transpose()).norm());
        worst_grad = std::max(worst_grad, g1.norm() / s1);
        if (g1.norm() > 1e-8 * s1) { detail = "batch gradient residual"; return false; }

        // sequential stage gradient at its closed form
        const auto [fused, Mi] = fuse_sequential_stage(zs[0], zs[1], p.W);
        const MatrixXd Pf = zs[0].generators() * zs[0].generators().transpose();
        const MatrixXd Pn = zs[1].generators() * zs[1].generators().transpose();
        const MatrixXd g2 = 2 * p.W.matrix() * (Mi * Pf - Pf + Mi * Pn);
        const double s2 = std::max(1.0, (2 * p.W.matrix() * Pf).norm());
        if (g2.norm() > 1e-8 * s2) { detail = "stage gradient residual"; return false; }
    }
    const double el = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "200 instances, worst gap %.2e, worst gradient %.2e, %.1f s",
                  worst_gap, worst_grad, el);
    detail = buf;
    return el <= 300.0;
}

// ---- 4. nesting of the improved estimate, fixture + 500 random 2-D ----
bool crit4(std::string& detail) {
    auto nested = [](const FusionProblem& p) {
        const FusionResult r = fuse_improved(p);
        if (!r.prefusion.has_value()) return false;
        const HalfspaceRep rep = halfspace_rep(*r.prefusion);
        for (Eigen::Index i = 0; i < rep.pair_count(); ++i) {
            const VectorXd h = rep.normals().row(i).transpose();
            const double snew = support(r.fused, h);
            const double sold = support(*r.prefusion, h);
            if (snew > sold + 1e-9 * (1.0 + std::abs(sold))) return false;
        }
        return r.volume <= volume(*r.prefusion) * (1.0 + 1e-12);
    };

    if (!nested(make_problem(zono2d_fixture(), WeightMatrix::identity(2)))) {
        detail = "fixture";
        return false;
    }
    NoiseStream s(44, "crit4-instances");
    for (int t = 0; t < 500; ++t) {
        const int L = 2 + static_cast<int>(s.next_u64() % 2);
        const auto zs = oracles::random_overlapping(s, 2, L, 3, 5);
        if (!nested(make_problem(zs, WeightMatrix::identity(2)))) {
            detail = "instance " + std::to_string(t);
            return false;
        }
    }
    detail = "fixture + 500 instances, support-certified";
    return true;
}

// ---- 5. tracking-preset mean orderings over 20 seeds ----
bool crit5(std::string& detail) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ScenarioConfig cfg = tracking_preset(1.0);
        cfg.seed = seed;
        cfg.horizon = 200;
        cfg.methods = {FusionMethod::batch_opt, FusionMethod::improved,
                       FusionMethod::sequential, FusionMethod::volume_opt, FusionMethod::box};
        const ScenarioResult res = run_scenario(cfg);
        if (res.exit_code != 0) { detail = res.violation; return false; }

        double local1 = 0, local2 = 0;
        std::vector<double> norm(cfg.methods.size(), 0.0), vol(cfg.methods.size(), 0.0);
        for (const auto& st : res.steps) {
            local1 += st.sensors[0].norm2;
            local2 += st.sensors[1].norm2;
            for (std::size_t i = 0; i < st.methods.size(); ++i) {
                norm[i] += st.methods[i].norm2;
                vol[i] += st.methods[i].volume;
            }
        }
        const double nsteps = static_cast<double>(res.steps.size());
        local1 /= nsteps;
        local2 /= nsteps;
        for (auto& v : norm) v /= nsteps;
        for (auto& v : vol) v /= nsteps;

        const double batch_n = norm[0], impr_n = norm[1], volopt_n = norm[3], box_n = norm[4];
        const double locals = std::min(local1, local2);
        auto fails = [&](const char* what) {
            detail = "seed " + std::to_string(seed) + ": " + what;
            return false;
        };
        if (!(batch_n <= impr_n && impr_n <= locals)) return fails("improved norm ordering");
        if (!(batch_n <= volopt_n && volopt_n <= locals)) return fails("volume_opt norm ordering");
        if (!(batch_n <= box_n && box_n <= locals)) return fails("box norm ordering");
        if (!(impr_n <= local1 && impr_n <= local2 && volopt_n <= local1 && volopt_n <= local2 &&
              box_n <= local1 && box_n <= local2))
            return fails("fused means vs both locals");
        if (!(vol[1] <= vol[0])) return fails("improved volume vs batch volume");
    }
    detail = "orderings hold per seed-aggregate for all 20 seeds";
    return true;
}

// ---- 6. timing trends ----
bool crit6(std::string& detail) {
    // volume-optimal growth in generator count at L = 3
    const auto rscan = bench_fusion({4, 8, 16, 32}, {3}, 5, 11,
                                    {"batch_opt", "improved", "volume_opt"});
    auto pick = [&](const std::vector<BenchRow>& rows, const std::string& m, Eigen::Index r) {
        for (const auto& row : rows)
            if (row.method == m && row.generators == r) return row.median_ms;
        return -1.0;
    };
    for (Eigen::Index r : {8, 16, 32}) {
        if (!(pick(rscan, "volume_opt", r) > pick(rscan, "batch_opt", r) &&
              pick(rscan, "volume_opt", r) > pick(rscan, "improved", r))) {
            detail = "volume_opt does not dominate at r = " + std::to_string(r);
            return false;
        }
    }
    const double g8 = pick(rscan, "volume_opt", 8), g16 = pick(rscan, "volume_opt", 16),
                 g32 = pick(rscan, "volume_opt", 32);
    if (!(g16 / g8 > 2.0 && g32 / g16 > 2.0)) {
        detail = "volume_opt growth not superlinear";
        return false;
    }

    // batch vs sequential stages at L = 8, r = 16, median over 50 repetitions
    const auto lscan = bench_fusion({16}, {8}, 50, 13, {"batch_opt", "sequential_stages"});
    const double batch = pick(lscan, "batch_opt", 16);
    const double seq = pick(lscan, "sequential_stages", 16);
    if (!(seq < batch)) {
        detail = "sequential stages not faster: " + std::to_string(seq) + " vs " +
                 std::to_string(batch);
        return false;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "volume_opt %0.3f/%0.3f/%0.3f ms at r=8/16/32; seq %.4f < batch %.4f ms", g8,
                  g16, g32, seq, batch);
    detail = buf;
    return true;
}

// ---- 7. reduction operator: containment + the printed loss bound ----
bool crit7(std::string& detail) {
    NoiseStream s(77, "crit7-instances");
    for (int t = 0; t < 1000; ++t) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(s.next_u64() % 3);
        const Eigen::Index r_in = n + 2 + static_cast<Eigen::Index>(s.next_u64() % 6);
        const Eigen::Index q =
            n + static_cast<Eigen::Index>(s.next_u64() % static_cast<std::uint64_t>(r_in - n));
        const Zonotope z = oracles::random_zonotope(s, n, r_in);
        MatrixXd Q(n, n);
        for (Eigen::Index i = 0; i < n * n; ++i) Q(i % n, i / n) = s.uniform();
        const WeightMatrix W(MatrixXd(Q * Q.transpose() + 0.3 * MatrixXd::Identity(n, n)));

        const Zonotope red = reduce(z, q, W);
        const int d = static_cast<int>(r_in - q);
        const double mu = compute_mu(W.lambda_min(), W.lambda_max(), d, static_cast<int>(n));
        const double bound = (1.0 + mu / static_cast<double>(d + q)) * weighted_norm_sq(z, W);
        if (weighted_norm_sq(red, W) > bound * (1 + 1e-12)) {
            detail = "loss bound violated at instance " + std::to_string(t);
            return false;
        }
        for (int pt = 0; pt < 1000; ++pt) {
            if (!contains_point(red, oracles::sample_point(z, s), 1e-9)) {
                detail = "containment violated at instance " + std::to_string(t);
                return false;
            }
        }
    }
    detail = "1000 reductions x 1000 sampled points";
    return true;
}

// ---- 8. stability: contraction < 1 at the preset order, tails below bound ----
bool crit8(std::string& detail) {
    const ScenarioConfig cfg = tracking_preset(1.0);
    const WeightMatrix W = WeightMatrix::identity(4);
    const PlantModel plant = PlantModel::time_invariant(cfg.A, cfg.B, cfg.initial());

    std::vector<StabilityReport> reports;
    for (std::size_t i = 0; i < cfg.sensors.size(); ++i) {
        const SensorModel sm = SensorModel::time_invariant(static_cast<int>(i),
                                                           cfg.sensors[i].C, cfg.sensors[i].D);
        const MatrixXd K = steady_state_gain(plant, sm, W, cfg.stability_order);
        reports.push_back(check_ultimate_boundedness(cfg.A, cfg.B, cfg.sensors[i].C,
                                                     cfg.sensors[i].D, K, W,
                                                     cfg.stability_order, static_cast<int>(i)));
        if (!reports.back().bounded) {
            detail = "checker reports contraction >= 1 for sensor " + std::to_string(i);
            return false;
        }
    }

    double worst_tail = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        for (std::size_t i = 0; i < cfg.sensors.size(); ++i) {
            const SensorModel sm = SensorModel::time_invariant(
                static_cast<int>(i), cfg.sensors[i].C, cfg.sensors[i].D);
            NoiseStream truth(seed, "crit8-truth");
            NoiseStream meas(seed, "crit8-meas-" + std::to_string(i));
            VectorXd x = cfg.R0 * truth.uniform_vec(4);
            LocalEstimate est{static_cast<int>(i), 0, cfg.initial()};
            for (int k = 1; k <= 500; ++k) {
                x = cfg.A * x + cfg.B * truth.uniform_vec(2);
                const VectorXd y = cfg.sensors[i].C * x + cfg.sensors[i].D * meas.uniform_vec(2);
                est = step(est, plant, sm, y, W, cfg.stability_order);
                if (k > 400) {
                    const double norm = weighted_norm_sq(est.set, W);
                    worst_tail = std::max(worst_tail, norm);
                    if (norm > reports[i].ultimate_bound) {
                        detail = "tail " + std::to_string(norm) + " above bound " +
                                 std::to_string(reports[i].ultimate_bound);
                        return false;
                    }
                }
            }
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "contraction %.4f, bound %.1f, worst simulated tail %.2f",
                  reports[0].contraction, reports[0].ultimate_bound, worst_tail);
    detail = buf;
    return true;
}

// ---- 9. byte-identical CSV for identical config + seed ----
bool crit9(std::string& detail) {
    ScenarioConfig cfg = tracking_preset(1.0);
    cfg.horizon = 50;
    cfg.seed = 21;
    const std::string a = to_csv(cfg, run_scenario(cfg));
    const std::string b = to_csv(cfg, run_scenario(cfg));

    auto strip = [](const std::string& csv) {
        std::istringstream in(csv);
        std::ostringstream out;
        std::string line;
        std::vector<bool> keep;
        while (std::getline(in, line)) {
            if (line.rfind('#', 0) == 0) { out << line << "\n"; continue; }
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (keep.empty())
                for (const auto& c : cells) keep.push_back(c.find("wall_ms") == std::string::npos);
            bool first = true;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (!keep[i]) continue;
                out << (first ? "" : ",") << cells[i];
                first = false;
            }
            out << "\n";
        }
        return out.str();
    };
    if (strip(a) != strip(b)) { detail = "runs differ"; return false; }
    detail = "identical modulo wall-time columns (" + std::to_string(a.size()) + " bytes)";
    return true;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "state inclusion (20 seeds x 200 steps, <= 2 min)", crit1},
        {2, "performance superiority (simulated steps + 1000 instances)", crit2},
        {3, "analytical optimum equivalence (200 instances, <= 5 min)", crit3},
        {4, "nesting of the improved estimate (fixture + 500 instances)", crit4},
        {5, "tracking mean orderings (20 seeds)", crit5},
        {6, "timing trends (volume_opt growth, sequential vs batch)", crit6},
        {7, "reduction operator (1000 instances)", crit7},
        {8, "stability margin and simulated tails (10 seeds)", crit8},
        {9, "byte-identical reruns", crit9},
    };

    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    bool all_ok = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.id != only) continue;
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%d] %-58s %s%s%s\n", c.id, c.name, ok ? "PASS" : "FAIL",
                    detail.empty() ? "" : "  -- ", detail.c_str());
        std::fflush(stdout);
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
