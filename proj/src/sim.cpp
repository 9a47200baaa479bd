#include "zonofuse/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <json.hpp>
#include <numeric>
#include <sstream>

#include "zonofuse/rng.hpp"
#include "zonofuse/serialize.hpp"

namespace zonofuse {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool needs_geometry(const ScenarioConfig& cfg) {
    for (FusionMethod m : cfg.methods)
        if (m == FusionMethod::improved || m == FusionMethod::sequential ||
            m == FusionMethod::box)
            return true;
    return false;
}

std::vector<int> draw_arrival(NoiseStream& stream, int L) {
    std::vector<int> order(static_cast<std::size_t>(L));
    std::iota(order.begin(), order.end(), 0);
    for (int i = L - 1; i > 0; --i) {
        const int j = static_cast<int>(stream.next_u64() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    }
    return order;
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, Exec exec) {
    if (cfg.horizon < 1) throw DimensionError("run_scenario: horizon must be >= 1");
    if (cfg.sensors.size() < 2) throw DimensionError("run_scenario: at least two sensors");
    const Eigen::Index n = cfg.dim();
    if (cfg.order < n) throw InvalidOrderError("run_scenario: order below state dimension");

    const WeightMatrix W = cfg.weight_matrix();
    const PlantModel plant = PlantModel::time_invariant(cfg.A, cfg.B, cfg.initial());
    std::vector<SensorModel> sensors;
    for (std::size_t i = 0; i < cfg.sensors.size(); ++i)
        sensors.push_back(SensorModel::time_invariant(static_cast<int>(i), cfg.sensors[i].C,
                                                      cfg.sensors[i].D));
    const int L = static_cast<int>(sensors.size());

    NoiseStream init_stream(cfg.seed, "truth-init");
    NoiseStream truth_stream(cfg.seed, "truth-noise");
    NoiseStream arrival_stream(cfg.seed, "arrival-order");
    std::vector<NoiseStream> sensor_streams;
    for (int i = 0; i < L; ++i)
        sensor_streams.emplace_back(cfg.seed, "sensor-noise-" + std::to_string(i));

    Eigen::VectorXd x = cfg.c0 + cfg.R0 * init_stream.uniform_vec(cfg.R0.cols());
    std::vector<LocalEstimate> est;
    for (int i = 0; i < L; ++i) est.push_back(LocalEstimate{i, 0, cfg.initial()});

    ScenarioResult out;
    const bool geometry = needs_geometry(cfg);

    for (int k = 1; k <= cfg.horizon; ++k) {
        const Eigen::VectorXd w = cfg.adversarial_noise
                                      ? truth_stream.sign_vec(cfg.B.cols())
                                      : truth_stream.uniform_vec(cfg.B.cols());
        x = cfg.A * x + cfg.B * w;

        StepRecord rec;
        rec.k = k;
        rec.truth = x;

        double min_local = std::numeric_limits<double>::infinity();
        for (int i = 0; i < L; ++i) {
            const auto& sc = cfg.sensors[static_cast<std::size_t>(i)];
            auto& stream = sensor_streams[static_cast<std::size_t>(i)];
            const Eigen::VectorXd v = cfg.adversarial_noise ? stream.sign_vec(sc.D.cols())
                                                            : stream.uniform_vec(sc.D.cols());
            const Eigen::VectorXd y = sc.C * x + sc.D * v;
            est[static_cast<std::size_t>(i)] =
                step(est[static_cast<std::size_t>(i)], plant, sensors[static_cast<std::size_t>(i)], y, W, cfg.order);

            SensorStepMetrics sm;
            sm.norm2 = weighted_norm_sq(est[static_cast<std::size_t>(i)].set, W);
            sm.volume = volume(est[static_cast<std::size_t>(i)].set, exec);
            sm.inclusion = contains_point(est[static_cast<std::size_t>(i)].set, x, tol::membership, exec);
            min_local = std::min(min_local, sm.norm2);
            rec.sensors.push_back(sm);
            if (!sm.inclusion) {
                out.violation = "step " + std::to_string(k) + ": truth left local estimate " +
                                std::to_string(i);
                out.exit_code = 2;
            }
        }

        FusionProblem problem;
        problem.W = W;
        for (int i = 0; i < L; ++i) problem.estimates.push_back(est[static_cast<std::size_t>(i)]);
        problem.arrival = cfg.arrival.empty() ? draw_arrival(arrival_stream, L) : cfg.arrival;

        VertexSet overts;
        if (geometry) {
            std::vector<Zonotope> zs;
            for (const auto& e : problem.estimates) zs.push_back(e.set);
            overts = intersection_vertices(zs, exec);
        }

        for (FusionMethod m : cfg.methods) {
            const auto t0 = Clock::now();
            FusionResult fr;
            switch (m) {
                case FusionMethod::batch_opt: fr = fuse_batch_optimal(problem, exec); break;
                case FusionMethod::improved: fr = fuse_improved(problem, &overts, exec); break;
                case FusionMethod::sequential: fr = fuse_sequential(problem, &overts, exec); break;
                case FusionMethod::volume_opt: fr = fuse_volume_optimal(problem, exec); break;
                case FusionMethod::box: fr = box_baseline(problem, &overts, exec); break;
            }
            MethodStepMetrics mm;
            mm.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

            Zonotope reported = cfg.report_order >= n && cfg.report_order < fr.fused.order()
                                    ? reduce(fr.fused, cfg.report_order, W)
                                    : fr.fused;
            mm.norm2 = weighted_norm_sq(reported, W);
            mm.volume = cfg.report_order ? volume(reported, exec) : fr.volume;
            mm.inclusion = contains_point(reported, x, tol::membership, exec);
            mm.superiority = mm.norm2 <= min_local + tol::stationarity * std::max(1.0, min_local);
            if (fr.prefusion.has_value()) {
                mm.nesting = true;
                const HalfspaceRep rep = halfspace_rep(*fr.prefusion, exec);
                for (Eigen::Index q = 0; q < rep.pair_count() && mm.nesting; ++q) {
                    const Eigen::VectorXd h = rep.normals().row(q).transpose();
                    const double s_new = support(reported, h);
                    const double s_old = support(*fr.prefusion, h);
                    mm.nesting = s_new <= s_old + tol::feas * (1.0 + std::abs(s_old));
                }
            }
            rec.methods.push_back(mm);
            if (!mm.inclusion && out.exit_code == 0) {
                out.violation = "step " + std::to_string(k) + ": truth left fused estimate " +
                                to_string(m);
                out.exit_code = 2;
            }
        }

        out.steps.push_back(std::move(rec));
        if (out.exit_code != 0) break;
    }
    return out;
}

std::string to_csv(const ScenarioConfig& cfg, const ScenarioResult& res) {
    std::ostringstream os;
    os << "# zonofuse csv schema v1\n";
    os << "# scenario=" << cfg.name << " seed=" << cfg.seed << " horizon=" << cfg.horizon
       << " order=" << cfg.order << " dim=" << cfg.dim() << "\n";
    os << "k";
    for (Eigen::Index i = 0; i < cfg.dim(); ++i) os << ",x_" << i;
    for (std::size_t i = 0; i < cfg.sensors.size(); ++i)
        os << ",s" << i << "_norm2,s" << i << "_volume,s" << i << "_incl";
    for (FusionMethod m : cfg.methods) {
        const std::string t = to_string(m);
        os << "," << t << "_norm2," << t << "_volume," << t << "_incl," << t << "_sup," << t
           << "_nest," << t << "_wall_ms";
    }
    os << "\n";
    for (const auto& rec : res.steps) {
        os << rec.k;
        for (Eigen::Index i = 0; i < rec.truth.size(); ++i) os << "," << fmt(rec.truth(i));
        for (const auto& s : rec.sensors)
            os << "," << fmt(s.norm2) << "," << fmt(s.volume) << "," << (s.inclusion ? 1 : 0);
        for (const auto& m : rec.methods)
            os << "," << fmt(m.norm2) << "," << fmt(m.volume) << "," << (m.inclusion ? 1 : 0)
               << "," << (m.superiority ? 1 : 0) << "," << (m.nesting ? 1 : 0) << ","
               << fmt(m.wall_ms);
        os << "\n";
    }
    if (res.exit_code != 0) os << "# violation: " << res.violation << "\n";
    return os.str();
}

std::string to_json_string(const ScenarioConfig& cfg, const ScenarioResult& res) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& rec : res.steps) {
        nlohmann::json truth = nlohmann::json::array();
        for (Eigen::Index i = 0; i < rec.truth.size(); ++i) truth.push_back(rec.truth(i));
        nlohmann::json sensors = nlohmann::json::array();
        for (const auto& s : rec.sensors)
            sensors.push_back({{"norm2", s.norm2}, {"volume", s.volume}, {"incl", s.inclusion}});
        nlohmann::json methods = nlohmann::json::array();
        for (std::size_t i = 0; i < rec.methods.size(); ++i) {
            const auto& m = rec.methods[i];
            methods.push_back({{"method", to_string(cfg.methods[i])},
                               {"norm2", m.norm2},
                               {"volume", m.volume},
                               {"incl", m.inclusion},
                               {"sup", m.superiority},
                               {"nest", m.nesting},
                               {"wall_ms", m.wall_ms}});
        }
        steps.push_back({{"k", rec.k},
                         {"truth", std::move(truth)},
                         {"sensors", std::move(sensors)},
                         {"methods", std::move(methods)}});
    }
    const nlohmann::json j{{"scenario", cfg.name},
                           {"seed", cfg.seed},
                           {"exit_code", res.exit_code},
                           {"steps", std::move(steps)}};
    return j.dump(1);
}

std::string to_gnuplot_dat(const ScenarioConfig& cfg, const ScenarioResult& res) {
    std::ostringstream os;
    for (std::size_t i = 0; i < cfg.sensors.size(); ++i) {
        os << "# local " << i << " (k norm2 volume)\n";
        for (const auto& rec : res.steps)
            os << rec.k << " " << fmt(rec.sensors[i].norm2) << " "
               << fmt(rec.sensors[i].volume) << "\n";
        os << "\n\n";
    }
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        os << "# " << to_string(cfg.methods[m]) << " (k norm2 volume)\n";
        for (const auto& rec : res.steps)
            os << rec.k << " " << fmt(rec.methods[m].norm2) << " "
               << fmt(rec.methods[m].volume) << "\n";
        os << "\n\n";
    }
    return os.str();
}

namespace {

std::uint64_t checksum_zonotope(const Zonotope& z) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto fold = [&h](double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        for (int t = 0; t < 8; ++t) {
            h ^= (bits >> (8 * t)) & 0xFF;
            h *= 0x100000001B3ull;
        }
    };
    for (Eigen::Index i = 0; i < z.dim(); ++i) fold(z.center()(i));
    for (Eigen::Index j = 0; j < z.order(); ++j)
        for (Eigen::Index i = 0; i < z.dim(); ++i) fold(z.generators()(i, j));
    return h;
}

std::vector<Zonotope> random_planar_instance(std::uint64_t seed, int L, Eigen::Index r) {
    NoiseStream stream(seed, "bench-instance");
    const Eigen::Vector2d anchor(stream.uniform(), stream.uniform());
    std::vector<Zonotope> zs;
    for (int i = 0; i < L; ++i) {
        Eigen::MatrixXd R(2, r);
        for (;;) {
            for (Eigen::Index c = 0; c < r; ++c) {
                R(0, c) = stream.uniform();
                R(1, c) = stream.uniform();
            }
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(R);
            if (svd.singularValues()(1) > 0.1 * svd.singularValues()(0)) break;
        }
        Eigen::VectorXd u(r);
        for (Eigen::Index c = 0; c < r; ++c) u(c) = 0.5 * stream.uniform();
        zs.emplace_back(anchor + R * u, R);
    }
    return zs;
}

template <typename F>
double time_call_ms(F&& fn) {
    const auto t0 = Clock::now();
    fn();
    double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (ms < 0.05) {
        // too fast for the clock: amortize over a fixed inner loop
        const int inner = 256;
        const auto t1 = Clock::now();
        for (int i = 0; i < inner; ++i) fn();
        ms = std::chrono::duration<double, std::milli>(Clock::now() - t1).count() / inner;
    }
    return ms;
}

} // namespace

std::vector<BenchRow> bench_fusion(const std::vector<Eigen::Index>& generator_counts,
                                   const std::vector<int>& sensor_counts, int repetitions,
                                   std::uint64_t seed, const std::vector<std::string>& methods) {
    std::vector<BenchRow> rows;
    std::vector<int> Ls = sensor_counts;
    std::sort(Ls.begin(), Ls.end());
    std::vector<Eigen::Index> gens = generator_counts;
    std::sort(gens.begin(), gens.end());

    for (int L : Ls) {
        for (Eigen::Index r : gens) {
            const std::vector<Zonotope> zs =
                random_planar_instance(seed + static_cast<std::uint64_t>(L) * 1000 +
                                           static_cast<std::uint64_t>(r),
                                       L, r);
            const FusionProblem p = make_problem(zs, WeightMatrix::identity(2));
            for (const std::string& method : methods) {
                std::vector<double> times;
                std::uint64_t checksum = 0;
                for (int rep = 0; rep < repetitions; ++rep) {
                    Zonotope fused;
                    const double ms = time_call_ms([&] {
                        if (method == "batch_opt") fused = fuse_batch_optimal(p, Exec::serial).fused;
                        else if (method == "improved") fused = fuse_improved(p, nullptr, Exec::serial).fused;
                        else if (method == "sequential_stages") {
                            Zonotope acc = p.estimates[0].set;
                            for (std::size_t i = 1; i < p.estimates.size(); ++i)
                                acc = fuse_sequential_stage(acc, p.estimates[i].set, p.W).first;
                            fused = std::move(acc);
                        } else if (method == "volume_opt") {
                            fused = fuse_volume_optimal(p, Exec::serial).fused;
                        } else {
                            throw ParseError("bench_fusion: unknown method " + method);
                        }
                    });
                    times.push_back(ms);
                    checksum = checksum_zonotope(fused);
                }
                std::sort(times.begin(), times.end());
                BenchRow row;
                row.sensors = L;
                row.generators = r;
                row.method = method;
                row.median_ms = times[times.size() / 2];
                row.checksum = checksum;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream os;
    os << "# zonofuse bench schema v1\n";
    os << "sensors,generators,method,median_ms,checksum\n";
    for (const auto& r : rows)
        os << r.sensors << "," << r.generators << "," << r.method << "," << fmt(r.median_ms)
           << "," << r.checksum << "\n";
    return os.str();
}

} // namespace zonofuse
