// zonofuse command line: scenario runner, fusion benchmarks, one-shot fusion
// and stability checks.
//
// Exit codes: 0 ok, 1 usage/config error, 2 certified invariant violation.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "zonofuse/config.hpp"
#include "zonofuse/serialize.hpp"
#include "zonofuse/sim.hpp"
#include "zonofuse/stability.hpp"

using namespace zonofuse;

namespace {

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file " + path);
    out << content;
}

ScenarioConfig resolve_config(const std::string& config_path, const std::string& preset,
                              double period) {
    if (!config_path.empty()) return load_config(config_path);
    if (preset == "tracking") return tracking_preset(period);
    if (preset == "zono2d") return zono2d_preset();
    throw ParseError("unknown preset: " + preset);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zonofuse: distributed zonotopic fusion estimation"};
    app.require_subcommand(1);

    // ---- run ----
    std::string run_config, run_preset = "tracking", run_out, run_format = "csv", run_methods;
    std::uint64_t run_seed = 0;
    int run_horizon = 0;
    double run_period = 1.0;
    auto* run = app.add_subcommand("run", "simulate a scenario and fuse every step");
    run->add_option("--config", run_config, "config file (key = value)");
    run->add_option("--preset", run_preset, "built-in preset when no config is given");
    run->add_option("--seed", run_seed, "override the scenario seed");
    run->add_option("--horizon", run_horizon, "override the horizon");
    run->add_option("--period", run_period, "sampling period for the tracking preset");
    run->add_option("--methods", run_methods, "comma list of fusion methods");
    run->add_option("--out", run_out, "output path (default stdout)");
    run->add_option("--format", run_format, "csv, json or dat")
        ->check(CLI::IsMember({"csv", "json", "dat"}));

    // ---- bench ----
    std::string bench_out, bench_methods = "batch_opt,improved,sequential_stages,volume_opt";
    std::string bench_gens = "4,8,16,32", bench_sensors = "3";
    int bench_reps = 5;
    std::uint64_t bench_seed = 7;
    auto* bench = app.add_subcommand("bench", "fusion timing table on random planar zonotopes");
    bench->add_option("--gens", bench_gens, "generator counts, comma list");
    bench->add_option("--sensors", bench_sensors, "sensor counts, comma list");
    bench->add_option("--reps", bench_reps, "repetitions per cell (median reported)");
    bench->add_option("--seed", bench_seed, "instance seed");
    bench->add_option("--methods", bench_methods, "methods to time");
    bench->add_option("--out", bench_out, "output path (default stdout)");

    // ---- fuse ----
    std::string fuse_inputs, fuse_method = "batch_opt", fuse_out, fuse_weight, fuse_off;
    auto* fuse = app.add_subcommand("fuse", "one-shot fusion of zonotopes from a JSON file");
    fuse->add_option("--inputs", fuse_inputs, "JSON file with a zonotope array")->required();
    fuse->add_option("--method", fuse_method, "fusion method");
    fuse->add_option("--weight", fuse_weight, "JSON file with the weight matrix W");
    fuse->add_option("--out", fuse_out, "output path (default stdout)");
    fuse->add_option("--debug-off", fuse_off, "write the fused vertex set as an OFF file");

    // ---- stability ----
    std::string stab_config, stab_preset = "tracking", stab_out;
    std::int64_t stab_order = 0;
    double stab_period = 1.0;
    auto* stab = app.add_subcommand("stability", "ultimate-boundedness check per sensor");
    stab->add_option("--config", stab_config, "config file");
    stab->add_option("--preset", stab_preset, "built-in preset when no config is given");
    stab->add_option("--order", stab_order, "override the stability check order");
    stab->add_option("--period", stab_period, "sampling period for the tracking preset");
    stab->add_option("--out", stab_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ScenarioConfig cfg = resolve_config(run_config, run_preset, run_period);
            if (run_seed) cfg.seed = run_seed;
            if (run_horizon) cfg.horizon = run_horizon;
            if (!run_methods.empty()) {
                cfg.methods.clear();
                std::stringstream ss(run_methods);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    cfg.methods.push_back(fusion_method_from_string(tok));
            }
            const ScenarioResult res = run_scenario(cfg);
            write_or_print(run_out, run_format == "csv"    ? to_csv(cfg, res)
                                    : run_format == "json" ? to_json_string(cfg, res)
                                                           : to_gnuplot_dat(cfg, res));
            if (res.exit_code != 0) {
                std::cerr << "invariant violation: " << res.violation << "\n";
                return res.exit_code;
            }
            return 0;
        }

        if (bench->parsed()) {
            auto parse_list = [](const std::string& s) {
                std::vector<long long> out;
                std::stringstream ss(s);
                std::string tok;
                while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
                return out;
            };
            std::vector<Eigen::Index> gens;
            for (long long g : parse_list(bench_gens)) gens.push_back(g);
            std::vector<int> sensors;
            for (long long l : parse_list(bench_sensors)) sensors.push_back(static_cast<int>(l));
            std::vector<std::string> methods;
            {
                std::stringstream ss(bench_methods);
                std::string tok;
                while (std::getline(ss, tok, ',')) methods.push_back(tok);
            }
            const auto rows = bench_fusion(gens, sensors, bench_reps, bench_seed, methods);
            write_or_print(bench_out, bench_csv(rows));
            return 0;
        }

        if (fuse->parsed()) {
            const std::vector<Zonotope> zs = zonotopes_from_json_file(fuse_inputs);
            WeightMatrix W = WeightMatrix::identity(zs.front().dim());
            if (!fuse_weight.empty()) {
                std::ifstream in(fuse_weight);
                nlohmann::json j;
                in >> j;
                Eigen::MatrixXd Wm(static_cast<Eigen::Index>(j.size()),
                                   static_cast<Eigen::Index>(j.at(0).size()));
                for (Eigen::Index i = 0; i < Wm.rows(); ++i)
                    for (Eigen::Index c = 0; c < Wm.cols(); ++c)
                        Wm(i, c) = j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)).get<double>();
                W = WeightMatrix(Wm);
            }
            const FusionProblem p = make_problem(zs, W);
            FusionResult r;
            switch (fusion_method_from_string(fuse_method)) {
                case FusionMethod::batch_opt: r = fuse_batch_optimal(p); break;
                case FusionMethod::improved: r = fuse_improved(p); break;
                case FusionMethod::sequential: r = fuse_sequential(p); break;
                case FusionMethod::volume_opt: r = fuse_volume_optimal(p); break;
                case FusionMethod::box: r = box_baseline(p); break;
            }
            write_or_print(fuse_out, to_json(r).dump(1) + "\n");
            if (!fuse_off.empty()) {
                const HalfspaceRep rep = halfspace_rep(compact(r.fused));
                write_off(fuse_off, vertex_enum(rep));
            }
            return 0;
        }

        if (stab->parsed()) {
            ScenarioConfig cfg = resolve_config(stab_config, stab_preset, stab_period);
            if (stab_order) cfg.stability_order = stab_order;
            const WeightMatrix W = cfg.weight_matrix();
            const PlantModel plant = PlantModel::time_invariant(cfg.A, cfg.B, cfg.initial());
            std::ostringstream os;
            nlohmann::json reports = nlohmann::json::array();
            os << "sensor  gamma      mu         contraction  phi        bound      r_min  verdict\n";
            for (std::size_t i = 0; i < cfg.sensors.size(); ++i) {
                const auto& sc = cfg.sensors[i];
                const SensorModel sm = SensorModel::time_invariant(static_cast<int>(i), sc.C, sc.D);
                const Eigen::MatrixXd K = steady_state_gain(plant, sm, W, cfg.stability_order);
                const StabilityReport rep = check_ultimate_boundedness(
                    cfg.A, cfg.B, sc.C, sc.D, K, W, cfg.stability_order, static_cast<int>(i));
                reports.push_back(to_json(rep));
                char line[256];
                std::snprintf(line, sizeof line, "%-7d %-10.4f %-10.1f %-12.4f %-10.4f %-10.4g %-6lld %s\n",
                              rep.sensor_id, rep.gamma, rep.mu, rep.contraction, rep.phi,
                              rep.ultimate_bound, static_cast<long long>(rep.min_bounded_order),
                              rep.bounded ? "bounded" : "unbounded");
                os << line;
            }
            write_or_print(stab_out, stab_out.empty() ? os.str() : reports.dump(1) + "\n");
            if (!stab_out.empty()) std::cout << os.str();
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
