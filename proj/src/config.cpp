#include "zonofuse/config.hpp"

#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "zonofuse/serialize.hpp"

using nlohmann::json;

namespace zonofuse {

ScenarioConfig tracking_preset(double T) {
    ScenarioConfig cfg;
    cfg.name = "tracking";
    cfg.period = T;
    cfg.A = Eigen::MatrixXd{{1, T, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, T}, {0, 0, 0, 1}};
    cfg.B = Eigen::MatrixXd{{T * T / 2, 0}, {T, 0}, {0, T * T / 2}, {0, T}};
    // Sensor 1 observes (d_x, d_y) with precision (2, 1); sensor 2 observes
    // (d_y, d_x) with precision (2, 1), i.e. the complementary axis.
    cfg.sensors.push_back(SensorConfig{Eigen::MatrixXd{{1, 0, 0, 0}, {0, 0, 1, 0}},
                                       Eigen::MatrixXd{{2, 0}, {0, 1}}});
    cfg.sensors.push_back(SensorConfig{Eigen::MatrixXd{{0, 0, 1, 0}, {1, 0, 0, 0}},
                                       Eigen::MatrixXd{{2, 0}, {0, 1}}});
    cfg.c0 = Eigen::VectorXd::Zero(4);
    cfg.R0 = Eigen::MatrixXd::Identity(4, 4);
    cfg.horizon = 200;
    cfg.order = 5;
    cfg.stability_order = 120;
    cfg.seed = 1;
    return cfg;
}

std::vector<Zonotope> zono2d_fixture() {
    std::vector<Zonotope> zs;
    zs.emplace_back(Eigen::VectorXd{{0.15, 0.10}},
                    Eigen::MatrixXd{{0.90, 0.35, -0.25, 0.30}, {0.10, 0.65, 0.50, -0.20}});
    zs.emplace_back(Eigen::VectorXd{{-0.20, 0.05}},
                    Eigen::MatrixXd{{1.05, -0.30, 0.20, 0.40}, {0.15, 0.75, -0.45, 0.30}});
    zs.emplace_back(Eigen::VectorXd{{0.10, -0.15}},
                    Eigen::MatrixXd{{0.85, 0.50, 0.30, -0.10}, {-0.30, 0.60, 0.45, 0.25}});
    return zs;
}

ScenarioConfig zono2d_preset() {
    ScenarioConfig cfg;
    cfg.name = "zono2d";
    cfg.A = Eigen::MatrixXd::Identity(2, 2);
    cfg.B = Eigen::MatrixXd(2, 0);
    cfg.c0 = Eigen::VectorXd::Zero(2);
    cfg.R0 = Eigen::MatrixXd::Identity(2, 2);
    cfg.horizon = 1;
    cfg.order = 4;
    cfg.stability_order = 8;
    cfg.fixture = zono2d_fixture();
    cfg.methods = {FusionMethod::batch_opt, FusionMethod::improved, FusionMethod::sequential,
                   FusionMethod::volume_opt, FusionMethod::box};
    return cfg;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    const auto b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

Eigen::MatrixXd matrix_value(const json& v) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(v.size()),
                      v.empty() ? 0 : static_cast<Eigen::Index>(v.at(0).size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = v.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j)).get<double>();
    return m;
}

Eigen::VectorXd vector_value(const json& v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = v.at(static_cast<std::size_t>(i)).get<double>();
    return x;
}

} // namespace

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path);

    std::string section;
    std::map<std::string, std::string> flat;
    std::map<std::string, std::map<std::string, std::string>> tables;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError(path + ":" + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (section.empty()) flat[key] = val;
        else tables[section][key] = val;
    }

    ScenarioConfig cfg;
    if (auto it = flat.find("preset"); it != flat.end()) {
        const double T = flat.count("period") ? std::stod(flat["period"]) : 1.0;
        if (it->second == "tracking") cfg = tracking_preset(T);
        else if (it->second == "zono2d") cfg = zono2d_preset();
        else throw ParseError("unknown preset: " + it->second);
    }

    auto get = [&](const char* key) -> const std::string* {
        auto it = flat.find(key);
        return it == flat.end() ? nullptr : &it->second;
    };
    if (auto* v = get("horizon")) cfg.horizon = std::stoi(*v);
    if (auto* v = get("seed")) cfg.seed = std::stoull(*v);
    if (auto* v = get("order")) cfg.order = std::stol(*v);
    if (auto* v = get("stability_order")) cfg.stability_order = std::stol(*v);
    if (auto* v = get("report_order")) cfg.report_order = std::stol(*v);
    if (auto* v = get("noise")) cfg.adversarial_noise = (*v == "adversarial");
    if (auto* v = get("weight"); v && *v != "identity") cfg.weight = matrix_value(json::parse(*v));
    if (auto* v = get("fixture")) cfg.fixture = zonotopes_from_json_file(*v);
    if (auto* v = get("arrival")) {
        cfg.arrival.clear();
        if (*v != "random") {
            std::stringstream ss(*v);
            std::string tok;
            while (std::getline(ss, tok, ','))
                cfg.arrival.push_back(std::stoi(trim(tok)) - 1);  // 1-based in files
        }
    }
    if (auto* v = get("methods")) {
        cfg.methods.clear();
        std::stringstream ss(*v);
        std::string tok;
        while (std::getline(ss, tok, ','))
            cfg.methods.push_back(fusion_method_from_string(trim(tok)));
    }

    if (auto it = tables.find("plant"); it != tables.end()) {
        auto& t = it->second;
        if (t.count("A")) cfg.A = matrix_value(json::parse(t["A"]));
        if (t.count("B")) cfg.B = matrix_value(json::parse(t["B"]));
        if (t.count("c0")) cfg.c0 = vector_value(json::parse(t["c0"]));
        if (t.count("R0")) cfg.R0 = matrix_value(json::parse(t["R0"]));
        cfg.name = flat.count("preset") ? cfg.name : "custom";
    }
    for (int i = 1;; ++i) {
        const auto it = tables.find("sensor." + std::to_string(i));
        if (it == tables.end()) break;
        if (i == 1 && !tables.empty()) {
            // explicit sensor tables replace the preset's sensors
            bool any = tables.count("sensor.1") > 0;
            if (any) cfg.sensors.clear();
        }
        SensorConfig s;
        s.C = matrix_value(json::parse(it->second.at("C")));
        s.D = matrix_value(json::parse(it->second.at("D")));
        cfg.sensors.push_back(std::move(s));
    }

    if (cfg.A.size() == 0)
        throw ParseError("config: no plant (set preset or a [plant] table)");
    if (cfg.c0.size() == 0) {
        cfg.c0 = Eigen::VectorXd::Zero(cfg.A.rows());
        cfg.R0 = Eigen::MatrixXd::Identity(cfg.A.rows(), cfg.A.rows());
    }
    return cfg;
}

} // namespace zonofuse
