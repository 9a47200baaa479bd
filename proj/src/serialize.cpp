#include "zonofuse/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

using nlohmann::json;

namespace zonofuse {

namespace {

json matrix_rows(const Eigen::MatrixXd& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_rows(const json& rows, Eigen::Index expect_rows = -1) {
    if (!rows.is_array()) throw ParseError("expected a matrix (array of rows)");
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    if (r == 0) {
        Eigen::MatrixXd m(expect_rows >= 0 ? expect_rows : 0, 0);
        return m;
    }
    const Eigen::Index c = static_cast<Eigen::Index>(rows.at(0).size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        const auto& row = rows.at(static_cast<std::size_t>(i));
        if (static_cast<Eigen::Index>(row.size()) != c)
            throw ParseError("ragged matrix rows");
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
    return m;
}

Eigen::VectorXd vector_from(const json& arr) {
    if (!arr.is_array()) throw ParseError("expected a vector (array)");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = arr.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

} // namespace

json to_json(const Zonotope& z) {
    json c = json::array();
    for (Eigen::Index i = 0; i < z.dim(); ++i) c.push_back(z.center()(i));
    return json{{"dim", z.dim()},
                {"order", z.order()},
                {"center", std::move(c)},
                {"generators", matrix_rows(z.generators())}};
}

Zonotope zonotope_from_json(const json& j) {
    const Eigen::VectorXd c = vector_from(j.at("center"));
    Eigen::MatrixXd R = matrix_from_rows(j.at("generators"), c.size());
    if (R.rows() == 0 && c.size() > 0) R.resize(c.size(), 0);
    if (j.contains("dim") && j.at("dim").get<Eigen::Index>() != c.size())
        throw ParseError("zonotope record: dim does not match center length");
    if (j.contains("order") && j.at("order").get<Eigen::Index>() != R.cols())
        throw ParseError("zonotope record: order does not match generator columns");
    return Zonotope(c, std::move(R));
}

json to_json(const LocalEstimate& e) {
    return json{{"sensor_id", e.sensor_id}, {"k", e.step}, {"zonotope", to_json(e.set)}};
}

LocalEstimate estimate_from_json(const json& j) {
    return LocalEstimate{j.at("sensor_id").get<int>(), j.at("k").get<int>(),
                         zonotope_from_json(j.at("zonotope"))};
}

json to_json(const VertexSet& v) {
    return json{{"dim", v.dim()}, {"count", v.count()}, {"vertices", matrix_rows(v.vertices)}};
}

json to_json(const HalfspaceRep& h) {
    json bp = json::array(), bm = json::array();
    for (Eigen::Index i = 0; i < h.pair_count(); ++i) {
        bp.push_back(h.b_plus()(i));
        bm.push_back(h.b_minus()(i));
    }
    return json{{"dim", h.dim()},
                {"pairs", h.pair_count()},
                {"normals", matrix_rows(h.normals())},
                {"b_plus", std::move(bp)},
                {"b_minus", std::move(bm)}};
}

json to_json(const FusionResult& r) {
    json params = json::array();
    for (const auto& M : r.params) params.push_back(matrix_rows(M));
    return json{{"method", to_string(r.method)},
                {"fused", to_json(r.fused)},
                {"params", std::move(params)},
                {"metrics",
                 {{"weighted_norm_sq", r.weighted_norm_sq},
                  {"volume", r.volume},
                  {"generator_order", r.generator_order},
                  {"wall_time_ms", r.wall_time_ms}}},
                {"converged", r.converged},
                {"balance_splits", r.balance_splits}};
}

json to_json(const StabilityReport& r) {
    return json{{"sensor_id", r.sensor_id},
                {"gamma", r.gamma},
                {"mu", r.mu},
                {"d", r.d},
                {"order", r.order},
                {"contraction", r.contraction},
                {"phi", r.phi},
                {"ultimate_bound", std::isfinite(r.ultimate_bound)
                                       ? json(r.ultimate_bound)
                                       : json("inf")},
                {"min_bounded_order", r.min_bounded_order},
                {"bounded", r.bounded}};
}

std::vector<Zonotope> zonotopes_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    in >> j;
    const json& arr = j.is_array() ? j : j.at("zonotopes");
    std::vector<Zonotope> out;
    for (const auto& item : arr) out.push_back(zonotope_from_json(item));
    return out;
}

void write_off(const std::string& path, const VertexSet& verts) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    const Eigen::Index k = verts.count();
    out << "OFF\n";
    if (verts.dim() == 2 && k >= 3) {
        // ring order about the centroid
        const Eigen::Vector2d c = verts.vertices.rowwise().mean();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return std::atan2(verts.vertices(1, a) - c(1), verts.vertices(0, a) - c(0)) <
                   std::atan2(verts.vertices(1, b) - c(1), verts.vertices(0, b) - c(0));
        });
        out << k << " 1 " << k << "\n";
        for (Eigen::Index j : order)
            out << verts.vertices(0, j) << " " << verts.vertices(1, j) << " 0\n";
        out << k;
        for (Eigen::Index t = 0; t < k; ++t) out << " " << t;
        out << "\n";
        return;
    }
    out << k << " 0 0\n";
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < verts.dim(); ++i)
            out << verts.vertices(i, j) << (i + 1 < verts.dim() ? " " : "");
        for (Eigen::Index i = verts.dim(); i < 3; ++i) out << " 0";
        out << "\n";
    }
}

} // namespace zonofuse
