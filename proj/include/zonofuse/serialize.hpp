#ifndef ZONOFUSE_SERIALIZE_HPP_
#define ZONOFUSE_SERIALIZE_HPP_

/**
 * @file serialize.hpp
 * @brief JSON records for zonotopes, polytope views, fusion results and
 *        stability reports, plus OFF output for external polytope viewers.
 *
 * Zonotopes serialize as {dim, order, center, generators} with generators
 * row-major; doubles round-trip exactly through their decimal repr.
 */

#include <json.hpp>
#include <string>
#include <vector>

#include "zonofuse/estimator.hpp"
#include "zonofuse/fusion.hpp"
#include "zonofuse/geometry.hpp"
#include "zonofuse/stability.hpp"
#include "zonofuse/zonotope.hpp"

namespace zonofuse {

nlohmann::json to_json(const Zonotope& z);
Zonotope zonotope_from_json(const nlohmann::json& j);

/// Timestamped estimate record {sensor_id, k, zonotope}.
nlohmann::json to_json(const LocalEstimate& e);
LocalEstimate estimate_from_json(const nlohmann::json& j);

nlohmann::json to_json(const VertexSet& v);
nlohmann::json to_json(const HalfspaceRep& h);
nlohmann::json to_json(const FusionResult& r);
nlohmann::json to_json(const StabilityReport& r);

std::vector<Zonotope> zonotopes_from_json_file(const std::string& path);

/// OFF polytope file from a vertex set; 2-D sets become a single polygon
/// face in angular order, higher dimensions a vertex cloud.
void write_off(const std::string& path, const VertexSet& verts);

} // namespace zonofuse

#endif
