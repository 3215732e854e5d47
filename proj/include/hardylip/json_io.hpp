#pragma once

#include <string>

#include <json.hpp>

#include "hardylip/certificates.hpp"
#include "hardylip/conformal.hpp"
#include "hardylip/geometry.hpp"
#include "hardylip/quadrature.hpp"

namespace hardylip {

using Json = nlohmann::ordered_json;

// Graph: {"breakpoints": [[u,a],...], "tail_slope_left": s,
//         "tail_slope_right": s, "M": m}
Json graph_to_json(const LipschitzGraph& g);
LipschitzGraph graph_from_json(const Json& j);

// Quadrature: {"R":..., "rel_tol":..., "abs_tol":..., "max_panels":..., "tail_k":...}
Json spec_to_json(const QuadratureSpec& s);
QuadratureSpec spec_from_json(const Json& j);

// Map: {"gamma":..., "prevertices":[...], "exponents":[...],
//       "base_point":[x,y], "base_value":[u,v], "scale":..., "M":...}
Json map_to_json(const SchwarzChristoffelMap& m);
SchwarzChristoffelMap map_from_json(const Json& j);

// Certificate record: {"bound_name","regime","lhs","rhs","constant","pass","sample":{...}}
Json certificate_to_json(const Certificate& c);

Json load_json_file(const std::string& path);
void save_json_file(const Json& j, const std::string& path);

// Named built-in graphs ("flat", "wedge", "wedge05", "wedge2", "zigzag",
// "wgraph") or a path to a graph JSON file.
LipschitzGraph load_graph(const std::string& name_or_path);

}  // namespace hardylip
