#include "hardylip/json_io.hpp"

#include <fstream>

namespace hardylip {

Json graph_to_json(const LipschitzGraph& g) {
    Json j;
    j["breakpoints"] = Json::array();
    for (const auto& [u, a] : g.breakpoints) j["breakpoints"].push_back({u, a});
    j["tail_slope_left"] = g.tail_slope_left;
    j["tail_slope_right"] = g.tail_slope_right;
    j["M"] = g.lipschitz_M;
    return j;
}

LipschitzGraph graph_from_json(const Json& j) {
    LipschitzGraph g;
    try {
        for (const auto& bp : j.at("breakpoints"))
            g.breakpoints.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
        g.tail_slope_left = j.at("tail_slope_left").get<double>();
        g.tail_slope_right = j.at("tail_slope_right").get<double>();
        g.lipschitz_M = j.at("M").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Error::Kind::Io, std::string("graph json: ") + e.what());
    }
    g.validate();
    return g;
}

Json spec_to_json(const QuadratureSpec& s) {
    return Json{{"R", s.truncation_radius},
                {"rel_tol", s.rel_tol},
                {"abs_tol", s.abs_tol},
                {"max_panels", s.max_panels},
                {"tail_k", s.tail_decay_exponent}};
}

QuadratureSpec spec_from_json(const Json& j) {
    QuadratureSpec s;
    try {
        if (j.contains("R")) s.truncation_radius = j.at("R").get<double>();
        if (j.contains("rel_tol")) s.rel_tol = j.at("rel_tol").get<double>();
        if (j.contains("abs_tol")) s.abs_tol = j.at("abs_tol").get<double>();
        if (j.contains("max_panels")) s.max_panels = j.at("max_panels").get<int>();
        if (j.contains("tail_k")) s.tail_decay_exponent = j.at("tail_k").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Error::Kind::Io, std::string("quadrature json: ") + e.what());
    }
    s.validate();
    return s;
}

Json map_to_json(const SchwarzChristoffelMap& m) {
    Json j;
    j["gamma"] = m.rotation_gamma;
    j["prevertices"] = m.prevertices;
    j["exponents"] = m.exponents;
    j["base_point"] = {m.base_point.real(), m.base_point.imag()};
    j["base_value"] = {m.base_value.real(), m.base_value.imag()};
    j["scale"] = m.scale;
    j["M"] = m.lipschitz_M;
    return j;
}

SchwarzChristoffelMap map_from_json(const Json& j) {
    SchwarzChristoffelMap m;
    try {
        m.rotation_gamma = j.at("gamma").get<double>();
        m.prevertices = j.at("prevertices").get<std::vector<double>>();
        m.exponents = j.at("exponents").get<std::vector<double>>();
        m.base_point = Complex(j.at("base_point").at(0).get<double>(),
                               j.at("base_point").at(1).get<double>());
        m.base_value = Complex(j.at("base_value").at(0).get<double>(),
                               j.at("base_value").at(1).get<double>());
        m.scale = j.at("scale").get<double>();
        if (j.contains("M")) m.lipschitz_M = j.at("M").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(Error::Kind::Io, std::string("map json: ") + e.what());
    }
    m.validate();
    return m;
}

Json certificate_to_json(const Certificate& c) {
    Json j;
    j["bound_name"] = c.bound_name;
    j["regime"] = c.regime;
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["constant"] = c.constant_used;
    j["pass"] = c.pass;
    j["sample"] = Json(c.sample);
    return j;
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::Io, "cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Error::Kind::Io, path + ": " + e.what());
    }
    return j;
}

void save_json_file(const Json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Error::Kind::Io, "cannot write " + path);
    out << j.dump(2) << "\n";
}

LipschitzGraph load_graph(const std::string& name_or_path) {
    if (name_or_path == "flat") return make_flat_graph();
    if (name_or_path == "wedge") return make_wedge_graph(1.0);
    if (name_or_path == "wedge05") return make_wedge_graph(0.5);
    if (name_or_path == "wedge2") return make_wedge_graph(2.0);
    if (name_or_path == "zigzag") return make_zigzag_graph();
    if (name_or_path == "wgraph") return make_w_graph();
    return graph_from_json(load_json_file(name_or_path));
}

}  // namespace hardylip
