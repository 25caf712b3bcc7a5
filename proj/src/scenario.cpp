#include "mibf/scenario.hpp"

#include "mibf/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

namespace mibf {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || item.key() == a;
        if (!known) {
            throw ParseError(where.empty() ? item.key() : where + "." + item.key(), "unknown field");
        }
    }
}

const json& require_object(const json& parent, const std::string& key, const std::string& path) {
    if (!parent.contains(key)) throw ParseError(path, "missing required field");
    const json& v = parent.at(key);
    if (!v.is_object()) throw ParseError(path, "expected an object");
    return v;
}

double number_at(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(path, "expected a finite number");
    return x;
}

double optional_number(const json& obj, const std::string& key, const std::string& path, double fallback) {
    return obj.contains(key) ? number_at(obj.at(key), path + "." + key) : fallback;
}

Vec3 vec3_at(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) throw ParseError(path, "expected an array of three numbers");
    return {number_at(v[0], path + "[0]"), number_at(v[1], path + "[1]"), number_at(v[2], path + "[2]")};
}

json vec3_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

LoadPolicy load_policy_at(const json& v, const std::string& path) {
    if (v.is_string()) {
        if (v.get<std::string>() == "matched") return MatchedLoad{};
        throw ParseError(path, "expected \"matched\" or a resistance in ohms");
    }
    const double ohms = number_at(v, path);
    if (!(ohms > 0.0)) throw ParseError(path, "fixed load must be positive");
    return FixedLoad{ohms};
}

} // namespace

Scenario parse_scenario(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParseError("", "top level must be an object");
    reject_unknown(root, "", {"circuit", "coupling", "transmitterRotation", "transmitterAxes", "receivers"});

    Scenario s;
    if (root.contains("circuit")) {
        const json& c = require_object(root, "circuit", "circuit");
        reject_unknown(c, "circuit", {"R", "f0", "f", "L", "loadPolicy"});
        const double f0 = optional_number(c, "f0", "circuit", s.params.resonance);
        const double l = optional_number(c, "L", "circuit", s.params.inductance);
        const double r = optional_number(c, "R", "circuit", s.params.resistance);
        s.params = CircuitParams::at_resonance(f0, l, r);
        s.params.frequency = optional_number(c, "f", "circuit", f0);
        if (c.contains("loadPolicy")) s.load_policy = load_policy_at(c.at("loadPolicy"), "circuit.loadPolicy");
    }
    try {
        s.params.validate();
    } catch (const ValidationError& e) {
        throw ParseError("circuit", e.what());
    }

    const json& coupling = require_object(root, "coupling", "coupling");
    reject_unknown(coupling, "coupling", {"F", "Mbar", "d"});
    if (coupling.contains("F") == coupling.contains("Mbar")) {
        throw ParseError("coupling", "exactly one of F or Mbar is required");
    }
    auto& con = s.constellation;
    con.ref_distance = optional_number(coupling, "d", "coupling", 0.4);
    if (!(con.ref_distance > 0.0)) throw ParseError("coupling.d", "distance must be positive");
    if (coupling.contains("F")) {
        con.coupling_factor = number_at(coupling.at("F"), "coupling.F");
        con.ref_mutual = s.params.mutual_for_coupling(con.coupling_factor);
    } else {
        con.ref_mutual = number_at(coupling.at("Mbar"), "coupling.Mbar");
        con.coupling_factor = s.params.coupling_for_mutual(con.ref_mutual);
    }
    if (con.coupling_factor < 0.0) throw ParseError("coupling", "coupling must be nonnegative");

    if (root.contains("transmitterRotation") && root.contains("transmitterAxes")) {
        throw ParseError("transmitterRotation", "give either transmitterRotation or transmitterAxes, not both");
    }
    if (root.contains("transmitterRotation")) {
        const json& q = root.at("transmitterRotation");
        if (!q.is_array() || q.size() != 4) {
            throw ParseError("transmitterRotation", "expected a quaternion [w, x, y, z]");
        }
        double w[4];
        for (std::size_t i = 0; i < 4; ++i) w[i] = number_at(q[i], "transmitterRotation[" + std::to_string(i) + "]");
        if (w[0] == 0 && w[1] == 0 && w[2] == 0 && w[3] == 0) {
            throw ParseError("transmitterRotation", "quaternion must be nonzero");
        }
        const Rotation r = Rotation::from_quaternion(w[0], w[1], w[2], w[3]);
        con.tx_basis = {r.column(0), r.column(1), r.column(2)};
    }
    if (root.contains("transmitterAxes")) {
        const json& axes = root.at("transmitterAxes");
        if (!axes.is_array() || axes.size() != 3) throw ParseError("transmitterAxes", "expected three axes");
        for (std::size_t i = 0; i < 3; ++i) {
            con.tx_basis[i] = vec3_at(axes[i], "transmitterAxes[" + std::to_string(i) + "]");
        }
    }

    if (!root.contains("receivers")) throw ParseError("receivers", "missing required field");
    const json& rxs = root.at("receivers");
    if (!rxs.is_array()) throw ParseError("receivers", "expected an array");
    const double default_load = load_for(s.load_policy, con.coupling_factor, s.params.resistance);
    for (std::size_t i = 0; i < rxs.size(); ++i) {
        const std::string path = "receivers[" + std::to_string(i) + "]";
        const json& r = rxs[i];
        if (!r.is_object()) throw ParseError(path, "expected an object");
        reject_unknown(r, path, {"angleDeg", "position", "axis", "priority", "load"});
        Receiver rx;
        if (r.contains("angleDeg") == r.contains("position")) {
            throw ParseError(path, "exactly one of angleDeg or position is required");
        }
        if (r.contains("angleDeg")) {
            const double deg = number_at(r.at("angleDeg"), path + ".angleDeg");
            rx.position = position_on_circle(con.ref_distance, deg * std::numbers::pi / 180.0);
        } else {
            rx.position = vec3_at(r.at("position"), path + ".position");
        }
        if (!r.contains("axis")) throw ParseError(path + ".axis", "missing required field");
        const Vec3 axis = vec3_at(r.at("axis"), path + ".axis");
        if (norm(axis) == 0.0) throw ParseError(path + ".axis", "axis must be nonzero");
        // Leave already-unit axes untouched so written scenarios reload bit-exactly.
        rx.axis = std::abs(norm(axis) - 1.0) <= 1e-14 ? axis : unit(axis);
        rx.priority = optional_number(r, "priority", path, 1.0);
        rx.load = optional_number(r, "load", path, default_load);
        con.receivers.push_back(rx);
    }

    con.validate(s.params);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("", "cannot open scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string write_scenario(const Scenario& s) {
    json root;
    json circuit{{"R", s.params.resistance}, {"f0", s.params.resonance}, {"f", s.params.frequency},
                 {"L", s.params.inductance}};
    if (const auto* fixed = std::get_if<FixedLoad>(&s.load_policy)) {
        circuit["loadPolicy"] = fixed->ohms;
    } else {
        circuit["loadPolicy"] = "matched";
    }
    root["circuit"] = circuit;
    root["coupling"] = {{"F", s.constellation.coupling_factor}, {"d", s.constellation.ref_distance}};
    root["transmitterAxes"] = json::array();
    for (const auto& a : s.constellation.tx_basis) root["transmitterAxes"].push_back(vec3_json(a));
    root["receivers"] = json::array();
    for (const auto& rx : s.constellation.receivers) {
        root["receivers"].push_back({{"position", vec3_json(rx.position)},
                                     {"axis", vec3_json(rx.axis)},
                                     {"priority", rx.priority},
                                     {"load", rx.load}});
    }
    return root.dump(2) + "\n";
}

} // namespace mibf
