#pragma once

// JSON scenario files describing a single scene.
//
// {
//   "circuit":  { "R": 1.0, "f0": 125e6, "f": 125e6, "L": 2e-7, "loadPolicy": "matched" | <ohms> },
//   "coupling": { "F": 15.0 | "Mbar": <henry>, "d": 0.4 },
//   "transmitterRotation": [w, x, y, z]            (or "transmitterAxes": [[..],[..],[..]])
//   "receivers": [ { "angleDeg": 0 | "position": [x, y, z], "axis": [x, y, z],
//                    "priority": 1.0, "load": <ohms> }, ... ]
// }
//
// Only "coupling" and "receivers" are required. Unknown keys are rejected.
// Axes are normalized on load; positions must lie at distance d.

#include "mibf/circuit_params.hpp"
#include "mibf/geometry.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace mibf {

struct Scenario {
    CircuitParams params = CircuitParams::defaults();
    LoadPolicy load_policy = MatchedLoad{};
    Constellation constellation;
};

/// Throws ParseError naming the offending field (e.g. "receivers[1].axis"),
/// or ValidationError when the parsed scene breaks a geometric invariant.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Serializes with explicit transmitter axes, positions and loads, so
/// parse_scenario(write_scenario(s)) reproduces the scene exactly.
std::string write_scenario(const Scenario& s);

} // namespace mibf
