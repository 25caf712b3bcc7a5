#include "support.hpp"

#include "mibf/errors.hpp"
#include "mibf/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

using namespace mibf;

namespace {

const std::string kMinimal = R"({
  "coupling": { "F": 15.0, "d": 0.4 },
  "receivers": [ { "angleDeg": 90, "axis": [0, 0, 2] } ]
})";

std::string field_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ParseError& e) {
        return e.field();
    }
    return "<no error>";
}

} // namespace

TEST_CASE("minimal scenario uses defaults") {
    const Scenario s = parse_scenario(kMinimal);
    const auto& c = s.constellation;
    CHECK(s.params.resonance == 125e6);
    CHECK(s.params.frequency == 125e6);
    CHECK(c.coupling_factor == 15.0);
    REQUIRE(c.receivers.size() == 1);
    CHECK(c.receivers[0].axis == Vec3{0, 0, 1});
    CHECK(std::abs(c.receivers[0].position.y - 0.4) < 1e-15);
    CHECK(c.receivers[0].load == doctest::Approx(std::sqrt(226.0)));
    CHECK(c.receivers[0].priority == 1.0);
}

TEST_CASE("shipped reference scenario") {
    const Scenario s = load_scenario(MIBF_SOURCE_DIR "/scenarios/reference_f15.json");
    CHECK(s.constellation.coupling_factor == 15.0);
    CHECK(s.constellation.receivers.size() == 3);
    const Scene scene = Scene::build(s.constellation, s.params);
    for (Method m : kAllMethods) {
        const double e = run_method(scene, m).efficiency;
        CHECK(e > 0.0);
        CHECK(e <= 1.0);
    }
}

TEST_CASE("Mbar is converted to F") {
    const auto params = CircuitParams::defaults();
    const double mbar = params.mutual_for_coupling(15.0);
    std::ostringstream text;
    text << std::setprecision(17) << R"({"coupling": {"Mbar": )" << mbar << R"(}, "receivers": []})";
    const Scenario s = parse_scenario(text.str());
    CHECK(s.constellation.coupling_factor == doctest::Approx(15.0).epsilon(1e-14));
}

TEST_CASE("parse errors name the offending field") {
    CHECK(field_of(R"({"coupling": {"F": 1}, "receivers": [{"angleDeg": 0}]})") == "receivers[0].axis");
    CHECK(field_of(R"({"coupling": {"F": 1}, "receivers": [{"angleDeg": 0, "axis": [0,0,1]},
                                                           {"angleDeg": 0, "axis": [0,1]}]})") == "receivers[1].axis");
    CHECK(field_of(R"({"coupling": {"F": 1}, "receivers": [{"angleDeg": 0, "axis": [0,0,1], "colour": 3}]})") ==
          "receivers[0].colour");
    CHECK(field_of(R"({"coupling": {"F": 1}, "receivers": [], "extra": true})") == "extra");
    CHECK(field_of(R"({"circuit": {"R": 1, "C": 3}, "coupling": {"F": 1}, "receivers": []})") == "circuit.C");
    CHECK(field_of(R"({"receivers": []})") == "coupling");
    CHECK(field_of(R"({"coupling": {"F": 1, "Mbar": 1e-9}, "receivers": []})") == "coupling");
    CHECK(field_of(R"({"coupling": {"F": "high"}, "receivers": []})") == "coupling.F");
    CHECK(field_of(R"({"circuit": {"loadPolicy": "optimal"}, "coupling": {"F": 1}, "receivers": []})") ==
          "circuit.loadPolicy");
    CHECK(field_of(R"({"circuit": {"R": -1}, "coupling": {"F": 1}, "receivers": []})") == "circuit");
    CHECK(field_of(R"({"coupling": {"F": 1}, "receivers": [{"axis": [0,0,1]}]})") == "receivers[0]");
    CHECK(field_of(R"({"coupling": {"F": 1}, "receivers": [ )") == "");
    CHECK_THROWS_AS(load_scenario("/nonexistent/scene.json"), ParseError);
}

TEST_CASE("geometric violations are validation errors") {
    // Position off the reference circle.
    CHECK_THROWS_AS(parse_scenario(R"({"coupling": {"F": 1, "d": 0.4},
        "receivers": [{"position": [0.5, 0, 0], "axis": [0, 0, 1]}]})"),
                    ValidationError);
}

TEST_CASE("write then parse reproduces the scene exactly") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rng = stream_rng(81, seed);
        Scenario s;
        s.load_policy = seed % 2 ? LoadPolicy{FixedLoad{2.5}} : LoadPolicy{MatchedLoad{}};
        s.constellation = random_constellation(1 + seed % 5, 0.1 + static_cast<double>(seed), s.params, rng,
                                               s.load_policy);
        const Scenario back = parse_scenario(write_scenario(s));
        CHECK(back.constellation.tx_basis == s.constellation.tx_basis);
        CHECK(back.constellation.coupling_factor == s.constellation.coupling_factor);
        CHECK(back.constellation.ref_mutual == s.constellation.ref_mutual);
        REQUIRE(back.constellation.receivers.size() == s.constellation.receivers.size());
        for (std::size_t i = 0; i < s.constellation.receivers.size(); ++i) {
            CHECK(back.constellation.receivers[i].position == s.constellation.receivers[i].position);
            CHECK(back.constellation.receivers[i].axis == s.constellation.receivers[i].axis);
            CHECK(back.constellation.receivers[i].load == s.constellation.receivers[i].load);
        }
        const Scene a = Scene::build(s.constellation, s.params);
        const Scene b = Scene::build(back.constellation, back.params);
        CHECK(iterative_beamforming(a).efficiency == iterative_beamforming(b).efficiency);
        CHECK(write_scenario(back) == write_scenario(s));
    }
}

TEST_CASE("scenario without receivers") {
    const Scenario s = load_scenario(MIBF_SOURCE_DIR "/scenarios/transmit_only.json");
    CHECK(s.constellation.receivers.empty());
    CHECK_NOTHROW(build_impedance(s.constellation, s.params));
}
