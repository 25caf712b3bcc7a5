#include "support.hpp"

#include "mibf/errors.hpp"
#include "mibf/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mibf;

namespace {

constexpr double pi = std::numbers::pi;

Constellation two_receivers(const Vec3& p1, const Vec3& a1, const Vec3& p2, const Vec3& a2) {
    Constellation c;
    c.ref_distance = 0.4;
    c.ref_mutual = 1e-9;
    c.receivers = {Receiver{p1, a1}, Receiver{p2, a2}};
    return c;
}

Vec3 rotate(const Rotation& r, const Vec3& v) { return r.apply(v); }

} // namespace

TEST_CASE("coupling_factor_angles examples") {
    CHECK(coupling_factor_angles({pi / 2, pi / 2, 0.3}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(coupling_factor_angles({0.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(coupling_factor_angles({0.0, pi / 2, 1.1})) < 1e-15);
}

TEST_CASE("coupling_factor_vectors examples") {
    const Vec3 x{1, 0, 0}, y{0, 1, 0}, z{0, 0, 1};
    CHECK(coupling_factor_vectors(x, x, x) == 2.0);  // coaxial
    CHECK(coupling_factor_vectors(z, z, x) == 1.0);  // parallel broadside
    CHECK(coupling_factor_vectors(y, z, x) == 0.0);  // orthogonal, both broadside
    CHECK(coupling_factor_vectors(x, y, x) == 0.0);
    CHECK(coupling_factor_vectors(x, -1.0 * x, x) == -2.0);
}

TEST_CASE("coupling_factor_vectors agrees with the angle form on random triples") {
    auto rng = stream_rng(21, 0);
    double worst = 0.0;
    bool bounded = true;
    bool symmetric = true;
    for (int i = 0; i < 10000; ++i) {
        const Vec3 a = random_unit_vector(rng), b = random_unit_vector(rng), u = random_unit_vector(rng);
        const double jv = coupling_factor_vectors(a, b, u);
        const AngleGeometry g = extract_angles(a, b, u);
        worst = std::max(worst, std::abs(jv - coupling_factor_angles(g)));
        bounded = bounded && std::abs(jv) <= 2.0 + 1e-15;
        symmetric = symmetric && jv == coupling_factor_vectors(b, a, u);
    }
    CHECK(worst <= 1e-12);
    CHECK(bounded);
    CHECK(symmetric);
}

TEST_CASE("mutual_inductance between receivers scales with inverse cube distance") {
    const double d = 0.4;
    const Vec3 axis{0, 0, 1};
    // Two receivers on the circle exactly d apart (60 degrees), broadside: J = 1.
    Constellation near = two_receivers(position_on_circle(d, 0.0), axis, position_on_circle(d, pi / 3), axis);
    const double m_d = mutual_inductance(near, 3, 4);
    CHECK(m_d == doctest::Approx(near.ref_mutual * 1.0).epsilon(1e-12));

    // Opposite sides: separation 2d, same J.
    Constellation far = two_receivers(position_on_circle(d, 0.0), axis, position_on_circle(d, pi), axis);
    CHECK(mutual_inductance(far, 3, 4) == doctest::Approx(m_d / 8.0).epsilon(1e-12));
}

TEST_CASE("mutual_inductance transmitter pairs and errors") {
    Constellation c = two_receivers(position_on_circle(0.4, 0.0), {1, 0, 0}, position_on_circle(0.4, 1.0), {0, 1, 0});
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
            if (k != l) CHECK(mutual_inductance(c, k, l) == 0.0);
    // Receiver 1 sits on the x axis with its axis along x: coaxial with coil 0.
    CHECK(mutual_inductance(c, 0, 3) == doctest::Approx(2.0 * c.ref_mutual));
    CHECK(mutual_inductance(c, 1, 3) == 0.0);

    CHECK_THROWS_AS(mutual_inductance(c, 1, 1), IndexError);
    CHECK_THROWS_AS(mutual_inductance(c, 0, 5), IndexError);
    c.receivers[1].position = c.receivers[0].position;
    CHECK_THROWS_AS(mutual_inductance(c, 3, 4), CoincidentCoils);
}

TEST_CASE("mutual_inductance is exactly symmetric") {
    auto rng = stream_rng(22, 0);
    const Constellation c = random_constellation(6, 3.0, CircuitParams::defaults(), rng);
    for (std::size_t k = 0; k < c.coil_count(); ++k)
        for (std::size_t l = 0; l < c.coil_count(); ++l)
            if (k != l) CHECK(mutual_inductance(c, k, l) == mutual_inductance(c, l, k));
}

TEST_CASE("common rotation leaves couplings unchanged") {
    auto rng = stream_rng(23, 0);
    const Constellation c = random_constellation(4, 5.0, CircuitParams::defaults(), rng);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Rotation r = random_rotation(rng);
        Constellation rc = c;
        for (auto& a : rc.tx_basis) a = rotate(r, a);
        for (auto& rx : rc.receivers) {
            rx.position = rotate(r, rx.position);
            rx.axis = rotate(r, rx.axis);
        }
        for (std::size_t k = 0; k < c.coil_count(); ++k)
            for (std::size_t l = k + 1; l < c.coil_count(); ++l)
                worst = std::max(worst, std::abs(mutual_inductance(rc, k, l) - mutual_inductance(c, k, l)) /
                                            c.ref_mutual);
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("random_constellation is deterministic and valid") {
    const auto params = CircuitParams::defaults();
    auto r1 = stream_rng(24, 3);
    auto r2 = stream_rng(24, 3);
    const Constellation a = random_constellation(5, 15.0, params, r1);
    const Constellation b = random_constellation(5, 15.0, params, r2);
    REQUIRE(a.receivers.size() == 5);
    CHECK(a.tx_basis == b.tx_basis);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(a.receivers[i].position == b.receivers[i].position);
        CHECK(a.receivers[i].axis == b.receivers[i].axis);
        CHECK(a.receivers[i].load == b.receivers[i].load);
    }
    CHECK_NOTHROW(a.validate(params));
    CHECK(a.ref_mutual == doctest::Approx(15.0 * params.resistance / params.angular_frequency()).epsilon(1e-15));
    CHECK(a.receivers[0].load == doctest::Approx(std::sqrt(1.0 + 225.0)).epsilon(1e-15));
    for (const auto& rx : a.receivers) CHECK(rx.position.z == 0.0);
}

TEST_CASE("random_constellation angles pass a chi-square uniformity check") {
    auto rng = stream_rng(25, 0);
    const Constellation c = random_constellation(1000, 1.0, CircuitParams::defaults(), rng);
    std::array<int, 16> bins{};
    for (const auto& rx : c.receivers) {
        double a = std::atan2(rx.position.y, rx.position.x);
        if (a < 0) a += 2 * pi;
        bins[std::min<std::size_t>(15, static_cast<std::size_t>(a / (2 * pi) * 16))]++;
    }
    double chi2 = 0.0;
    for (int n : bins) chi2 += (n - 62.5) * (n - 62.5) / 62.5;
    // 0.999 quantile of chi-square with 15 degrees of freedom.
    CHECK(chi2 < 37.697);
}

TEST_CASE("random rotations are proper and axes are unit") {
    auto rng = stream_rng(26, 0);
    for (int i = 0; i < 100; ++i) {
        const Rotation r = random_rotation(rng);
        const Vec3 x = r.column(0), y = r.column(1), z = r.column(2);
        CHECK(std::abs(dot(x, y)) < 1e-12);
        CHECK(std::abs(dot(x, z)) < 1e-12);
        CHECK(std::abs(norm(x) - 1.0) < 1e-12);
        CHECK(norm(cross(x, y) - z) < 1e-12);  // determinant +1
        CHECK(std::abs(norm(random_unit_vector(rng)) - 1.0) < 1e-14);
    }
}

TEST_CASE("Constellation::validate rejects broken invariants") {
    const auto params = CircuitParams::defaults();
    auto rng = stream_rng(27, 0);
    const Constellation good = random_constellation(2, 1.0, params, rng);

    Constellation c = good;
    c.receivers[0].position = 1.01 * c.receivers[0].position;
    CHECK_THROWS_AS(c.validate(params), ValidationError);
    c = good;
    c.receivers[1].axis = 2.0 * c.receivers[1].axis;
    CHECK_THROWS_AS(c.validate(params), ValidationError);
    c = good;
    c.tx_basis[1] = c.tx_basis[0];
    CHECK_THROWS_AS(c.validate(params), ValidationError);
    c = good;
    c.coupling_factor *= 2.0;
    CHECK_THROWS_AS(c.validate(params), ValidationError);
    c = good;
    c.receivers[0].load = 0.0;
    CHECK_THROWS_AS(c.validate(params), ValidationError);
    c = good;
    c.receivers[0].priority = -1.0;
    CHECK_THROWS_AS(c.validate(params), ValidationError);
}

TEST_CASE("with_coupling rescales mutual inductance and matched loads") {
    const auto params = CircuitParams::defaults();
    auto rng = stream_rng(28, 0);
    const Constellation c = random_constellation(3, 1.0, params, rng);
    const Constellation m = c.with_coupling(100.0, params, MatchedLoad{});
    CHECK(m.ref_mutual == doctest::Approx(100.0 * c.ref_mutual).epsilon(1e-14));
    CHECK(m.receivers[2].load == doctest::Approx(std::sqrt(1.0 + 1e4)));
    const Constellation f = c.with_coupling(100.0, params, FixedLoad{3.0});
    CHECK(f.receivers[0].load == 3.0);
    CHECK(f.receivers[0].axis == c.receivers[0].axis);
}
