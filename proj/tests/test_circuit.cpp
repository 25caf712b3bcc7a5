#include "support.hpp"

#include "mibf/circuit.hpp"
#include "mibf/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mibf;
using testing::random_scene;
using testing::random_vector;

namespace {

Constellation empty_scene(const CircuitParams& params, double f = 1.0) {
    return Constellation{}.with_coupling(f, params, MatchedLoad{});
}

Constellation single_broadside(const CircuitParams& params, double f) {
    Constellation c;
    // On the x axis with axis along z: broadside to transmitter coil 2 (J = 1),
    // orthogonal to coils 0 and 1.
    c.receivers = {Receiver{position_on_circle(0.4, 0.0), Vec3{0, 0, 1}}};
    return c.with_coupling(f, params, MatchedLoad{});
}

} // namespace

TEST_CASE("build_impedance at resonance") {
    const auto params = CircuitParams::defaults();
    const Scene s = random_scene(31, 4, 10.0);
    const auto& z = s.impedance;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(z.z_tx(r, c) == Complex(r == c ? params.resistance : 0.0));
    for (std::size_t l = 0; l < 4; ++l) {
        CHECK(z.z_rx(l, l) == Complex(params.resistance + z.loads[l]));
        for (std::size_t m = 0; m < 4; ++m) CHECK(z.z_rx(l, m) == z.z_rx(m, l));
        for (std::size_t t = 0; t < 3; ++t) {
            CHECK(z.z_ch(t, l).real() == 0.0);
            CHECK(z.z_ch(t, l).imag() ==
                  doctest::Approx(params.angular_frequency() * mutual_inductance(s.constellation, t, 3 + l)));
        }
    }
}

TEST_CASE("build_impedance single link column") {
    const auto params = CircuitParams::defaults();
    const Constellation c = single_broadside(params, 2.0);
    const SystemImpedance z = build_impedance(c, params);
    CHECK(z.z_ch(0, 0) == Complex{});
    CHECK(z.z_ch(1, 0) == Complex{});
    CHECK(z.z_ch(2, 0).imag() == doctest::Approx(params.angular_frequency() * c.ref_mutual).epsilon(1e-15));
    // j w Mbar = j F R
    CHECK(z.z_ch(2, 0).imag() == doctest::Approx(2.0 * params.resistance).epsilon(1e-14));
}

TEST_CASE("build_impedance off resonance carries the series reactance") {
    CircuitParams params = CircuitParams::defaults();
    params.frequency = 2.0 * params.resonance;
    const Constellation c = single_broadside(params, 1.0);
    const SystemImpedance z = build_impedance(c, params);
    const double w = 2.0 * std::numbers::pi * params.frequency;
    const double x = w * params.inductance - 1.0 / (w * params.capacitance());
    CHECK(x != 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(z.z_tx(i, i).real() == params.resistance);
        CHECK(z.z_tx(i, i).imag() == doctest::Approx(x).epsilon(1e-12));
    }
    CHECK(z.z_rx(0, 0).imag() == doctest::Approx(x).epsilon(1e-12));
    // f0 = 1 / (2 pi sqrt(LC))
    CHECK(1.0 / (2.0 * std::numbers::pi * std::sqrt(params.inductance * params.capacitance())) ==
          doctest::Approx(params.resonance).epsilon(1e-12));
}

TEST_CASE("solve_network without receivers") {
    const auto params = CircuitParams::defaults();
    const Constellation c = empty_scene(params);
    const SystemImpedance z = build_impedance(c, params);
    const NetworkSolution s = solve_network(z, CVector{1.0, 0.0, 0.0});
    CHECK(s.i_tx[0] == Complex(1.0 / params.resistance));
    CHECK(s.i_tx[1] == Complex{});
    CHECK(s.i_tx[2] == Complex{});
    CHECK(s.p_tx_total == 1.0 / params.resistance);
    CHECK(s.p_rx_weighted == 0.0);
    CHECK(s.i_rx.size() == 0);
    CHECK(efficiency(c, params, CVector{1.0, 2.0, 3.0}) == 0.0);
}

TEST_CASE("block solve reproduces the direct solve of the full system") {
    auto rng = stream_rng(32, 0);
    for (std::size_t k = 1; k <= 6; ++k) {
        for (double f : {0.1, 1.0, 15.0, 100.0}) {
            const Scene s = random_scene(32 + k, k, f);
            const CVector u = random_vector(rng, 3);
            const NetworkSolution sol = s.evaluate(u);

            const CMatrix full = s.impedance.full();
            CVector rhs(k + 3);
            for (std::size_t i = 0; i < 3; ++i) rhs[i] = u[i];
            const CVector direct = linalg::solve(full, rhs);

            CVector stacked(k + 3);
            for (std::size_t i = 0; i < 3; ++i) stacked[i] = sol.i_tx[i];
            for (std::size_t l = 0; l < k; ++l) stacked[3 + l] = sol.i_rx[l];
            CHECK(linalg::norm2(stacked - direct) <= 1e-10 * linalg::norm2(direct));
            CHECK(linalg::norm2(full * stacked - rhs) <= 1e-10 * linalg::norm2(rhs));
        }
    }
}

TEST_CASE("weak coupling: A is close to the inverse self impedance") {
    const auto params = CircuitParams::defaults();
    const Scene s = random_scene(33, 5, 0.01);
    const Complex inv = 1.0 / s.impedance.z_tx(0, 0);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(std::abs(s.transfer.a(r, c) - (r == c ? inv : Complex{})) <= 0.01 * std::abs(inv));
}

TEST_CASE("A approaches the inverse of Z_tx monotonically as F shrinks") {
    const auto params = CircuitParams::defaults();
    auto rng = stream_rng(34, 0);
    const Constellation base = random_constellation(5, 1.0, params, rng);
    double previous = INFINITY;
    for (double f : {1e-1, 1e-2, 1e-3}) {
        const Scene s = Scene::build(base.with_coupling(f, params, MatchedLoad{}), params);
        const CMatrix inv = linalg::invert(s.impedance.z_tx);
        const double rel = linalg::frobenius_norm(s.transfer.a - inv) / linalg::frobenius_norm(inv);
        CHECK(rel < previous);
        previous = rel;
    }
    CHECK(previous < 1e-5);
}

TEST_CASE("efficiency is invariant to complex scaling of the drive") {
    auto rng = stream_rng(35, 0);
    std::uniform_real_distribution<double> mag(0.01, 100.0), ph(0.0, 2 * std::numbers::pi);
    for (int trial = 0; trial < 100; ++trial) {
        const Scene s = random_scene(35 + trial, 1 + trial % 5, 0.1 * std::pow(10.0, trial % 4));
        const CVector u = random_vector(rng, 3);
        const Complex alpha = std::polar(mag(rng), ph(rng));
        const double e = s.efficiency(u);
        CHECK(std::abs(s.efficiency(alpha * u) - e) <= 1e-12 * std::max(1.0, e));
    }
    const Scene s = random_scene(36, 3, 15.0);
    const CVector u{1.0, -0.5, 0.25};
    const Complex alpha = std::polar(3.0, std::numbers::pi / 4);
    CHECK(std::abs(s.efficiency(alpha * u) - s.efficiency(u)) <= 1e-12);
}

TEST_CASE("unit priorities keep efficiency within [0, 1]") {
    auto rng = stream_rng(37, 0);
    bool ok = true;
    for (double f : {0.1, 1.0, 10.0, 100.0}) {
        for (int i = 0; i < 250; ++i) {
            const Scene s = random_scene(1000 + i, 1 + i % 5, f);
            const NetworkSolution sol = s.evaluate(random_vector(rng, 3));
            ok = ok && sol.efficiency >= 0.0 && sol.efficiency <= 1.0 && sol.p_tx_total >= 0.0;
            for (double p : sol.p_rx) ok = ok && p >= 0.0;
        }
    }
    CHECK(ok);
}

TEST_CASE("receiver matrix D reproduces the weighted receive power") {
    auto rng = stream_rng(38, 0);
    for (int trial = 0; trial < 50; ++trial) {
        Scene s = random_scene(38 + trial, 1 + trial % 5, 5.0);
        // Arbitrary priorities.
        for (auto& rx : s.constellation.receivers) rx.priority = std::uniform_real_distribution<double>(0, 3)(rng);
        s = Scene::build(s.constellation, s.params);
        const CVector u = random_vector(rng, 3);
        const NetworkSolution sol = s.evaluate(u);
        double direct = 0.0;
        for (std::size_t l = 0; l < sol.i_rx.size(); ++l)
            direct += s.constellation.receivers[l].priority * std::norm(sol.i_rx[l]) * s.constellation.receivers[l].load;
        const Complex q = linalg::quadratic_form(s.d, u);
        CHECK(std::abs(q.real() - direct) <= 1e-12 * direct);
        CHECK(std::abs(q.imag()) <= 1e-12 * direct);
        CHECK(std::abs(sol.p_rx_weighted - direct) <= 1e-12 * direct);
        CHECK(s.d == s.d.adjoint());
        CHECK(linalg::hermitian_eigen(s.d).back().value >= -1e-12 * linalg::frobenius_norm(s.d));
    }
}

TEST_CASE("receiver matrix D special cases") {
    const Scene s = random_scene(39, 1, 3.0);
    const CMatrix& c = s.transfer.c;
    const double zl = s.impedance.loads[0];
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::abs(s.d(i, j) - zl * std::conj(c(0, i)) * c(0, j)) <= 1e-15 * linalg::frobenius_norm(s.d));
    const auto eig = linalg::hermitian_eigen(s.d);
    CHECK(std::abs(eig[1].value) <= 1e-12 * eig[0].value);  // rank one

    const Scene five = random_scene(40, 5, 3.0);
    const CMatrix zero = receiver_matrix(five.transfer.c, std::vector<double>(5, 0.0), five.impedance.loads);
    CHECK(zero == CMatrix::zero(3, 3));
}

TEST_CASE("zero and malformed drives are rejected") {
    const Scene s = random_scene(41, 2, 1.0);
    CHECK_THROWS_AS(s.evaluate(CVector(3)), ZeroDrive);
    CHECK_THROWS_AS(s.evaluate(CVector{1.0, 1.0}), DimensionMismatch);
}

TEST_CASE("circuit parameter validation") {
    CircuitParams p = CircuitParams::defaults();
    CHECK_NOTHROW(p.validate());
    CHECK(p.self_reactance() == 0.0);
    p.resistance = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK(load_for(MatchedLoad{}, 15.0, 2.0) == doctest::Approx(2.0 * std::sqrt(226.0)));
    CHECK(load_for(FixedLoad{4.0}, 15.0, 2.0) == 4.0);
}
