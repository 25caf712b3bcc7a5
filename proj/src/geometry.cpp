#include "mibf/geometry.hpp"

#include "mibf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mibf {

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 unit(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0) throw ValidationError("cannot normalize a zero vector");
    return (1.0 / n) * v;
}

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (n == 0.0) throw ValidationError("zero quaternion");
    w /= n;
    x /= n;
    y /= n;
    z /= n;
    Rotation r;
    r.m = {1 - 2 * (y * y + z * z), 2 * (x * y - z * w),     2 * (x * z + y * w),
           2 * (x * y + z * w),     1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
           2 * (x * z - y * w),     2 * (y * z + x * w),     1 - 2 * (x * x + y * y)};
    return r;
}

Vec3 Rotation::apply(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z, m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
}

Rotation random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    for (;;) {
        const double w = gauss(rng), x = gauss(rng), y = gauss(rng), z = gauss(rng);
        if (w * w + x * x + y * y + z * z > 1e-12) return Rotation::from_quaternion(w, x, y, z);
    }
}

Vec3 random_unit_vector(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    for (;;) {
        const Vec3 v{gauss(rng), gauss(rng), gauss(rng)};
        if (dot(v, v) > 1e-12) return unit(v);
    }
}

Vec3 position_on_circle(double distance, double angle) {
    return {distance * std::cos(angle), distance * std::sin(angle), 0.0};
}

Constellation Constellation::with_coupling(double coupling, const CircuitParams& params,
                                           const LoadPolicy& policy) const {
    Constellation out = *this;
    out.coupling_factor = coupling;
    out.ref_mutual = params.mutual_for_coupling(coupling);
    const double load = load_for(policy, coupling, params.resistance);
    for (auto& rx : out.receivers) rx.load = load;
    return out;
}

void Constellation::validate(const CircuitParams& params) const {
    constexpr double kAxisTol = 1e-12;
    for (std::size_t i = 0; i < 3; ++i) {
        if (std::abs(norm(tx_basis[i]) - 1.0) > kAxisTol) {
            throw ValidationError("transmitter axis " + std::to_string(i) + " is not unit norm");
        }
        for (std::size_t j = i + 1; j < 3; ++j) {
            if (std::abs(dot(tx_basis[i], tx_basis[j])) > kAxisTol) {
                throw ValidationError("transmitter axes are not orthogonal");
            }
        }
    }
    if (!(ref_distance > 0.0) || !std::isfinite(ref_distance)) {
        throw ValidationError("reference distance must be positive");
    }
    if (!(coupling_factor >= 0.0) || !std::isfinite(coupling_factor)) {
        throw ValidationError("coupling factor must be finite and nonnegative");
    }
    const double implied = params.coupling_for_mutual(ref_mutual);
    if (std::abs(implied - coupling_factor) > 1e-12 * std::max(1.0, coupling_factor)) {
        throw ValidationError("coupling factor is inconsistent with the reference mutual inductance");
    }
    for (std::size_t i = 0; i < receivers.size(); ++i) {
        const auto& rx = receivers[i];
        const std::string who = "receiver " + std::to_string(i) + ": ";
        if (std::abs(norm(rx.axis) - 1.0) > kAxisTol) throw ValidationError(who + "axis is not unit norm");
        if (std::abs(norm(rx.position) - ref_distance) > 1e-9 * ref_distance) {
            throw ValidationError(who + "not at the reference distance from the transmitter");
        }
        if (!std::isfinite(rx.priority) || rx.priority < 0.0) {
            throw ValidationError(who + "priority must be finite and nonnegative");
        }
        if (!std::isfinite(rx.load) || !(rx.load > 0.0)) throw ValidationError(who + "load must be positive");
    }
}

double coupling_factor_angles(const AngleGeometry& g) {
    return 2.0 * std::sin(g.theta_k) * std::sin(g.theta_l) +
           std::cos(g.theta_k) * std::cos(g.theta_l) * std::cos(g.phi);
}

double coupling_factor_vectors(const Vec3& axis_k, const Vec3& axis_l, const Vec3& centre_line) {
    const double ak = dot(axis_k, centre_line);
    const double al = dot(axis_l, centre_line);
    const Vec3 pk = axis_k - ak * centre_line;
    const Vec3 pl = axis_l - al * centre_line;
    return 2.0 * ak * al + dot(pk, pl);
}

AngleGeometry extract_angles(const Vec3& axis_k, const Vec3& axis_l, const Vec3& centre_line) {
    const double ak = std::clamp(dot(axis_k, centre_line), -1.0, 1.0);
    const double al = std::clamp(dot(axis_l, centre_line), -1.0, 1.0);
    const Vec3 pk = axis_k - ak * centre_line;
    const Vec3 pl = axis_l - al * centre_line;
    AngleGeometry g;
    g.theta_k = std::atan2(ak, norm(pk));
    g.theta_l = std::atan2(al, norm(pl));
    const double denom = norm(pk) * norm(pl);
    g.phi = denom > 0.0 ? std::acos(std::clamp(dot(pk, pl) / denom, -1.0, 1.0)) : 0.0;
    return g;
}

Vec3 coil_position(const Constellation& c, std::size_t coil) {
    if (coil >= c.coil_count()) throw IndexError("coil index " + std::to_string(coil) + " out of range");
    return coil < 3 ? Vec3{} : c.receivers[coil - 3].position;
}

Vec3 coil_axis(const Constellation& c, std::size_t coil) {
    if (coil >= c.coil_count()) throw IndexError("coil index " + std::to_string(coil) + " out of range");
    return coil < 3 ? c.tx_basis[coil] : c.receivers[coil - 3].axis;
}

double mutual_inductance(const Constellation& c, std::size_t k, std::size_t l) {
    if (k >= c.coil_count() || l >= c.coil_count()) {
        throw IndexError("coil pair (" + std::to_string(k) + ", " + std::to_string(l) + ") out of range");
    }
    if (k == l) throw IndexError("mutual inductance needs two distinct coils");
    if (k < 3 && l < 3) return 0.0;

    // Order the pair so the result is bitwise symmetric.
    const std::size_t a = std::min(k, l);
    const std::size_t b = std::max(k, l);
    const Vec3 separation = coil_position(c, b) - coil_position(c, a);
    const double distance = norm(separation);
    if (distance == 0.0) {
        throw CoincidentCoils("coils " + std::to_string(a) + " and " + std::to_string(b) + " share a position");
    }
    const Vec3 line = (1.0 / distance) * separation;
    const double j = coupling_factor_vectors(coil_axis(c, a), coil_axis(c, b), line);
    if (a < 3) return c.ref_mutual * j;
    const double ratio = c.ref_distance / distance;
    return c.ref_mutual * ratio * ratio * ratio * j;
}

Constellation random_constellation(std::size_t receivers, double coupling_factor,
                                   const CircuitParams& params, std::mt19937_64& rng,
                                   const LoadPolicy& policy, double distance,
                                   bool random_transmitter) {
    if (receivers == 0) throw ValidationError("random_constellation needs at least one receiver");
    if (!(coupling_factor > 0.0)) throw ValidationError("coupling factor must be positive");

    Constellation c;
    c.ref_distance = distance;
    if (random_transmitter) {
        const Rotation r = random_rotation(rng);
        c.tx_basis = {r.column(0), r.column(1), r.column(2)};
    }
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    c.receivers.reserve(receivers);
    for (std::size_t i = 0; i < receivers; ++i) {
        Receiver rx;
        rx.position = position_on_circle(distance, angle(rng));
        rx.axis = random_unit_vector(rng);
        c.receivers.push_back(rx);
    }
    return c.with_coupling(coupling_factor, params, policy);
}

} // namespace mibf
