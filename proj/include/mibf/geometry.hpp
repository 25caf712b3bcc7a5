#pragma once

// Scene geometry: transmitter 3D-coil basis, receiver placement and axes, and
// the orientation-dependent coupling J between any two coils.

#include "mibf/circuit_params.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace mibf {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
    bool operator==(const Vec3&) const = default;
};

inline Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
inline Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
inline Vec3 operator*(double s, Vec3 a) { return a *= s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double norm(const Vec3& v);
Vec3 unit(const Vec3& v);

/// Proper rotation stored row-major; `apply` maps body to world coordinates.
struct Rotation {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Rotation identity() { return {}; }
    /// From a (not necessarily normalized) quaternion w + xi + yj + zk.
    static Rotation from_quaternion(double w, double x, double y, double z);

    Vec3 apply(const Vec3& v) const;
    Vec3 column(std::size_t c) const { return {m[c], m[3 + c], m[6 + c]}; }
};

/// Uniform rotation from a normalized 4D Gaussian quaternion.
Rotation random_rotation(std::mt19937_64& rng);
/// Uniform direction on the unit sphere.
Vec3 random_unit_vector(std::mt19937_64& rng);

struct Receiver {
    Vec3 position;        ///< [m], transmitter at the origin
    Vec3 axis;            ///< coil axis, unit norm
    double priority = 1.0;
    double load = 1.0;    ///< Z_L [ohm]
};

/// Complete scene. The transmitter's three coils sit at the origin along the
/// columns of `tx_basis`. Every receiver lies at `ref_distance` from the
/// origin, so all transmitter-receiver links share `ref_mutual`.
struct Constellation {
    std::array<Vec3, 3> tx_basis{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
    std::vector<Receiver> receivers;
    double ref_distance = 0.4;     ///< d [m]
    double ref_mutual = 0.0;       ///< M-bar [H], mutual inductance at d with J = 1
    double coupling_factor = 0.0;  ///< F = 2 pi f M-bar / R

    std::size_t receiver_count() const noexcept { return receivers.size(); }
    std::size_t coil_count() const noexcept { return receivers.size() + 3; }

    /// Rescales to a new F at fixed geometry, updating M-bar and (for matched
    /// policies) the receiver loads.
    Constellation with_coupling(double coupling_factor, const CircuitParams& params,
                                const LoadPolicy& policy) const;

    /// Throws ValidationError when an invariant is broken.
    void validate(const CircuitParams& params) const;
};

/// Polarization angles of one coil pair.
struct AngleGeometry {
    double theta_k = 0.0;  ///< radians
    double theta_l = 0.0;
    double phi = 0.0;
};

/// J = 2 sin(theta_k) sin(theta_l) + cos(theta_k) cos(theta_l) cos(phi).
double coupling_factor_angles(const AngleGeometry& g);

/// J from coil axes and the unit vector joining the coil centres. sin(theta)
/// is the axis component along the centre line and phi the angle between
/// the axis projections onto the plane orthogonal to it, so coaxial coils
/// give 2 and parallel broadside coils give 1.
double coupling_factor_vectors(const Vec3& axis_k, const Vec3& axis_l, const Vec3& centre_line);

/// Inverse of the convention above; phi is 0 when either projection vanishes.
AngleGeometry extract_angles(const Vec3& axis_k, const Vec3& axis_l, const Vec3& centre_line);

/// Zero-based coil index: 0..2 are transmitter coils, 3..K+2 receivers.
Vec3 coil_position(const Constellation& c, std::size_t coil);
Vec3 coil_axis(const Constellation& c, std::size_t coil);

/// Mutual inductance [H] between two distinct coils.
///  - transmitter/transmitter: 0 (orthogonal co-located 3D coil)
///  - transmitter/receiver: M-bar * J along the connecting line
///  - receiver/receiver: M-bar * (d / d_kl)^3 * J along the connecting line
/// Throws IndexError for out-of-range or equal indices and CoincidentCoils
/// when two coupled coils share a position.
double mutual_inductance(const Constellation& c, std::size_t k, std::size_t l);

/// Receivers at uniform random angles on the circle of radius `distance` in
/// the z = 0 plane, axes uniform on the sphere, transmitter basis drawn
/// uniformly from SO(3). Draw order is fixed so a seed reproduces the scene.
Constellation random_constellation(std::size_t receivers, double coupling_factor,
                                   const CircuitParams& params, std::mt19937_64& rng,
                                   const LoadPolicy& policy = MatchedLoad{}, double distance = 0.4,
                                   bool random_transmitter = true);

/// Receiver on the placement circle at `angle` radians.
Vec3 position_on_circle(double distance, double angle);

} // namespace mibf
