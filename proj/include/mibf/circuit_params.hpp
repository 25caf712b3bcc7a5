#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <variant>

namespace mibf {

/// Electrical constants shared by every resonant loop in the network.
/// All coils (transmitter and receiver) use the same L, C and R.
struct CircuitParams {
    double inductance = 2.0e-7;   ///< L [H]
    double resistance = 1.0;      ///< R [ohm], copper loss
    double resonance = 125.0e6;   ///< f0 [Hz]; C is tuned to it
    double frequency = 125.0e6;   ///< f [Hz], operating point

    /// Circuit tuned to `resonance` with the given L; operated at resonance.
    static CircuitParams at_resonance(double resonance_hz, double inductance_h = 2.0e-7,
                                      double resistance_ohm = 1.0);

    /// Default scene: R = 1 ohm, f = f0 = 125 MHz, L = 200 nH.
    static CircuitParams defaults() { return at_resonance(125.0e6); }

    /// C = 1 / ((2 pi f0)^2 L).
    double capacitance() const noexcept {
        const double w0 = 2.0 * std::numbers::pi * resonance;
        return 1.0 / (w0 * w0 * inductance);
    }
    double angular_frequency() const noexcept { return 2.0 * std::numbers::pi * frequency; }

    /// Imaginary part of the series impedance, wL - 1/(wC) = L (w^2 - w0^2) / w.
    /// Exactly zero when f == f0.
    double self_reactance() const noexcept {
        const double w = angular_frequency();
        const double w0 = 2.0 * std::numbers::pi * resonance;
        return inductance * (w - w0) * (w + w0) / w;
    }

    /// Reference mutual inductance M = F R / (2 pi f) for coupling factor F.
    double mutual_for_coupling(double coupling_factor) const noexcept {
        return coupling_factor * resistance / angular_frequency();
    }
    double coupling_for_mutual(double mutual) const noexcept {
        return angular_frequency() * mutual / resistance;
    }

    /// Throws ValidationError unless L, R, f0, f are positive and finite.
    void validate() const;
};

/// Load resistance Z_L = R sqrt(1 + F^2), the single-link matched value.
struct MatchedLoad {};

struct FixedLoad {
    double ohms = 0.0;
};

using LoadPolicy = std::variant<MatchedLoad, FixedLoad>;

double load_for(const LoadPolicy& policy, double coupling_factor, double resistance);
std::string describe(const LoadPolicy& policy);

} // namespace mibf
