#include "mibf/circuit.hpp"

#include "mibf/errors.hpp"

#include <cmath>

namespace mibf {

CircuitParams CircuitParams::at_resonance(double resonance_hz, double inductance_h, double resistance_ohm) {
    CircuitParams p;
    p.inductance = inductance_h;
    p.resistance = resistance_ohm;
    p.resonance = resonance_hz;
    p.frequency = resonance_hz;
    return p;
}

void CircuitParams::validate() const {
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(inductance)) throw ValidationError("inductance must be positive");
    if (!positive(resonance)) throw ValidationError("resonance frequency must be positive");
    if (!positive(resistance)) throw ValidationError("resistance must be positive");
    if (!positive(frequency)) throw ValidationError("frequency must be positive");
}

double load_for(const LoadPolicy& policy, double coupling_factor, double resistance) {
    if (const auto* fixed = std::get_if<FixedLoad>(&policy)) return fixed->ohms;
    return resistance * std::sqrt(1.0 + coupling_factor * coupling_factor);
}

std::string describe(const LoadPolicy& policy) {
    if (const auto* fixed = std::get_if<FixedLoad>(&policy)) {
        return "fixed(" + std::to_string(fixed->ohms) + " ohm)";
    }
    return "matched(R*sqrt(1+F^2))";
}

CMatrix SystemImpedance::full() const {
    const std::size_t k = receiver_count();
    CMatrix z(k + 3, k + 3);
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) z(r, c) = z_tx(r, c);
        for (std::size_t c = 0; c < k; ++c) {
            z(r, 3 + c) = z_ch(r, c);
            z(3 + c, r) = z_ch(r, c);
        }
    }
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c) z(3 + r, 3 + c) = z_rx(r, c);
    return z;
}

SystemImpedance build_impedance(const Constellation& c, const CircuitParams& params) {
    params.validate();
    c.validate(params);

    const std::size_t k = c.receiver_count();
    const double w = params.angular_frequency();
    const Complex self{params.resistance, params.self_reactance()};

    SystemImpedance z;
    z.z_tx = CMatrix(3, 3);
    for (std::size_t i = 0; i < 3; ++i) z.z_tx(i, i) = self;

    z.z_rx = CMatrix(k, k);
    z.z_ch = CMatrix(3, k);
    z.loads.resize(k);
    z.priorities.resize(k);
    for (std::size_t l = 0; l < k; ++l) {
        const auto& rx = c.receivers[l];
        z.loads[l] = rx.load;
        z.priorities[l] = rx.priority;
        z.z_rx(l, l) = self + rx.load;
        for (std::size_t t = 0; t < 3; ++t) {
            z.z_ch(t, l) = Complex{0.0, w * mutual_inductance(c, t, 3 + l)};
        }
        for (std::size_t m = l + 1; m < k; ++m) {
            const Complex zlm{0.0, w * mutual_inductance(c, 3 + l, 3 + m)};
            z.z_rx(l, m) = zlm;
            z.z_rx(m, l) = zlm;
        }
    }
    return z;
}

TransferMatrices transfer_matrices(const SystemImpedance& z) {
    const std::size_t k = z.receiver_count();
    TransferMatrices t;
    if (k == 0) {
        t.a = linalg::invert(z.z_tx);
        t.c = CMatrix(0, 3);
        return t;
    }
    const linalg::LuDecomposition rx_lu(z.z_rx);
    const CMatrix rx_inv_cht = rx_lu.solve(z.z_ch.transpose());  // Z_rx^-1 Z_ch^T
    const CMatrix schur = z.z_tx - z.z_ch * rx_inv_cht;
    t.a = linalg::invert(schur);
    t.c = Complex{-1.0} * (rx_inv_cht * t.a);
    return t;
}

std::vector<double> NetworkSolution::receiver_efficiencies() const {
    std::vector<double> out(p_rx.size());
    for (std::size_t l = 0; l < p_rx.size(); ++l) out[l] = p_rx[l] / p_tx_total;
    return out;
}

NetworkSolution evaluate_drive(const SystemImpedance& z, const TransferMatrices& t, const CVector& u_tx) {
    if (u_tx.size() != 3) throw DimensionMismatch("drive vector must have three entries");
    if (linalg::norm2(u_tx) == 0.0) throw ZeroDrive("efficiency is undefined for a zero drive vector");

    NetworkSolution s;
    s.a = t.a;
    s.c = t.c;
    s.i_tx = t.a * u_tx;
    s.i_rx = t.c * u_tx;
    for (std::size_t i = 0; i < 3; ++i) s.p_tx_total += std::abs(u_tx[i]) * std::abs(s.i_tx[i]);
    s.p_rx.resize(z.receiver_count());
    for (std::size_t l = 0; l < z.receiver_count(); ++l) {
        s.p_rx[l] = std::norm(s.i_rx[l]) * z.loads[l];
        s.p_rx_weighted += z.priorities[l] * s.p_rx[l];
    }
    s.efficiency = s.p_rx_weighted / s.p_tx_total;
    return s;
}

NetworkSolution solve_network(const SystemImpedance& z, const CVector& u_tx) {
    return evaluate_drive(z, transfer_matrices(z), u_tx);
}

double efficiency(const Constellation& c, const CircuitParams& params, const CVector& u_tx) {
    return solve_network(build_impedance(c, params), u_tx).efficiency;
}

CMatrix receiver_matrix(const CMatrix& c, const std::vector<double>& priorities,
                        const std::vector<double>& loads) {
    if (c.rows() != priorities.size() || c.rows() != loads.size()) {
        throw DimensionMismatch("receiver_matrix: C rows must match priorities and loads");
    }
    const std::size_t n = c.cols();
    CMatrix d(n, n);
    for (std::size_t l = 0; l < c.rows(); ++l) {
        const double weight = priorities[l] * loads[l];
        if (weight == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex ci = std::conj(c(l, i)) * weight;
            for (std::size_t j = 0; j < n; ++j) d(i, j) += ci * c(l, j);
        }
    }
    // Exact Hermitian symmetry, real diagonal.
    for (std::size_t i = 0; i < n; ++i) {
        d(i, i) = d(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) d(j, i) = std::conj(d(i, j));
    }
    return d;
}

} // namespace mibf
